#include "psp/ingestion.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "psp/errors.hpp"

namespace psp {

namespace {

using nlohmann::json;

bool tag_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c; }

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), ascii_lower);
    return out;
}

bool contains_ci(const std::string& lower_haystack, const std::string& lower_needle) {
    return lower_haystack.find(lower_needle) != std::string::npos;
}

bool whole_word_ci(const std::string& lower_haystack, const std::string& lower_needle) {
    if (lower_needle.empty()) return false;
    std::size_t pos = 0;
    while ((pos = lower_haystack.find(lower_needle, pos)) != std::string::npos) {
        const bool left_ok = pos == 0 || !tag_char(lower_haystack[pos - 1]);
        const std::size_t end = pos + lower_needle.size();
        const bool right_ok = end == lower_haystack.size() || !tag_char(lower_haystack[end]);
        if (left_ok && right_ok) return true;
        ++pos;
    }
    return false;
}

SocialPost post_from_json(const json& j) {
    SocialPost post;
    post.id = j.at("id").get<std::string>();
    post.created_at = parse_utc(j.at("created_at").get<std::string>());
    post.text = j.at("text").get<std::string>();
    post.views = j.at("views").get<std::uint64_t>();
    post.interactions = j.at("interactions").get<std::uint64_t>();
    post.author_followers = j.at("author_followers").get<std::uint64_t>();
    if (j.contains("region") && !j.at("region").is_null())
        post.region = j.at("region").get<std::string>();
    post.hashtags = extract_hashtags(post.text);
    return post;
}

json post_to_json(const SocialPost& post) {
    json j;
    j["id"] = post.id;
    j["created_at"] = format_utc(post.created_at);
    j["text"] = post.text;
    j["views"] = post.views;
    j["interactions"] = post.interactions;
    j["author_followers"] = post.author_followers;
    if (post.region) j["region"] = *post.region;
    return j;
}

}  // namespace

std::vector<std::string> extract_hashtags(std::string_view text) {
    std::vector<std::string> tags;
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '#') continue;
        std::size_t j = i + 1;
        while (j < text.size() && tag_char(text[j])) ++j;
        if (j == i + 1) continue;  // bare '#'
        std::string tag = to_lower(text.substr(i + 1, j - i - 1));
        if (seen.insert(tag).second) tags.push_back(std::move(tag));
        i = j - 1;
    }
    return tags;
}

PostCollection PostCollection::from_posts(std::vector<SocialPost> posts) {
    for (auto& post : posts) {
        if (post.id.empty()) throw ValidationError("post with empty id");
        post.hashtags = extract_hashtags(post.text);
    }
    std::sort(posts.begin(), posts.end(), [](const SocialPost& a, const SocialPost& b) {
        if (a.created_at != b.created_at) return a.created_at < b.created_at;
        return a.id < b.id;
    });
    std::unordered_set<std::string_view> ids;
    for (const auto& post : posts)
        if (!ids.insert(post.id).second)
            throw ValidationError("duplicate post id '" + post.id + "'");
    PostCollection c;
    c.posts_ = std::move(posts);
    return c;
}

PostCollection PostCollection::merge(const PostCollection& a, const PostCollection& b) {
    std::vector<SocialPost> all = a.posts_;
    all.insert(all.end(), b.posts_.begin(), b.posts_.end());
    return from_posts(std::move(all));
}

CorpusLoadResult load_corpus(const std::filesystem::path& file, ParseMode mode) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open corpus '" + file.string() + "'");

    std::vector<SocialPost> posts;
    std::unordered_map<std::string, std::size_t> id_lines;
    std::size_t skipped = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        SocialPost post;
        try {
            post = post_from_json(json::parse(line));
            if (post.id.empty()) throw ParseError("empty id");
        } catch (const std::exception& e) {
            if (mode == ParseMode::Lenient) {
                ++skipped;
                continue;
            }
            throw ParseError("corpus '" + file.string() + "' line " + std::to_string(line_no) +
                             ": " + e.what());
        }
        auto [it, inserted] = id_lines.emplace(post.id, line_no);
        if (!inserted) {
            if (mode == ParseMode::Lenient) {
                ++skipped;
                continue;
            }
            throw ParseError("corpus '" + file.string() + "': duplicate id '" + post.id +
                             "' on lines " + std::to_string(it->second) + " and " +
                             std::to_string(line_no));
        }
        posts.push_back(std::move(post));
    }
    if (in.bad()) throw IoError("error while reading corpus '" + file.string() + "'");

    return CorpusLoadResult{PostCollection::from_posts(std::move(posts)), skipped};
}

void save_corpus(const PostCollection& posts, const std::filesystem::path& file) {
    const auto tmp = file.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw IoError("cannot write corpus '" + file.string() + "'");
        for (const auto& post : posts) out << post_to_json(post).dump() << '\n';
        out.flush();
        if (!out) throw IoError("error while writing corpus '" + file.string() + "'");
    }
    std::filesystem::rename(tmp, file);
}

void PostQuery::validate() const {
    if (application_terms.empty())
        throw ValidationError("query needs at least one application term");
    for (const auto& term : application_terms)
        if (term.empty()) throw ValidationError("empty application term");
    if (window && !(window->start < window->end))
        throw ValidationError("query window start must precede end");
}

std::vector<MatchedPost> query_posts(const PostCollection& posts, const PostQuery& query) {
    query.validate();

    std::vector<std::string> terms;
    terms.reserve(query.application_terms.size());
    for (const auto& t : query.application_terms) terms.push_back(to_lower(t));
    std::vector<std::string> keywords;
    keywords.reserve(query.attack_keywords.size());
    for (const auto& k : query.attack_keywords) keywords.push_back(to_lower(k));

    std::vector<MatchedPost> out;
    for (const auto& post : posts) {
        if (query.window && !query.window->contains(post.created_at)) continue;
        if (query.region && post.region && *query.region != *post.region) continue;

        const std::string lower_text = to_lower(post.text);
        const auto has_tag = [&](const std::string& tag) {
            return std::find(post.hashtags.begin(), post.hashtags.end(), tag) !=
                   post.hashtags.end();
        };

        const bool app_match = std::any_of(terms.begin(), terms.end(), [&](const std::string& t) {
            return contains_ci(lower_text, t) || has_tag(t);
        });
        if (!app_match) continue;

        std::vector<std::string> matched;
        for (const auto& keyword : keywords)
            if (has_tag(keyword) || whole_word_ci(lower_text, keyword)) matched.push_back(keyword);
        if (matched.empty()) continue;

        out.push_back(MatchedPost{post, std::move(matched)});
    }
    return out;
}

LiveFetchResult fetch_live(LiveSource& source, const PostQuery& query) {
    query.validate();
    const std::vector<RawPost> raw = source.fetch(query);

    std::vector<SocialPost> posts;
    std::unordered_set<std::string> ids;
    std::size_t skipped = 0;
    for (const auto& r : raw) {
        if (r.id.empty() || r.views < 0 || r.interactions < 0 || r.author_followers < 0 ||
            !ids.insert(r.id).second) {
            ++skipped;
            continue;
        }
        SocialPost post;
        post.id = r.id;
        try {
            post.created_at = parse_utc(r.created_at);
        } catch (const ParseError&) {
            ids.erase(r.id);
            ++skipped;
            continue;
        }
        post.text = r.text;
        post.views = static_cast<std::uint64_t>(r.views);
        post.interactions = static_cast<std::uint64_t>(r.interactions);
        post.author_followers = static_cast<std::uint64_t>(r.author_followers);
        post.region = r.region;
        posts.push_back(std::move(post));
    }
    return LiveFetchResult{PostCollection::from_posts(std::move(posts)), skipped};
}

}  // namespace psp
