#include "psp/keyword_db.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "psp/errors.hpp"

namespace psp {

namespace {

constexpr std::string_view kHeaderPrefix = "psp-keywords v";

bool valid_tag(std::string_view tag) {
    if (tag.empty()) return false;
    for (char c : tag)
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
    return true;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find('\t', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

}  // namespace

std::string_view to_string(AttackerClass c) {
    return c == AttackerClass::Insider ? "insider" : "outsider";
}

AttackerClass attacker_class_from_string(std::string_view s) {
    if (s == "insider") return AttackerClass::Insider;
    if (s == "outsider") return AttackerClass::Outsider;
    throw ParseError("unknown attacker class '" + std::string(s) + "'");
}

void AttackKeyword::validate() const {
    if (!valid_tag(tag))
        throw ValidationError("invalid keyword tag '" + tag +
                              "' (expected lowercase letters, digits or underscore)");
    if (scenario.empty()) throw ValidationError("keyword '" + tag + "' has an empty scenario");
    if (origin == KeywordOrigin::AutoLearned && source_run_id.empty())
        throw ValidationError("auto-learned keyword '" + tag + "' is missing its source run id");
    if (origin == KeywordOrigin::Seed && !source_run_id.empty())
        throw ValidationError("seed keyword '" + tag + "' must not carry a run id");
}

const AttackKeyword* KeywordDb::find(std::string_view tag) const {
    const auto it = std::lower_bound(
        entries_.begin(), entries_.end(), tag,
        [](const AttackKeyword& e, std::string_view t) { return e.tag < t; });
    if (it != entries_.end() && it->tag == tag) return &*it;
    return nullptr;
}

std::vector<std::string> KeywordDb::scenarios() const {
    std::set<std::string> labels;
    for (const auto& e : entries_) labels.insert(e.scenario);
    return {labels.begin(), labels.end()};
}

std::vector<std::string> KeywordDb::tags() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.tag);
    return out;
}

KeywordDb KeywordDb::with(AttackKeyword entry) const {
    entry.validate();
    if (contains(entry.tag)) throw ValidationError("keyword '" + entry.tag + "' already present");
    KeywordDb out = *this;
    out.entries_.insert(std::upper_bound(out.entries_.begin(), out.entries_.end(), entry,
                                         [](const AttackKeyword& a, const AttackKeyword& b) {
                                             return a.tag < b.tag;
                                         }),
                        std::move(entry));
    return out;
}

KeywordDb seed_db(const std::vector<AttackKeyword>& entries) {
    for (const auto& e : entries) e.validate();

    std::map<std::string, int> counts;
    for (const auto& e : entries) ++counts[e.tag];
    std::string collisions;
    for (const auto& [tag, n] : counts)
        if (n > 1) collisions += (collisions.empty() ? "" : ", ") + tag;
    if (!collisions.empty())
        throw ValidationError("duplicate keyword tags: " + collisions);

    KeywordDb db;
    db.entries_ = entries;
    std::sort(db.entries_.begin(), db.entries_.end(),
              [](const AttackKeyword& a, const AttackKeyword& b) { return a.tag < b.tag; });
    return db;
}

void ExpandParams::validate() const {
    if (min_cooccurrence < 1)
        throw ValidationError("min_cooccurrence must be a positive integer");
    if (min_support_fraction < 0.0 || min_support_fraction > 1.0)
        throw ValidationError("min_support_fraction must lie in [0, 1]");
}

ExpandResult expand_keywords(const KeywordDb& db, const std::vector<MatchedPost>& matches,
                             const ExpandParams& params) {
    params.validate();
    if (matches.empty()) return ExpandResult{db, {}};

    // Per candidate: posts co-occurring with any existing keyword, pair counts
    // per existing tag, and the newest supporting post timestamp.
    struct CandidateStats {
        int support = 0;
        std::map<std::string, int> pair_counts;
        UtcTime newest{};
    };
    std::map<std::string, CandidateStats> candidates;

    for (const auto& match : matches) {
        std::set<std::string> present;  // existing db tags occurring in this post
        for (const auto& k : match.matched_keywords)
            if (db.contains(k)) present.insert(k);
        for (const auto& tag : match.post.hashtags)
            if (db.contains(tag)) present.insert(tag);
        if (present.empty()) continue;

        for (const auto& tag : match.post.hashtags) {
            if (db.contains(tag)) continue;
            auto& stats = candidates[tag];
            ++stats.support;
            for (const auto& existing : present) ++stats.pair_counts[existing];
            stats.newest = std::max(stats.newest, match.post.created_at);
        }
    }

    const double total = static_cast<double>(matches.size());
    KeywordDb out = db;
    std::vector<AttackKeyword> added;
    for (const auto& [tag, stats] : candidates) {
        if (stats.support < params.min_cooccurrence) continue;
        if (static_cast<double>(stats.support) < params.min_support_fraction * total) continue;
        if (!valid_tag(tag)) continue;

        // Parent: most frequent co-occurring existing keyword; ties fall to
        // the lexicographically smallest tag (map iteration order).
        const AttackKeyword* parent = nullptr;
        int best = 0;
        for (const auto& [existing, count] : stats.pair_counts) {
            if (count > best) {
                best = count;
                parent = db.find(existing);
            }
        }

        AttackKeyword entry;
        entry.tag = tag;
        entry.scenario = parent->scenario;
        entry.attacker_class = parent->attacker_class;
        entry.vector = parent->vector;
        entry.origin = KeywordOrigin::AutoLearned;
        entry.source_run_id = params.run_id.empty() ? "unversioned" : params.run_id;
        entry.added_at = stats.newest;
        out = out.with(entry);
        added.push_back(std::move(entry));
    }
    return ExpandResult{std::move(out), std::move(added)};
}

std::string db_to_text(const KeywordDb& db) {
    std::ostringstream out;
    out << kHeaderPrefix << KeywordDb::kFormatVersion << '\n';
    for (const auto& e : db.entries()) {
        out << e.tag << '\t' << e.scenario << '\t' << to_string(e.attacker_class) << '\t'
            << to_string(e.vector) << '\t'
            << (e.origin == KeywordOrigin::Seed ? "seed" : "auto:" + e.source_run_id) << '\t'
            << format_utc(e.added_at) << '\n';
    }
    return out.str();
}

void save_db(const KeywordDb& db, const std::filesystem::path& file) {
    const auto tmp = file.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw IoError("cannot write keyword db '" + file.string() + "'");
        out << db_to_text(db);
        out.flush();
        if (!out) throw IoError("error while writing keyword db '" + file.string() + "'");
    }
    std::filesystem::rename(tmp, file);
}

KeywordDb load_db(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open keyword db '" + file.string() + "'");

    std::string header;
    if (!std::getline(in, header))
        throw ParseError("keyword db '" + file.string() + "' is empty (missing header)");
    if (header.rfind(kHeaderPrefix, 0) != 0)
        throw ParseError("keyword db '" + file.string() + "' line 1: bad header '" + header + "'");
    int version = 0;
    try {
        version = std::stoi(header.substr(kHeaderPrefix.size()));
    } catch (const std::exception&) {
        throw ParseError("keyword db '" + file.string() + "' line 1: bad version in header");
    }
    if (version != KeywordDb::kFormatVersion)
        throw MigrationError("keyword db '" + file.string() + "' has format version " +
                             std::to_string(version) + "; this build reads version " +
                             std::to_string(KeywordDb::kFormatVersion));

    std::vector<AttackKeyword> entries;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 6)
            throw ParseError("keyword db '" + file.string() + "' line " +
                             std::to_string(line_no) + ": expected 6 tab-separated fields, got " +
                             std::to_string(fields.size()));
        AttackKeyword e;
        e.tag = fields[0];
        e.scenario = fields[1];
        try {
            e.attacker_class = attacker_class_from_string(fields[2]);
            e.vector = attack_vector_from_string(fields[3]);
            if (fields[4] == "seed") {
                e.origin = KeywordOrigin::Seed;
            } else if (fields[4].rfind("auto:", 0) == 0) {
                e.origin = KeywordOrigin::AutoLearned;
                e.source_run_id = fields[4].substr(5);
            } else {
                throw ParseError("bad origin '" + fields[4] + "'");
            }
            e.added_at = parse_utc(fields[5]);
            e.validate();
        } catch (const Error& err) {
            throw ParseError("keyword db '" + file.string() + "' line " +
                             std::to_string(line_no) + ": " + err.what());
        }
        entries.push_back(std::move(e));
    }
    if (in.bad()) throw IoError("error while reading keyword db '" + file.string() + "'");
    return seed_db(entries);
}

}  // namespace psp
