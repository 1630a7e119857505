#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "psp/timeutil.hpp"

namespace psp {

/// One normalized social post. `hashtags` is always derived from `text` via
/// extract_hashtags; it is never read from external input.
struct SocialPost {
    std::string id;
    UtcTime created_at;
    std::string text;
    std::vector<std::string> hashtags;
    std::uint64_t views = 0;
    std::uint64_t interactions = 0;
    std::uint64_t author_followers = 0;
    std::optional<std::string> region;

    bool operator==(const SocialPost&) const = default;
};

/// Every maximal run of [A-Za-z0-9_] immediately following '#', lowercased,
/// deduplicated preserving first occurrence.
std::vector<std::string> extract_hashtags(std::string_view text);

/// Immutable post collection ordered by (created_at, id) with unique ids.
class PostCollection {
public:
    PostCollection() = default;

    /// Sorts, recomputes hashtags, and enforces id uniqueness.
    /// Throws ValidationError on a duplicate or empty id.
    static PostCollection from_posts(std::vector<SocialPost> posts);

    const std::vector<SocialPost>& posts() const { return posts_; }
    std::size_t size() const { return posts_.size(); }
    bool empty() const { return posts_.empty(); }
    auto begin() const { return posts_.begin(); }
    auto end() const { return posts_.end(); }

    /// Merges two collections (ids must stay unique across both).
    static PostCollection merge(const PostCollection& a, const PostCollection& b);

private:
    std::vector<SocialPost> posts_;
};

enum class ParseMode { Strict, Lenient };

struct CorpusLoadResult {
    PostCollection posts;
    std::size_t skipped_lines = 0;  // only populated in lenient mode
};

/// Loads a line-delimited corpus file (one JSON record per line with fields
/// id, created_at, text, views, interactions, author_followers, region).
/// Strict mode throws ParseError naming the offending line; lenient mode
/// skips bad lines and counts them.
CorpusLoadResult load_corpus(const std::filesystem::path& file, ParseMode mode = ParseMode::Strict);

/// Writes the collection back in the corpus format; load_corpus of the result
/// reproduces the collection field-exactly.
void save_corpus(const PostCollection& posts, const std::filesystem::path& file);

/// Query over a post collection.
struct PostQuery {
    std::vector<std::string> application_terms;  // non-empty, lowercase
    std::vector<std::string> attack_keywords;    // tags from the keyword db
    std::optional<std::string> region;
    std::optional<TimeWindow> window;

    /// Throws ValidationError if terms are empty or the window is inverted.
    void validate() const;
};

/// A post together with the attack keywords that matched it.
struct MatchedPost {
    SocialPost post;
    std::vector<std::string> matched_keywords;  // non-empty, query order
};

/// A post matches when (a) an application term occurs as a case-insensitive
/// substring of the text or equals a hashtag, (b) at least one attack keyword
/// equals a hashtag or occurs as a case-insensitive whole word in the text,
/// (c) regions match when both are present, and (d) created_at falls in the
/// window when one is given. Output preserves collection order.
std::vector<MatchedPost> query_posts(const PostCollection& posts, const PostQuery& query);

/// Raw record handed over by a live source before normalization. Counters are
/// signed so that invalid feeds can be detected and skipped.
struct RawPost {
    std::string id;
    std::string created_at;  // ISO-8601 UTC
    std::string text;
    std::int64_t views = 0;
    std::int64_t interactions = 0;
    std::int64_t author_followers = 0;
    std::optional<std::string> region;
};

/// Extension point for live post feeds. No implementation ships enabled by
/// default; callers serialize calls per source instance unless the source
/// declares parallel support.
class LiveSource {
public:
    virtual ~LiveSource() = default;

    /// May throw RetryableError when the upstream throttles.
    virtual std::vector<RawPost> fetch(const PostQuery& query) = 0;

    virtual bool supports_parallel_calls() const { return false; }
};

struct LiveFetchResult {
    PostCollection posts;
    std::size_t skipped = 0;  // records that failed normalization
};

/// Fetches and normalizes posts from a live source. Invalid records (bad
/// timestamp, negative counters, empty or duplicate id) are skipped and
/// counted; RetryableError from the source propagates.
LiveFetchResult fetch_live(LiveSource& source, const PostQuery& query);

}  // namespace psp
