#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "psp/feasibility.hpp"
#include "psp/ingestion.hpp"
#include "psp/timeutil.hpp"

namespace psp {

enum class AttackerClass { Insider, Outsider };
enum class KeywordOrigin { Seed, AutoLearned };

std::string_view to_string(AttackerClass c);  // "insider" | "outsider"
AttackerClass attacker_class_from_string(std::string_view s);

/// One attack keyword with its threat-scenario attribution.
struct AttackKeyword {
    std::string tag;       // lowercase, [a-z0-9_]+, no '#'
    std::string scenario;  // threat-scenario label, e.g. "dpf_tampering"
    AttackerClass attacker_class = AttackerClass::Insider;
    AttackVector vector = AttackVector::Physical;
    KeywordOrigin origin = KeywordOrigin::Seed;
    std::string source_run_id;  // empty unless origin == AutoLearned
    UtcTime added_at;

    /// Throws ValidationError when the tag or scenario is malformed.
    void validate() const;

    bool operator==(const AttackKeyword&) const = default;
};

/// Immutable keyword set, unique by tag, ordered lexicographically.
class KeywordDb {
public:
    static constexpr int kFormatVersion = 1;

    KeywordDb() = default;

    const std::vector<AttackKeyword>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    bool contains(std::string_view tag) const { return find(tag) != nullptr; }
    const AttackKeyword* find(std::string_view tag) const;

    /// All distinct scenario labels, sorted.
    std::vector<std::string> scenarios() const;
    /// All tags, sorted.
    std::vector<std::string> tags() const;

    /// Returns a copy with the entry added. Throws ValidationError on a
    /// duplicate tag.
    KeywordDb with(AttackKeyword entry) const;

    bool operator==(const KeywordDb&) const = default;

    friend KeywordDb seed_db(const std::vector<AttackKeyword>& entries);

private:
    std::vector<AttackKeyword> entries_;  // sorted by tag
};

/// Builds a db from the given entries. Throws ValidationError listing every
/// duplicated tag, or naming the first invalid entry.
KeywordDb seed_db(const std::vector<AttackKeyword>& entries);

struct ExpandParams {
    int min_cooccurrence = 3;
    double min_support_fraction = 0.05;  // fraction of all matched posts
    std::string run_id;                  // recorded on auto-learned entries

    void validate() const;
};

struct ExpandResult {
    KeywordDb db;
    std::vector<AttackKeyword> added;  // sorted by tag
};

/// Auto-learning: a hashtag not yet in the db is added when it co-occurs with
/// an existing keyword in at least min_cooccurrence matched posts and in at
/// least min_support_fraction of all matched posts. New entries inherit the
/// scenario, class and vector of the existing keyword they co-occur with most
/// often (ties broken toward the lexicographically smallest tag); added_at is
/// the newest co-occurring post's timestamp, keeping expansion deterministic.
ExpandResult expand_keywords(const KeywordDb& db, const std::vector<MatchedPost>& matches,
                             const ExpandParams& params);

/// Renders the db in its on-disk format (version header + one keyword per line).
std::string db_to_text(const KeywordDb& db);

/// Versioned tab-separated text format, one keyword per line, written via
/// temp-file-and-rename. load_db(save_db(db)) is the identity.
void save_db(const KeywordDb& db, const std::filesystem::path& file);
KeywordDb load_db(const std::filesystem::path& file);

}  // namespace psp
