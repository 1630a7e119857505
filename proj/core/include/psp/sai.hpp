#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "psp/ingestion.hpp"
#include "psp/keyword_db.hpp"

namespace psp {

/// Relative weights of the three engagement signals; non-negative, sum 1.
struct SaiWeights {
    double views = 0.4;
    double interactions = 0.4;
    double popularity = 0.2;  // author follower count

    void validate() const;  // throws ValidationError
};

/// One ranked row of the Social Attraction Index.
struct SaiEntry {
    std::string scenario;
    std::vector<std::string> keyword_tags;  // contributing tags, sorted
    double raw_score = 0.0;
    std::size_t post_count = 0;
    double probability = 0.0;  // normalized share, [0, 1]
    AttackerClass attacker_class = AttackerClass::Insider;
    AttackVector dominant_vector = AttackVector::Physical;
};

/// Log-damped engagement score:
/// w_views*ln(1+views) + w_interactions*ln(1+interactions) + w_popularity*ln(1+followers).
double weighted_log_score(double views, double interactions, double followers,
                          const SaiWeights& w);

double score_post(const SocialPost& post, const SaiWeights& w);

/// Groups matched posts by scenario, sums their scores (a post counts once
/// per scenario it matched), sorts by raw score descending (ties by scenario
/// ascending) and normalizes scores into probabilities (uniform when all raw
/// scores are zero). Class and dominant vector are the majority over keyword
/// match occurrences; class ties fall to Insider, vector ties to the less
/// remote vector. Throws IntegrityError when a matched keyword is not in the db.
std::vector<SaiEntry> compute_sai(const std::vector<MatchedPost>& matches, const KeywordDb& db,
                                  const SaiWeights& w);

struct SaiSplit {
    std::vector<SaiEntry> insider;
    std::vector<SaiEntry> outsider;
};

/// Order-preserving partition by attacker class.
SaiSplit split_insider_outsider(const std::vector<SaiEntry>& sai);

}  // namespace psp
