#include "psp/sai.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>

#include "psp/errors.hpp"

namespace psp {

void SaiWeights::validate() const {
    if (views < 0.0 || interactions < 0.0 || popularity < 0.0)
        throw ValidationError("SAI weights must be non-negative");
    const double sum = views + interactions + popularity;
    if (std::abs(sum - 1.0) > 1e-9)
        throw ValidationError("SAI weights must sum to 1 (got " + std::to_string(sum) + ")");
}

double weighted_log_score(double views, double interactions, double followers,
                          const SaiWeights& w) {
    return w.views * std::log1p(views) + w.interactions * std::log1p(interactions) +
           w.popularity * std::log1p(followers);
}

double score_post(const SocialPost& post, const SaiWeights& w) {
    return weighted_log_score(static_cast<double>(post.views),
                              static_cast<double>(post.interactions),
                              static_cast<double>(post.author_followers), w);
}

std::vector<SaiEntry> compute_sai(const std::vector<MatchedPost>& matches, const KeywordDb& db,
                                  const SaiWeights& w) {
    w.validate();

    struct Accumulator {
        std::vector<std::pair<std::string, double>> contributions;  // (post id, score)
        std::set<std::string> tags;
        std::size_t insider_occurrences = 0;
        std::size_t outsider_occurrences = 0;
        std::array<std::size_t, 4> vector_occurrences{};
    };
    std::map<std::string, Accumulator> by_scenario;

    for (const auto& match : matches) {
        const double score = score_post(match.post, w);
        std::set<std::string> scenarios_hit;
        for (const auto& keyword : match.matched_keywords) {
            const AttackKeyword* entry = db.find(keyword);
            if (!entry)
                throw IntegrityError("matched keyword '" + keyword +
                                     "' is not in the keyword db");
            auto& acc = by_scenario[entry->scenario];
            acc.tags.insert(keyword);
            if (entry->attacker_class == AttackerClass::Insider)
                ++acc.insider_occurrences;
            else
                ++acc.outsider_occurrences;
            ++acc.vector_occurrences[static_cast<std::size_t>(entry->vector)];
            scenarios_hit.insert(entry->scenario);
        }
        // A post contributes its full score once to every scenario it matched.
        for (const auto& scenario : scenarios_hit)
            by_scenario[scenario].contributions.emplace_back(match.post.id, score);
    }

    std::vector<SaiEntry> entries;
    entries.reserve(by_scenario.size());
    double total = 0.0;
    for (auto& [scenario, acc] : by_scenario) {
        // Sum in a canonical order so the result is bit-identical under any
        // permutation of the matches list.
        std::sort(acc.contributions.begin(), acc.contributions.end());
        double raw_score = 0.0;
        for (const auto& [id, score] : acc.contributions) raw_score += score;

        SaiEntry e;
        e.scenario = scenario;
        e.keyword_tags.assign(acc.tags.begin(), acc.tags.end());
        e.raw_score = raw_score;
        e.post_count = acc.contributions.size();
        e.attacker_class = acc.insider_occurrences >= acc.outsider_occurrences
                               ? AttackerClass::Insider
                               : AttackerClass::Outsider;
        std::size_t best = 0;
        std::size_t vector_index = 0;  // less remote wins ties
        for (std::size_t v = 0; v < acc.vector_occurrences.size(); ++v) {
            if (acc.vector_occurrences[v] > best) {
                best = acc.vector_occurrences[v];
                vector_index = v;
            }
        }
        e.dominant_vector = static_cast<AttackVector>(vector_index);
        total += e.raw_score;
        entries.push_back(std::move(e));
    }

    for (auto& e : entries)
        e.probability = total > 0.0 ? e.raw_score / total : 1.0 / static_cast<double>(entries.size());

    std::sort(entries.begin(), entries.end(), [](const SaiEntry& a, const SaiEntry& b) {
        if (a.raw_score != b.raw_score) return a.raw_score > b.raw_score;
        return a.scenario < b.scenario;
    });
    return entries;
}

SaiSplit split_insider_outsider(const std::vector<SaiEntry>& sai) {
    SaiSplit split;
    for (const auto& e : sai)
        (e.attacker_class == AttackerClass::Insider ? split.insider : split.outsider).push_back(e);
    return split;
}

}  // namespace psp
