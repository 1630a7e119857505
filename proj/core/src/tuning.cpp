#include "psp/tuning.hpp"

#include <algorithm>

#include "psp/errors.hpp"

namespace psp {

bool CorrectiveFactors::all_zero() const {
    return std::all_of(shares.begin(), shares.end(), [](double s) { return s == 0.0; });
}

AttackVector CorrectiveFactors::argmax() const {
    std::size_t best = 0;
    for (std::size_t v = 1; v < shares.size(); ++v)
        if (shares[v] > shares[best]) best = v;
    return static_cast<AttackVector>(best);
}

void TuneThresholds::validate() const {
    if (!(minor > 0.0) || !(major > 0.0) || minor > 1.0 || major > 1.0)
        throw ValidationError("tuning thresholds must lie in (0, 1]");
    if (minor > major)
        throw ValidationError("minor tuning threshold must not exceed the major one");
}

CorrectiveFactors corrective_factors(const std::vector<SaiEntry>& insider_sai,
                                     std::string_view scenario) {
    CorrectiveFactors factors;
    double total = 0.0;
    for (const auto& entry : insider_sai) {
        if (entry.scenario != scenario) continue;
        factors.shares[static_cast<std::size_t>(entry.dominant_vector)] += entry.raw_score;
        total += entry.raw_score;
    }
    if (total <= 0.0) return CorrectiveFactors{};  // no scored evidence
    for (double& share : factors.shares) share /= total;
    return factors;
}

VectorFeasibilityTable tune_table(const VectorFeasibilityTable& base,
                                  const CorrectiveFactors& factors,
                                  const TuneThresholds& thresholds) {
    thresholds.validate();
    if (factors.all_zero()) return base;

    const auto step_up = [](FeasibilityRating r, int steps) {
        const int raised = std::min(static_cast<int>(r) + steps,
                                    static_cast<int>(FeasibilityRating::High));
        return static_cast<FeasibilityRating>(raised);
    };

    std::array<FeasibilityRating, 4> tuned{};
    for (AttackVector v : kAllVectors) {
        const double share = factors.at(v);
        int steps = 0;
        if (share >= thresholds.major)
            steps = 2;
        else if (share >= thresholds.minor)
            steps = 1;
        tuned[static_cast<std::size_t>(v)] = step_up(base.at(v), steps);
    }
    return VectorFeasibilityTable(tuned[0], tuned[1], tuned[2], tuned[3]);
}

TunedTable tune_for_scenario(const VectorFeasibilityTable& base,
                             const std::vector<SaiEntry>& insider_sai,
                             const std::vector<SaiEntry>& outsider_sai, std::string_view scenario,
                             const TuneThresholds& thresholds, std::optional<TimeWindow> window) {
    const auto has_scenario = [&](const std::vector<SaiEntry>& entries) {
        return std::any_of(entries.begin(), entries.end(),
                           [&](const SaiEntry& e) { return e.scenario == scenario; });
    };

    TunedTable out;
    out.scenario = std::string(scenario);
    out.base = base;
    out.window = window;

    // Retuning on outsider evidence is meaningless; such scenarios keep the
    // standard weights verbatim.
    if (!has_scenario(insider_sai) && has_scenario(outsider_sai)) {
        out.tuned = base;
        out.factors = CorrectiveFactors{};
        return out;
    }

    out.factors = corrective_factors(insider_sai, scenario);
    out.tuned = tune_table(base, out.factors, thresholds);
    return out;
}

}  // namespace psp
