#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "psp/feasibility.hpp"
#include "psp/sai.hpp"
#include "psp/timeutil.hpp"

namespace psp {

/// Per-vector score shares derived from insider SAI entries of one scenario.
/// Shares sum to 1, or are all zero when no scored evidence exists.
struct CorrectiveFactors {
    std::array<double, 4> shares{};  // indexed by AttackVector

    double at(AttackVector v) const { return shares[static_cast<std::size_t>(v)]; }
    bool all_zero() const;
    /// The vector with the largest share (less remote wins ties).
    AttackVector argmax() const;

    bool operator==(const CorrectiveFactors&) const = default;
};

/// Ordinal step thresholds: share >= major raises the rating two steps,
/// share >= minor raises it one step, anything below leaves it unchanged.
struct TuneThresholds {
    double major = 0.5;
    double minor = 0.2;

    void validate() const;  // throws ValidationError
};

/// Base table, tuned table and the factors that produced it.
struct TunedTable {
    std::string scenario;
    VectorFeasibilityTable base = VectorFeasibilityTable::uniform(FeasibilityRating::VeryLow);
    VectorFeasibilityTable tuned = VectorFeasibilityTable::uniform(FeasibilityRating::VeryLow);
    CorrectiveFactors factors;
    std::optional<TimeWindow> window;  // query window used, for reproducibility
};

/// Restricts the entries to the scenario and normalizes raw scores per
/// dominant vector. Empty or all-zero evidence yields all-zero factors.
CorrectiveFactors corrective_factors(const std::vector<SaiEntry>& insider_sai,
                                     std::string_view scenario);

/// Raises ratings per the step thresholds, clamped at High. Vectors with zero
/// share and all-zero factor sets keep the base rating; tuning never lowers.
VectorFeasibilityTable tune_table(const VectorFeasibilityTable& base,
                                  const CorrectiveFactors& factors,
                                  const TuneThresholds& thresholds = {});

/// Outsider-only scenarios keep the base table verbatim; otherwise the table
/// is tuned with factors from the insider half.
TunedTable tune_for_scenario(const VectorFeasibilityTable& base,
                             const std::vector<SaiEntry>& insider_sai,
                             const std::vector<SaiEntry>& outsider_sai, std::string_view scenario,
                             const TuneThresholds& thresholds = {},
                             std::optional<TimeWindow> window = std::nullopt);

}  // namespace psp
