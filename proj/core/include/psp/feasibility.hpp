#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace psp {

/// Attack feasibility rating, ordered from least to most feasible.
enum class FeasibilityRating { VeryLow = 0, Low = 1, Medium = 2, High = 3 };

/// Attack vector, ordered by remoteness.
enum class AttackVector { Physical = 0, Local = 1, Adjacent = 2, Network = 3 };

/// Cybersecurity assurance level, CAL1 (lowest) to CAL4 (highest).
enum class CalLevel { Cal1 = 0, Cal2 = 1, Cal3 = 2, Cal4 = 3 };

/// Impact rating, ordered from least to most severe.
enum class ImpactRating { Negligible = 0, Moderate = 1, Major = 2, Severe = 3 };

inline constexpr std::array<AttackVector, 4> kAllVectors = {
    AttackVector::Physical, AttackVector::Local, AttackVector::Adjacent, AttackVector::Network};
inline constexpr std::array<ImpactRating, 4> kAllImpacts = {
    ImpactRating::Negligible, ImpactRating::Moderate, ImpactRating::Major, ImpactRating::Severe};

std::string_view to_string(FeasibilityRating r);  // "very_low" | "low" | "medium" | "high"
std::string_view to_string(AttackVector v);       // "physical" | "local" | "adjacent" | "network"
std::string_view to_string(CalLevel c);           // "cal1".."cal4"
std::string_view to_string(ImpactRating i);       // "negligible" | "moderate" | "major" | "severe"

FeasibilityRating feasibility_rating_from_string(std::string_view s);
AttackVector attack_vector_from_string(std::string_view s);
CalLevel cal_level_from_string(std::string_view s);
ImpactRating impact_rating_from_string(std::string_view s);

/// Total mapping AttackVector -> FeasibilityRating.
class VectorFeasibilityTable {
public:
    VectorFeasibilityTable(FeasibilityRating physical, FeasibilityRating local,
                           FeasibilityRating adjacent, FeasibilityRating network)
        : ratings_{physical, local, adjacent, network} {}

    static VectorFeasibilityTable uniform(FeasibilityRating r) { return {r, r, r, r}; }

    FeasibilityRating at(AttackVector v) const { return ratings_[static_cast<std::size_t>(v)]; }

    bool operator==(const VectorFeasibilityTable&) const = default;

private:
    std::array<FeasibilityRating, 4> ratings_;
};

/// Pure table lookup.
FeasibilityRating rate_attack_vector(AttackVector vector, const VectorFeasibilityTable& table);

/// The five attack-potential parameters, identified for error reporting.
enum class PotentialParameter { ElapsedTime, Expertise, Knowledge, WindowOfOpportunity, Equipment };

std::string_view to_string(PotentialParameter p);

/// Selected level per parameter; each value indexes into the matching
/// weight row of the PotentialWeightConfig.
struct AttackPotentialParams {
    std::size_t elapsed_time = 0;
    std::size_t expertise = 0;
    std::size_t knowledge = 0;
    std::size_t window_of_opportunity = 0;
    std::size_t equipment = 0;

    std::size_t level(PotentialParameter p) const;
};

/// One rating band: sums up to and including `max` map to `rating`.
/// The terminal band has no bound and covers everything beyond.
struct RatingBand {
    std::optional<int> max;
    FeasibilityRating rating;

    bool operator==(const RatingBand&) const = default;
};

/// Weight rows for the five attack-potential parameters plus the bands that
/// turn a weight sum into a feasibility rating. Rows must be non-empty with
/// non-negative, non-decreasing weights; bands must end in one open band with
/// strictly increasing finite bounds and non-increasing ratings.
class PotentialWeightConfig {
public:
    PotentialWeightConfig(std::array<std::vector<int>, 5> rows, std::vector<RatingBand> bands);

    const std::vector<int>& row(PotentialParameter p) const {
        return rows_[static_cast<std::size_t>(p)];
    }
    const std::vector<RatingBand>& bands() const { return bands_; }

private:
    std::array<std::vector<int>, 5> rows_;
    std::vector<RatingBand> bands_;
};

/// Sum of the five selected weights. Throws ConfigError naming the parameter
/// whose level index is out of bounds.
int compute_attack_potential(const AttackPotentialParams& params,
                             const PotentialWeightConfig& cfg);

/// Rating of the first band whose (inclusive) upper bound >= sum.
FeasibilityRating potential_to_rating(int sum, const PotentialWeightConfig& cfg);

/// Total mapping (ImpactRating, AttackVector) -> CalLevel. The constructor
/// rejects matrices that are not monotone in both axes or that exceed CAL2
/// anywhere in the physical column.
class CalMatrix {
public:
    /// cells[impact][vector]
    explicit CalMatrix(const std::array<std::array<CalLevel, 4>, 4>& cells);

    CalLevel at(ImpactRating impact, AttackVector vector) const {
        return cells_[static_cast<std::size_t>(impact)][static_cast<std::size_t>(vector)];
    }

    bool operator==(const CalMatrix&) const = default;

private:
    std::array<std::array<CalLevel, 4>, 4> cells_;
};

/// Pure matrix lookup.
CalLevel determine_cal(ImpactRating impact, AttackVector vector, const CalMatrix& matrix);

/// Multiplicative exploitability model: score = scale * av * ac * pr * ui.
struct CvssExploitabilityParams {
    double av_coeff = 1.0;
    double ac_coeff = 1.0;
    double pr_coeff = 1.0;
    double ui_coeff = 1.0;
    double scale = 1.0;
};

/// Score band over real-valued scores; higher score means higher feasibility,
/// so ratings are non-decreasing as bounds grow. The terminal band is open.
struct ScoreBand {
    std::optional<double> max;
    FeasibilityRating rating;
};

class ScoreBands {
public:
    explicit ScoreBands(std::vector<ScoreBand> bands);

    FeasibilityRating rating_for(double score) const;
    const std::vector<ScoreBand>& bands() const { return bands_; }

private:
    std::vector<ScoreBand> bands_;
};

/// Throws ConfigError if any coefficient or the scale is non-positive.
double cvss_exploitability_score(const CvssExploitabilityParams& p);

struct CvssResult {
    double score;
    FeasibilityRating rating;
};

CvssResult cvss_exploitability(const CvssExploitabilityParams& p, const ScoreBands& bands);

/// The three configured model tables plus CVSS coefficients, loaded from a
/// single editable JSON file.
struct FeasibilityConfig {
    VectorFeasibilityTable vector_table;
    PotentialWeightConfig potential;
    CalMatrix cal_matrix;
    CvssExploitabilityParams cvss;
    ScoreBands cvss_bands;

    static FeasibilityConfig load(const std::filesystem::path& file);
    static FeasibilityConfig from_json_text(std::string_view text);
};

}  // namespace psp
