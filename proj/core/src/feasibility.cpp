#include "psp/feasibility.hpp"

#include "psp/errors.hpp"

namespace psp {

namespace {

[[noreturn]] void unknown(std::string_view kind, std::string_view value) {
    throw ParseError("unknown " + std::string(kind) + " '" + std::string(value) + "'");
}

}  // namespace

std::string_view to_string(FeasibilityRating r) {
    switch (r) {
        case FeasibilityRating::VeryLow: return "very_low";
        case FeasibilityRating::Low: return "low";
        case FeasibilityRating::Medium: return "medium";
        case FeasibilityRating::High: return "high";
    }
    return "?";
}

std::string_view to_string(AttackVector v) {
    switch (v) {
        case AttackVector::Physical: return "physical";
        case AttackVector::Local: return "local";
        case AttackVector::Adjacent: return "adjacent";
        case AttackVector::Network: return "network";
    }
    return "?";
}

std::string_view to_string(CalLevel c) {
    switch (c) {
        case CalLevel::Cal1: return "cal1";
        case CalLevel::Cal2: return "cal2";
        case CalLevel::Cal3: return "cal3";
        case CalLevel::Cal4: return "cal4";
    }
    return "?";
}

std::string_view to_string(ImpactRating i) {
    switch (i) {
        case ImpactRating::Negligible: return "negligible";
        case ImpactRating::Moderate: return "moderate";
        case ImpactRating::Major: return "major";
        case ImpactRating::Severe: return "severe";
    }
    return "?";
}

std::string_view to_string(PotentialParameter p) {
    switch (p) {
        case PotentialParameter::ElapsedTime: return "elapsed_time";
        case PotentialParameter::Expertise: return "expertise";
        case PotentialParameter::Knowledge: return "knowledge";
        case PotentialParameter::WindowOfOpportunity: return "window_of_opportunity";
        case PotentialParameter::Equipment: return "equipment";
    }
    return "?";
}

FeasibilityRating feasibility_rating_from_string(std::string_view s) {
    if (s == "very_low") return FeasibilityRating::VeryLow;
    if (s == "low") return FeasibilityRating::Low;
    if (s == "medium") return FeasibilityRating::Medium;
    if (s == "high") return FeasibilityRating::High;
    unknown("feasibility rating", s);
}

AttackVector attack_vector_from_string(std::string_view s) {
    if (s == "physical") return AttackVector::Physical;
    if (s == "local") return AttackVector::Local;
    if (s == "adjacent") return AttackVector::Adjacent;
    if (s == "network") return AttackVector::Network;
    unknown("attack vector", s);
}

CalLevel cal_level_from_string(std::string_view s) {
    if (s == "cal1") return CalLevel::Cal1;
    if (s == "cal2") return CalLevel::Cal2;
    if (s == "cal3") return CalLevel::Cal3;
    if (s == "cal4") return CalLevel::Cal4;
    unknown("CAL level", s);
}

ImpactRating impact_rating_from_string(std::string_view s) {
    if (s == "negligible") return ImpactRating::Negligible;
    if (s == "moderate") return ImpactRating::Moderate;
    if (s == "major") return ImpactRating::Major;
    if (s == "severe") return ImpactRating::Severe;
    unknown("impact rating", s);
}

FeasibilityRating rate_attack_vector(AttackVector vector, const VectorFeasibilityTable& table) {
    return table.at(vector);
}

std::size_t AttackPotentialParams::level(PotentialParameter p) const {
    switch (p) {
        case PotentialParameter::ElapsedTime: return elapsed_time;
        case PotentialParameter::Expertise: return expertise;
        case PotentialParameter::Knowledge: return knowledge;
        case PotentialParameter::WindowOfOpportunity: return window_of_opportunity;
        case PotentialParameter::Equipment: return equipment;
    }
    return 0;
}

PotentialWeightConfig::PotentialWeightConfig(std::array<std::vector<int>, 5> rows,
                                             std::vector<RatingBand> bands)
    : rows_(std::move(rows)), bands_(std::move(bands)) {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const auto& row = rows_[i];
        const auto name = std::string(to_string(static_cast<PotentialParameter>(i)));
        if (row.empty()) throw ConfigError("weight row '" + name + "' is empty");
        int prev = 0;
        for (int w : row) {
            if (w < 0) throw ConfigError("weight row '" + name + "' has a negative weight");
            if (w < prev) throw ConfigError("weight row '" + name + "' is not non-decreasing");
            prev = w;
        }
    }

    if (bands_.empty()) throw ConfigError("rating bands are empty");
    if (bands_.back().max.has_value())
        throw ConfigError("last rating band must be open (no upper bound)");
    std::optional<int> prev_max;
    FeasibilityRating prev_rating = bands_.front().rating;
    for (std::size_t i = 0; i < bands_.size(); ++i) {
        const auto& band = bands_[i];
        if (i + 1 < bands_.size()) {
            if (!band.max.has_value())
                throw ConfigError("only the last rating band may be open");
            if (*band.max < 0) throw ConfigError("rating band bound must be non-negative");
            if (prev_max && *band.max <= *prev_max)
                throw ConfigError("rating band bounds must be strictly increasing");
            prev_max = band.max;
        }
        if (band.rating > prev_rating)
            throw ConfigError("rating bands must be non-increasing in feasibility");
        prev_rating = band.rating;
    }
}

int compute_attack_potential(const AttackPotentialParams& params,
                             const PotentialWeightConfig& cfg) {
    int sum = 0;
    for (int i = 0; i < 5; ++i) {
        const auto p = static_cast<PotentialParameter>(i);
        const auto& row = cfg.row(p);
        const std::size_t level = params.level(p);
        if (level >= row.size())
            throw ConfigError("level index " + std::to_string(level) + " for parameter '" +
                              std::string(to_string(p)) + "' exceeds its weight row (size " +
                              std::to_string(row.size()) + ")");
        sum += row[level];
    }
    return sum;
}

FeasibilityRating potential_to_rating(int sum, const PotentialWeightConfig& cfg) {
    for (const auto& band : cfg.bands())
        if (!band.max || sum <= *band.max) return band.rating;
    return cfg.bands().back().rating;  // unreachable: last band is open
}

CalMatrix::CalMatrix(const std::array<std::array<CalLevel, 4>, 4>& cells) : cells_(cells) {
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t v = 0; v < 4; ++v) {
            if (i > 0 && cells_[i][v] < cells_[i - 1][v])
                throw ConfigError("CAL matrix not monotone in impact at (" +
                                  std::string(to_string(static_cast<ImpactRating>(i))) + ", " +
                                  std::string(to_string(static_cast<AttackVector>(v))) + ")");
            if (v > 0 && cells_[i][v] < cells_[i][v - 1])
                throw ConfigError("CAL matrix not monotone in vector at (" +
                                  std::string(to_string(static_cast<ImpactRating>(i))) + ", " +
                                  std::string(to_string(static_cast<AttackVector>(v))) + ")");
        }
        if (cells_[i][0] > CalLevel::Cal2)
            throw ConfigError("physical attacks cap at CAL2; violated for impact '" +
                              std::string(to_string(static_cast<ImpactRating>(i))) + "'");
    }
}

CalLevel determine_cal(ImpactRating impact, AttackVector vector, const CalMatrix& matrix) {
    return matrix.at(impact, vector);
}

ScoreBands::ScoreBands(std::vector<ScoreBand> bands) : bands_(std::move(bands)) {
    if (bands_.empty()) throw ConfigError("score bands are empty");
    if (bands_.back().max.has_value())
        throw ConfigError("last score band must be open (no upper bound)");
    std::optional<double> prev_max;
    FeasibilityRating prev_rating = bands_.front().rating;
    for (std::size_t i = 0; i < bands_.size(); ++i) {
        const auto& band = bands_[i];
        if (i + 1 < bands_.size()) {
            if (!band.max.has_value()) throw ConfigError("only the last score band may be open");
            if (prev_max && *band.max <= *prev_max)
                throw ConfigError("score band bounds must be strictly increasing");
            prev_max = band.max;
        }
        if (band.rating < prev_rating)
            throw ConfigError("score bands must be non-decreasing in feasibility");
        prev_rating = band.rating;
    }
}

FeasibilityRating ScoreBands::rating_for(double score) const {
    for (const auto& band : bands_)
        if (!band.max || score <= *band.max) return band.rating;
    return bands_.back().rating;
}

double cvss_exploitability_score(const CvssExploitabilityParams& p) {
    const std::array<std::pair<const char*, double>, 5> coeffs = {{{"av_coeff", p.av_coeff},
                                                                   {"ac_coeff", p.ac_coeff},
                                                                   {"pr_coeff", p.pr_coeff},
                                                                   {"ui_coeff", p.ui_coeff},
                                                                   {"scale", p.scale}}};
    for (const auto& [name, value] : coeffs)
        if (value <= 0.0)
            throw ConfigError(std::string("CVSS coefficient '") + name + "' must be positive");
    return p.scale * p.av_coeff * p.ac_coeff * p.pr_coeff * p.ui_coeff;
}

CvssResult cvss_exploitability(const CvssExploitabilityParams& p, const ScoreBands& bands) {
    const double score = cvss_exploitability_score(p);
    return {score, bands.rating_for(score)};
}

}  // namespace psp
