#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "psp/errors.hpp"
#include "psp/feasibility.hpp"

namespace psp {

namespace {

using nlohmann::json;

json parse_json_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open '" + file.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ParseError("'" + file.string() + "': " + e.what());
    }
}

const json& member(const json& obj, const char* key, const char* where) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw ParseError(std::string("feasibility config: missing '") + key + "' in " + where);
    return *it;
}

VectorFeasibilityTable read_vector_table(const json& j) {
    return VectorFeasibilityTable(
        feasibility_rating_from_string(member(j, "physical", "vector_table").get<std::string>()),
        feasibility_rating_from_string(member(j, "local", "vector_table").get<std::string>()),
        feasibility_rating_from_string(member(j, "adjacent", "vector_table").get<std::string>()),
        feasibility_rating_from_string(member(j, "network", "vector_table").get<std::string>()));
}

std::vector<RatingBand> read_rating_bands(const json& j) {
    std::vector<RatingBand> bands;
    for (const auto& b : j) {
        RatingBand band;
        if (b.contains("max")) band.max = b.at("max").get<int>();
        band.rating =
            feasibility_rating_from_string(member(b, "rating", "rating_bands").get<std::string>());
        bands.push_back(band);
    }
    return bands;
}

PotentialWeightConfig read_potential(const json& j) {
    std::array<std::vector<int>, 5> rows;
    static constexpr std::array<PotentialParameter, 5> params = {
        PotentialParameter::ElapsedTime, PotentialParameter::Expertise,
        PotentialParameter::Knowledge, PotentialParameter::WindowOfOpportunity,
        PotentialParameter::Equipment};
    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto key = std::string(to_string(params[i]));
        rows[i] = member(j, key.c_str(), "attack_potential").get<std::vector<int>>();
    }
    return PotentialWeightConfig(std::move(rows),
                                 read_rating_bands(member(j, "rating_bands", "attack_potential")));
}

CalMatrix read_cal_matrix(const json& j) {
    std::array<std::array<CalLevel, 4>, 4> cells;
    for (ImpactRating impact : kAllImpacts) {
        const auto& row = member(j, std::string(to_string(impact)).c_str(), "cal_matrix");
        for (AttackVector vector : kAllVectors) {
            cells[static_cast<std::size_t>(impact)][static_cast<std::size_t>(vector)] =
                cal_level_from_string(
                    member(row, std::string(to_string(vector)).c_str(), "cal_matrix row")
                        .get<std::string>());
        }
    }
    return CalMatrix(cells);
}

ScoreBands read_score_bands(const json& j) {
    std::vector<ScoreBand> bands;
    for (const auto& b : j) {
        ScoreBand band;
        if (b.contains("max")) band.max = b.at("max").get<double>();
        band.rating =
            feasibility_rating_from_string(member(b, "rating", "cvss bands").get<std::string>());
        bands.push_back(band);
    }
    return ScoreBands(std::move(bands));
}

FeasibilityConfig read_config(const json& j) {
    const auto& cvss = member(j, "cvss", "config");
    CvssExploitabilityParams params;
    params.scale = member(cvss, "scale", "cvss").get<double>();
    params.av_coeff = member(cvss, "av", "cvss").get<double>();
    params.ac_coeff = member(cvss, "ac", "cvss").get<double>();
    params.pr_coeff = member(cvss, "pr", "cvss").get<double>();
    params.ui_coeff = member(cvss, "ui", "cvss").get<double>();

    return FeasibilityConfig{read_vector_table(member(j, "vector_table", "config")),
                             read_potential(member(j, "attack_potential", "config")),
                             read_cal_matrix(member(j, "cal_matrix", "config")), params,
                             read_score_bands(member(cvss, "rating_bands", "cvss"))};
}

}  // namespace

FeasibilityConfig FeasibilityConfig::load(const std::filesystem::path& file) {
    try {
        return read_config(parse_json_file(file));
    } catch (const json::exception& e) {
        throw ParseError("'" + file.string() + "': " + e.what());
    }
}

FeasibilityConfig FeasibilityConfig::from_json_text(std::string_view text) {
    try {
        return read_config(json::parse(text));
    } catch (const json::exception& e) {
        throw ParseError(std::string("feasibility config: ") + e.what());
    }
}

}  // namespace psp
