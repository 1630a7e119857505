#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "psp/finance.hpp"
#include "psp/keyword_db.hpp"
#include "psp/sai.hpp"
#include "psp/timeutil.hpp"
#include "psp/tuning.hpp"

namespace psp {

/// Inputs of one engine run, loaded from a single JSON config file. Relative
/// paths resolve against the config file's directory.
struct RunConfig {
    std::filesystem::path source_file;
    std::vector<std::filesystem::path> corpus_paths;
    std::filesystem::path keyword_db_path;
    std::filesystem::path feasibility_config_path;

    std::vector<std::string> application_terms;
    std::optional<std::string> region;
    std::optional<TimeWindow> window;

    SaiWeights sai_weights;
    TuneThresholds tuning;
    ExpandParams expansion;  // run_id is filled in by the engine
    std::optional<FinancialScenario> finance;

    std::filesystem::path output_dir;

    /// Parses the file. Structural problems throw ParseError/IoError; use
    /// validate_config for a full semantic diagnosis.
    static RunConfig load(const std::filesystem::path& file);
};

/// Checks the config end to end and returns every violation found (an empty
/// list means the config is runnable). Only an unreadable file throws.
std::vector<std::string> validate_config(const std::filesystem::path& file);

/// Parses "START..END" with ISO-8601 timestamps or plain dates on each side.
TimeWindow parse_window_arg(std::string_view arg);

}  // namespace psp
