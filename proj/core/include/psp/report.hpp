#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "psp/config.hpp"
#include "psp/finance.hpp"
#include "psp/keyword_db.hpp"
#include "psp/sai.hpp"
#include "psp/tuning.hpp"

namespace psp {

/// Everything one analysis run produces. Deterministic for identical inputs;
/// generated_at appears only in the human summary, never in machine outputs
/// or the run id.
struct ReportBundle {
    std::string run_id;
    std::size_t corpus_posts = 0;
    std::size_t matched_posts = 0;
    std::optional<TimeWindow> window;

    std::vector<SaiEntry> sai;
    SaiSplit split;
    std::vector<TunedTable> tuned;  // one per scenario, sorted by label
    std::vector<AttackKeyword> keyword_additions;
    KeywordDb updated_db;
    std::optional<FinancialReport> finance;

    std::string generated_at;
};

/// Content hash over the effective inputs: digests of the corpus, keyword-db
/// and feasibility files plus the query, weights, thresholds and financial
/// section. Independent of file locations and of the output directory.
std::string compute_run_id(const RunConfig& cfg);

/// Runs the full pipeline (load, query, SAI, split, auto-learning, tuning,
/// financials) without touching the output directory.
ReportBundle run_analysis(const RunConfig& cfg);

// Deterministic renderers for the machine-readable artifacts.
std::string sai_csv(const std::vector<SaiEntry>& sai);
std::string sai_json_text(const std::vector<SaiEntry>& sai);
std::vector<SaiEntry> sai_from_json_text(const std::string& text);
std::string tuned_csv(const std::vector<TunedTable>& tables);
std::string tuned_json_text(const std::vector<TunedTable>& tables);
std::string additions_json_text(const std::vector<AttackKeyword>& added);
std::string finance_json_text(const FinancialReport& report);
std::string run_json_text(const ReportBundle& bundle);
std::string sai_chart_svg(const std::vector<SaiEntry>& sai);
std::string summary_text(const ReportBundle& bundle);

/// Writes a set of (filename, content) artifacts into a directory through
/// temp files. If anything fails, every file created by this call is removed.
void write_artifacts(const std::filesystem::path& out_dir,
                     const std::vector<std::pair<std::string, std::string>>& artifacts);

// CLI-facing stage commands. Each validates its inputs, runs exactly its
// stage, and persists the same bytes cmd_analyze would for that slice.
ReportBundle cmd_analyze(const RunConfig& cfg);
std::vector<SaiEntry> cmd_sai(const RunConfig& cfg);
std::vector<TunedTable> cmd_tune(const RunConfig& cfg,
                                 const std::optional<std::string>& scenario = std::nullopt);
FinancialReport cmd_finance(const RunConfig& cfg);
ExpandResult cmd_keywords_expand(const RunConfig& cfg);

}  // namespace psp
