#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "psp/config.hpp"
#include "psp/errors.hpp"
#include "psp/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitStage = 2;
constexpr int kExitIo = 3;

struct CommonArgs {
    std::string config_path;
    std::string window;
    std::string out_dir;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "run config file (JSON)")
        ->required();
    cmd->add_option("--window", args.window,
                    "override the query window, START..END (ISO-8601 UTC or YYYY-MM-DD)");
    cmd->add_option("--out", args.out_dir, "override the output directory");
}

// Validates the config file, loads it and applies command-line overrides.
// Returns nullopt (after printing diagnostics) when validation fails.
std::optional<psp::RunConfig> prepare(const CommonArgs& args) {
    const auto diagnostics = psp::validate_config(args.config_path);
    if (!diagnostics.empty()) {
        std::cerr << "config '" << args.config_path << "' is not runnable:\n";
        for (const auto& d : diagnostics) std::cerr << "  - " << d << "\n";
        return std::nullopt;
    }
    psp::RunConfig cfg = psp::RunConfig::load(args.config_path);
    if (!args.window.empty()) cfg.window = psp::parse_window_arg(args.window);
    if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
    return cfg;
}

int run_validate(const std::string& config_path) {
    const auto diagnostics = psp::validate_config(config_path);
    if (diagnostics.empty()) {
        std::cout << "config '" << config_path << "' is runnable\n";
        return kExitOk;
    }
    std::cout << diagnostics.size() << " problem(s):\n";
    for (const auto& d : diagnostics) std::cout << "  - " << d << "\n";
    return kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"psp - social-signal-tuned attack feasibility and financial risk assessment"};
    app.require_subcommand(1);

    CommonArgs analyze_args, sai_args, tune_args, finance_args, expand_args;
    std::string tune_scenario;
    std::string validate_config_path;

    auto* analyze =
        app.add_subcommand("analyze", "run the full pipeline and write the report bundle");
    add_common(analyze, analyze_args);

    auto* sai = app.add_subcommand("sai", "compute and persist the Social Attraction Index");
    add_common(sai, sai_args);

    auto* tune =
        app.add_subcommand("tune", "re-tune attack-vector tables from the persisted SAI");
    add_common(tune, tune_args);
    tune->add_option("--scenario", tune_scenario, "restrict tuning to one threat scenario");

    auto* finance = app.add_subcommand("finance", "evaluate the financial attack model");
    add_common(finance, finance_args);

    auto* keywords = app.add_subcommand("keywords", "keyword database operations");
    keywords->require_subcommand(1);
    auto* expand =
        keywords->add_subcommand("expand", "run co-occurrence auto-learning and persist the db");
    add_common(expand, expand_args);

    auto* validate = app.add_subcommand("validate", "check a config and print all diagnostics");
    validate->add_option("--config", validate_config_path, "run config file (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (validate->parsed()) return run_validate(validate_config_path);

        if (analyze->parsed()) {
            const auto cfg = prepare(analyze_args);
            if (!cfg) return kExitValidation;
            const auto bundle = psp::cmd_analyze(*cfg);
            std::cout << psp::summary_text(bundle);
            std::cout << "\nreport bundle written to " << cfg->output_dir.string() << "\n";
            return kExitOk;
        }
        if (sai->parsed()) {
            const auto cfg = prepare(sai_args);
            if (!cfg) return kExitValidation;
            const auto entries = psp::cmd_sai(*cfg);
            std::cout << "SAI: " << entries.size() << " scenario(s); wrote sai.csv, sai.json, "
                      << "sai_chart.svg to " << cfg->output_dir.string() << "\n";
            for (const auto& e : entries)
                std::cout << "  " << e.scenario << "  score=" << e.raw_score
                          << "  p=" << e.probability << "\n";
            return kExitOk;
        }
        if (tune->parsed()) {
            const auto cfg = prepare(tune_args);
            if (!cfg) return kExitValidation;
            const std::optional<std::string> scenario =
                tune_scenario.empty() ? std::nullopt : std::make_optional(tune_scenario);
            const auto tables = psp::cmd_tune(*cfg, scenario);
            std::cout << "tuned " << tables.size() << " table(s); wrote tuned_tables.csv, "
                      << "tuned_tables.json to " << cfg->output_dir.string() << "\n";
            return kExitOk;
        }
        if (finance->parsed()) {
            const auto cfg = prepare(finance_args);
            if (!cfg) return kExitValidation;
            const auto report = psp::cmd_finance(*cfg);
            std::cout << "PAE " << report.pae << ", PPIA " << report.ppia.str() << "\n";
            std::cout << "market value MV = " << report.mv.str() << "\n";
            if (report.fc_forward)
                std::cout << "fixed cost FC = " << report.fc_forward->str() << "\n";
            if (report.bep) std::cout << "break-even BEP = " << *report.bep << " units\n";
            if (report.max_investment)
                std::cout << "max adversary investment = " << report.max_investment->str()
                          << "\n";
            if (report.margin_note) std::cout << "note: " << *report.margin_note << "\n";
            return kExitOk;
        }
        if (expand->parsed()) {
            const auto cfg = prepare(expand_args);
            if (!cfg) return kExitValidation;
            const auto result = psp::cmd_keywords_expand(*cfg);
            std::cout << "added " << result.added.size() << " keyword(s)";
            for (const auto& k : result.added) std::cout << " " << k.tag;
            std::cout << "; db now has " << result.db.size() << " entries (keywords.db in "
                      << cfg->output_dir.string() << ")\n";
            return kExitOk;
        }
    } catch (const psp::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const psp::ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitValidation;
    } catch (const psp::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const psp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitStage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitStage;
    }
    return kExitStage;  // unreachable: a subcommand is required
}
