#include <algorithm>
#include <cstdlib>
#include <sys/wait.h>

#include <doctest.h>

#include "psp/config.hpp"
#include "psp/errors.hpp"
#include "psp/report.hpp"
#include "test_support.hpp"

using namespace psp;

namespace {

// Minimal runnable config in a scratch directory with its own data.
struct ScratchProject {
    psp_test::TempDir dir;

    std::filesystem::path write_config(const std::string& overrides_json = "{}") {
        psp_test::write_file(
            dir.file("corpus.jsonl"),
            psp_test::read_file(psp_test::data_path("excavator_corpus.jsonl")));
        psp_test::write_file(dir.file("keywords.db"),
                             psp_test::read_file(psp_test::data_path("keywords_seed.db")));
        psp_test::write_file(
            dir.file("feasibility.json"),
            psp_test::read_file(psp_test::config_path("feasibility_default.json")));

        std::string config = R"({
  "corpus": ["corpus.jsonl"],
  "keyword_db": "keywords.db",
  "feasibility_config": "feasibility.json",
  "query": { "application_terms": ["excavator"], "region": "EU" },
  "finance": {
    "currency": "EUR",
    "pae": 1406, "ppia": "360.00", "vcu": "50.00", "n": 3,
    "fteh_hours": 2000, "hourly_cost": "60.00", "sld": "25286.00"
  },
  "output_dir": "out"
})";
        psp_test::write_file(dir.file("psp.json"), config);
        if (overrides_json != "{}") psp_test::write_file(dir.file("psp.json"), overrides_json);
        return dir.file("psp.json");
    }
};

int run_cli(const std::string& args) {
    const std::string command = std::string(PSP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(command.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("validate_config accepts the shipped example config") {
    CHECK(validate_config(psp_test::config_path("psp.example.json")).empty());
}

TEST_CASE("validate_config reports an inverted window") {
    ScratchProject project;
    const auto path = project.write_config(R"({
  "corpus": ["corpus.jsonl"],
  "keyword_db": "keywords.db",
  "feasibility_config": "feasibility.json",
  "query": {
    "application_terms": ["excavator"],
    "window": { "start": "2023-01-01T00:00:00Z", "end": "2021-01-01T00:00:00Z" }
  },
  "output_dir": "out"
})");
    const auto diagnostics = validate_config(path);
    REQUIRE(diagnostics.size() == 1);
    CHECK(diagnostics[0].find("window") != std::string::npos);
}

TEST_CASE("validate_config reports every violation at once") {
    ScratchProject project;
    const auto path = project.write_config(R"({
  "corpus": ["corpus.jsonl"],
  "keyword_db": "no_such_file.db",
  "feasibility_config": "feasibility.json",
  "query": { "application_terms": ["excavator"] },
  "sai_weights": { "views": 0.9, "interactions": 0.9, "popularity": 0.2 },
  "output_dir": "out"
})");
    const auto diagnostics = validate_config(path);
    REQUIRE(diagnostics.size() == 2);
    CHECK(diagnostics[0].find("no_such_file.db") != std::string::npos);
    CHECK(diagnostics[1].find("weights") != std::string::npos);

    CHECK_THROWS_AS(validate_config(project.dir.file("missing.json")), IoError);
}

TEST_CASE("run ids are content hashes of the effective inputs") {
    ScratchProject project;
    const auto path = project.write_config();
    const auto cfg = RunConfig::load(path);

    const auto id1 = compute_run_id(cfg);
    const auto id2 = compute_run_id(cfg);
    CHECK(id1 == id2);
    CHECK(id1.size() == 64);

    auto windowed = cfg;
    windowed.window = TimeWindow{parse_utc("2021-01-01T00:00:00Z"),
                                 parse_utc("2024-01-01T00:00:00Z")};
    CHECK(compute_run_id(windowed) != id1);

    // identical bytes at different paths keep the id
    auto moved = cfg;
    std::filesystem::create_directories(project.dir.file("elsewhere"));
    std::filesystem::copy_file(cfg.corpus_paths[0], project.dir.file("elsewhere/c.jsonl"));
    moved.corpus_paths = {project.dir.file("elsewhere/c.jsonl")};
    CHECK(compute_run_id(moved) == id1);

    // changing corpus bytes changes the id
    psp_test::write_file(project.dir.file("elsewhere/c.jsonl"), "");
    CHECK(compute_run_id(moved) != id1);
}

TEST_CASE("analysis bundle matches the excavator fixture expectations") {
    ScratchProject project;
    const auto cfg = RunConfig::load(project.write_config());
    const auto bundle = run_analysis(cfg);

    CHECK(bundle.corpus_posts == 9);
    CHECK(bundle.matched_posts == 7);

    REQUIRE(!bundle.sai.empty());
    CHECK(bundle.sai.front().scenario == "dpf_tampering");  // highest engagement
    CHECK(bundle.split.insider.size() == 3);
    CHECK(bundle.split.outsider.size() == 1);

    REQUIRE(bundle.keyword_additions.size() == 1);
    CHECK(bundle.keyword_additions[0].tag == "dpfoff");
    CHECK(bundle.updated_db.contains("dpfoff"));
    CHECK(bundle.keyword_additions[0].source_run_id == bundle.run_id);

    // outsider-only scenario keeps its base table
    const auto can = std::find_if(bundle.tuned.begin(), bundle.tuned.end(),
                                  [](const TunedTable& t) { return t.scenario == "can_injection"; });
    REQUIRE(can != bundle.tuned.end());
    CHECK(can->tuned == can->base);

    // insider scenario with physical evidence is raised
    const auto dpf = std::find_if(bundle.tuned.begin(), bundle.tuned.end(),
                                  [](const TunedTable& t) { return t.scenario == "dpf_tampering"; });
    REQUIRE(dpf != bundle.tuned.end());
    CHECK(dpf->tuned.at(AttackVector::Physical) > dpf->base.at(AttackVector::Physical));

    REQUIRE(bundle.finance.has_value());
    CHECK(bundle.finance->mv.str() == "506160.00 EUR");
    CHECK(bundle.finance->max_investment->str() == "145286.00 EUR");
}

TEST_CASE("empty corpus produces an empty SAI and base tables") {
    ScratchProject project;
    const auto path = project.write_config();
    psp_test::write_file(project.dir.file("corpus.jsonl"), "");

    auto cfg = RunConfig::load(path);
    cfg.finance.reset();
    const auto bundle = run_analysis(cfg);

    CHECK(bundle.sai.empty());
    CHECK(bundle.keyword_additions.empty());
    REQUIRE(!bundle.tuned.empty());  // one table per db scenario
    for (const auto& t : bundle.tuned) {
        CHECK(t.tuned == t.base);
        CHECK(t.factors.all_zero());
    }
    CHECK(!bundle.finance.has_value());
}

TEST_CASE("stage commands reproduce the analyze slices byte for byte") {
    ScratchProject analyze_project;
    const auto analyze_cfg = RunConfig::load(analyze_project.write_config());
    cmd_analyze(analyze_cfg);

    ScratchProject stage_project;
    const auto stage_cfg = RunConfig::load(stage_project.write_config());
    cmd_sai(stage_cfg);
    cmd_tune(stage_cfg);
    cmd_finance(stage_cfg);
    cmd_keywords_expand(stage_cfg);

    for (const char* artifact : {"sai.csv", "sai.json", "sai_chart.svg", "tuned_tables.csv",
                                 "tuned_tables.json", "finance.json", "keywords.db",
                                 "additions.json"}) {
        const auto a = psp_test::read_file(analyze_cfg.output_dir / artifact);
        const auto b = psp_test::read_file(stage_cfg.output_dir / artifact);
        REQUIRE(!a.empty());
        CHECK(a == b);
    }

    // the persisted SAI round-trips exactly
    const auto sai = sai_from_json_text(psp_test::read_file(stage_cfg.output_dir / "sai.json"));
    CHECK(sai_json_text(sai) == psp_test::read_file(stage_cfg.output_dir / "sai.json"));
}

TEST_CASE("cmd_tune without a persisted SAI names the producing command") {
    ScratchProject project;
    const auto cfg = RunConfig::load(project.write_config());
    try {
        cmd_tune(cfg);
        FAIL("expected Error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("psp sai") != std::string::npos);
    }
}

TEST_CASE("cmd_tune can restrict to one scenario") {
    ScratchProject project;
    const auto cfg = RunConfig::load(project.write_config());
    cmd_sai(cfg);
    const auto tables = cmd_tune(cfg, std::string("dpf_tampering"));
    REQUIRE(tables.size() == 1);
    CHECK(tables[0].scenario == "dpf_tampering");
    CHECK_THROWS_AS(cmd_tune(cfg, std::string("not_a_scenario")), ValidationError);
}

TEST_CASE("aborted runs name the failing stage and leave no partial artifacts") {
    ScratchProject project;
    const auto path = project.write_config();
    // corrupt the corpus so the load stage fails after validation would pass
    psp_test::write_file(project.dir.file("corpus.jsonl"), "{broken\n");
    auto cfg = RunConfig::load(path);
    cfg.output_dir = project.dir.file("bundle_out");
    try {
        cmd_analyze(cfg);
        FAIL("expected Error");
    } catch (const Error& e) {
        const std::string what = e.what();
        CHECK(what.find("load_corpus") != std::string::npos);
        CHECK(what.find("line 1") != std::string::npos);
    }
    CHECK(!std::filesystem::exists(cfg.output_dir));
}

TEST_CASE("psp binary: exit codes follow the documented contract") {
    ScratchProject project;
    const auto config = project.write_config();
    const auto out = project.dir.file("cli_out");

    // 0: success
    CHECK(run_cli("analyze --config " + config.string() + " --out " + out.string()) == 0);
    CHECK(std::filesystem::exists(out / "sai.csv"));
    CHECK(std::filesystem::exists(out / "finance.json"));

    // 0: validate on a runnable config
    CHECK(run_cli("validate --config " + config.string()) == 0);

    // 1: validation failure (dangling keyword db)
    psp_test::write_file(project.dir.file("psp_bad.json"), R"({
  "corpus": ["corpus.jsonl"],
  "keyword_db": "gone.db",
  "feasibility_config": "feasibility.json",
  "query": { "application_terms": ["excavator"] },
  "output_dir": "out"
})");
    CHECK(run_cli("validate --config " + project.dir.file("psp_bad.json").string()) == 1);
    CHECK(run_cli("analyze --config " + project.dir.file("psp_bad.json").string()) == 1);

    // 1: bad --window argument
    CHECK(run_cli("sai --config " + config.string() + " --window nonsense") == 1);

    // 2: stage failure (tune before sai)
    const auto fresh_out = project.dir.file("fresh_out");
    CHECK(run_cli("tune --config " + config.string() + " --out " + fresh_out.string()) == 2);

    // 3: unreadable config
    CHECK(run_cli("validate --config " + project.dir.file("missing.json").string()) == 3);

    // window override changes the run id
    const auto out_a = project.dir.file("win_a");
    const auto out_b = project.dir.file("win_b");
    CHECK(run_cli("analyze --config " + config.string() + " --out " + out_a.string()) == 0);
    CHECK(run_cli("analyze --config " + config.string() + " --out " + out_b.string() +
                  " --window 2021-01-01..2030-01-01") == 0);
    CHECK(psp_test::read_file(out_a / "run.json") != psp_test::read_file(out_b / "run.json"));
}

TEST_CASE("keywords expand subcommand persists the learned db") {
    ScratchProject project;
    const auto config = project.write_config();
    const auto out = project.dir.file("kw_out");
    CHECK(run_cli("keywords expand --config " + config.string() + " --out " + out.string()) ==
          0);
    const auto db = load_db(out / "keywords.db");
    CHECK(db.contains("dpfoff"));
}
