#include "psp/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "psp/errors.hpp"
#include "psp/sha256.hpp"

namespace psp {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string read_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot open '" + file.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("error while reading '" + file.string() + "'");
    return buf.str();
}

json window_json(const std::optional<TimeWindow>& window) {
    if (!window) return nullptr;
    return json{{"start", format_utc(window->start)}, {"end", format_utc(window->end)}};
}

json finance_inputs_json(const FinancialScenario& s) {
    json j;
    j["currency"] = s.currency;
    j["pae"] = s.pae ? json(*s.pae) : json(nullptr);
    j["vs_or_ms"] = s.vs_or_ms ? json(*s.vs_or_ms) : json(nullptr);
    j["pea"] = s.pea ? json(*s.pea) : json(nullptr);
    j["market"] = std::string(to_string(s.market));
    j["ppia"] = s.ppia ? json(s.ppia->amount_str()) : json(nullptr);
    j["ppia_from_corpus"] = s.ppia_from_corpus;
    j["vcu"] = s.vcu ? json(s.vcu->amount_str()) : json(nullptr);
    j["fteh_hours"] = s.fteh_hours ? json(*s.fteh_hours) : json(nullptr);
    j["hourly_cost"] = s.hourly_cost ? json(s.hourly_cost->amount_str()) : json(nullptr);
    j["sld"] = s.sld ? json(s.sld->amount_str()) : json(nullptr);
    j["n"] = s.competitors;
    return j;
}

PostQuery build_query(const RunConfig& cfg, const KeywordDb& db) {
    PostQuery query;
    query.application_terms = cfg.application_terms;
    query.attack_keywords = db.tags();
    query.region = cfg.region;
    query.window = cfg.window;
    return query;
}

PostCollection load_all_corpora(const RunConfig& cfg) {
    PostCollection all;
    for (const auto& path : cfg.corpus_paths)
        all = PostCollection::merge(all, load_corpus(path).posts);
    return all;
}

std::vector<TunedTable> tune_all(const KeywordDb& db, const FeasibilityConfig& feasibility,
                                 const SaiSplit& split, const RunConfig& cfg) {
    std::vector<TunedTable> tables;
    for (const auto& scenario : db.scenarios())
        tables.push_back(tune_for_scenario(feasibility.vector_table, split.insider,
                                           split.outsider, scenario, cfg.tuning, cfg.window));
    return tables;
}

}  // namespace

std::string compute_run_id(const RunConfig& cfg) {
    json canonical;
    json corpus_digests = json::array();
    for (const auto& path : cfg.corpus_paths)
        corpus_digests.push_back(Sha256::hash_hex(read_file(path)));
    canonical["corpus_sha256"] = corpus_digests;
    canonical["keyword_db_sha256"] = Sha256::hash_hex(read_file(cfg.keyword_db_path));
    canonical["feasibility_sha256"] = Sha256::hash_hex(read_file(cfg.feasibility_config_path));
    canonical["query"] = {{"application_terms", cfg.application_terms},
                          {"region", cfg.region ? json(*cfg.region) : json(nullptr)},
                          {"window", window_json(cfg.window)}};
    canonical["sai_weights"] = {cfg.sai_weights.views, cfg.sai_weights.interactions,
                                cfg.sai_weights.popularity};
    canonical["tuning"] = {cfg.tuning.major, cfg.tuning.minor};
    canonical["expansion"] = {cfg.expansion.min_cooccurrence, cfg.expansion.min_support_fraction};
    canonical["finance"] = cfg.finance ? finance_inputs_json(*cfg.finance) : json(nullptr);
    return Sha256::hash_hex(canonical.dump());
}

namespace {

// Reruns a pipeline stage so failures name the stage they died in.
template <typename Fn>
auto stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const IoError& e) {
        throw IoError(std::string(name) + ": " + e.what());
    } catch (const Error& e) {
        throw Error(std::string(name) + ": " + e.what());
    }
}

}  // namespace

ReportBundle run_analysis(const RunConfig& cfg) {
    ReportBundle bundle;
    bundle.run_id = stage("hash_inputs", [&] { return compute_run_id(cfg); });
    bundle.window = cfg.window;

    const FeasibilityConfig feasibility = stage(
        "load_feasibility_config", [&] { return FeasibilityConfig::load(cfg.feasibility_config_path); });
    const KeywordDb db = stage("load_keyword_db", [&] { return load_db(cfg.keyword_db_path); });
    const PostCollection corpus = stage("load_corpus", [&] { return load_all_corpora(cfg); });
    bundle.corpus_posts = corpus.size();

    const auto matches =
        stage("query_posts", [&] { return query_posts(corpus, build_query(cfg, db)); });
    bundle.matched_posts = matches.size();

    bundle.sai = stage("compute_sai", [&] { return compute_sai(matches, db, cfg.sai_weights); });
    bundle.split = split_insider_outsider(bundle.sai);

    ExpandParams expansion = cfg.expansion;
    expansion.run_id = bundle.run_id;
    auto expanded =
        stage("expand_keywords", [&] { return expand_keywords(db, matches, expansion); });
    bundle.keyword_additions = std::move(expanded.added);
    bundle.updated_db = std::move(expanded.db);

    bundle.tuned =
        stage("tune_tables", [&] { return tune_all(db, feasibility, bundle.split, cfg); });

    if (cfg.finance)
        bundle.finance =
            stage("finance", [&] { return evaluate_financials(*cfg.finance, &corpus); });

    const auto now = std::chrono::system_clock::now();
    bundle.generated_at = format_utc(
        UtcTime{std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count()});
    return bundle;
}

std::string sai_csv(const std::vector<SaiEntry>& sai) {
    std::ostringstream out;
    out << "scenario,score,post_count,probability,class,vector\n";
    for (const auto& e : sai)
        out << e.scenario << ',' << fmt_double(e.raw_score) << ',' << e.post_count << ','
            << fmt_double(e.probability) << ',' << to_string(e.attacker_class) << ','
            << to_string(e.dominant_vector) << '\n';
    return out.str();
}

std::string sai_json_text(const std::vector<SaiEntry>& sai) {
    json entries = json::array();
    for (const auto& e : sai) {
        entries.push_back({{"scenario", e.scenario},
                           {"keyword_tags", e.keyword_tags},
                           {"score", e.raw_score},
                           {"post_count", e.post_count},
                           {"probability", e.probability},
                           {"class", std::string(to_string(e.attacker_class))},
                           {"vector", std::string(to_string(e.dominant_vector))}});
    }
    return json{{"sai", entries}}.dump(2) + "\n";
}

std::vector<SaiEntry> sai_from_json_text(const std::string& text) {
    std::vector<SaiEntry> out;
    try {
        const json j = json::parse(text);
        for (const auto& item : j.at("sai")) {
            SaiEntry e;
            e.scenario = item.at("scenario").get<std::string>();
            e.keyword_tags = item.at("keyword_tags").get<std::vector<std::string>>();
            e.raw_score = item.at("score").get<double>();
            e.post_count = item.at("post_count").get<std::size_t>();
            e.probability = item.at("probability").get<double>();
            e.attacker_class = attacker_class_from_string(item.at("class").get<std::string>());
            e.dominant_vector = attack_vector_from_string(item.at("vector").get<std::string>());
            out.push_back(std::move(e));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("SAI table: ") + e.what());
    }
    return out;
}

std::string tuned_csv(const std::vector<TunedTable>& tables) {
    std::ostringstream out;
    out << "scenario,vector,share,base,tuned\n";
    for (const auto& t : tables)
        for (AttackVector v : kAllVectors)
            out << t.scenario << ',' << to_string(v) << ',' << fmt_double(t.factors.at(v)) << ','
                << to_string(t.base.at(v)) << ',' << to_string(t.tuned.at(v)) << '\n';
    return out.str();
}

std::string tuned_json_text(const std::vector<TunedTable>& tables) {
    json arr = json::array();
    for (const auto& t : tables) {
        json shares, base, tuned;
        for (AttackVector v : kAllVectors) {
            const auto key = std::string(to_string(v));
            shares[key] = t.factors.at(v);
            base[key] = std::string(to_string(t.base.at(v)));
            tuned[key] = std::string(to_string(t.tuned.at(v)));
        }
        arr.push_back({{"scenario", t.scenario},
                       {"window", window_json(t.window)},
                       {"corrective_factors", shares},
                       {"base", base},
                       {"tuned", tuned}});
    }
    return json{{"tuned_tables", arr}}.dump(2) + "\n";
}

std::string additions_json_text(const std::vector<AttackKeyword>& added) {
    json arr = json::array();
    for (const auto& k : added)
        arr.push_back({{"tag", k.tag},
                       {"scenario", k.scenario},
                       {"class", std::string(to_string(k.attacker_class))},
                       {"vector", std::string(to_string(k.vector))},
                       {"source_run_id", k.source_run_id},
                       {"added_at", format_utc(k.added_at)}});
    return json{{"added_keywords", arr}}.dump(2) + "\n";
}

std::string finance_json_text(const FinancialReport& report) {
    json j;
    j["inputs"] = finance_inputs_json(report.inputs);
    j["pae"] = report.pae;
    j["ppia"] = report.ppia.str();
    j["market_value"] = report.mv.str();
    j["fixed_cost_forward"] = report.fc_forward ? json(report.fc_forward->str()) : json(nullptr);
    j["break_even_units"] = report.bep ? json(*report.bep) : json(nullptr);
    j["max_adversary_investment"] =
        report.max_investment ? json(report.max_investment->str()) : json(nullptr);
    j["margin_note"] = report.margin_note ? json(*report.margin_note) : json(nullptr);
    j["mined_price_samples"] = report.mined_price_samples;
    return j.dump(2) + "\n";
}

std::string run_json_text(const ReportBundle& bundle) {
    json j;
    j["run_id"] = bundle.run_id;
    j["corpus_posts"] = bundle.corpus_posts;
    j["matched_posts"] = bundle.matched_posts;
    j["window"] = window_json(bundle.window);
    j["keyword_additions"] = bundle.keyword_additions.size();
    j["scenarios"] = bundle.tuned.size();
    return j.dump(2) + "\n";
}

std::string summary_text(const ReportBundle& bundle) {
    std::ostringstream out;
    out << "PSP analysis report\n";
    out << "run id:       " << bundle.run_id << "\n";
    out << "generated at: " << bundle.generated_at << "\n";
    out << "corpus:       " << bundle.corpus_posts << " posts, " << bundle.matched_posts
        << " matched\n";
    if (bundle.window)
        out << "window:       [" << format_utc(bundle.window->start) << ", "
            << format_utc(bundle.window->end) << ")\n";

    out << "\nSocial Attraction Index (" << bundle.sai.size() << " scenarios, "
        << bundle.split.insider.size() << " insider / " << bundle.split.outsider.size()
        << " outsider):\n";
    std::size_t rank = 0;
    for (const auto& e : bundle.sai) {
        out << "  " << ++rank << ". " << e.scenario << "  score=" << fmt_double(e.raw_score)
            << "  p=" << fmt_double(e.probability) << "  " << to_string(e.attacker_class) << "  "
            << to_string(e.dominant_vector) << "  (" << e.post_count << " posts)\n";
    }
    if (bundle.sai.empty()) out << "  (no matched posts)\n";

    out << "\nTuned attack-vector tables:\n";
    for (const auto& t : bundle.tuned) {
        out << "  " << t.scenario << ":";
        for (AttackVector v : kAllVectors) {
            out << "  " << to_string(v) << " " << to_string(t.base.at(v));
            if (t.tuned.at(v) != t.base.at(v)) out << "->" << to_string(t.tuned.at(v));
        }
        out << "\n";
    }
    if (bundle.tuned.empty()) out << "  (no scenarios)\n";

    out << "\nKeyword auto-learning: " << bundle.keyword_additions.size() << " added";
    if (!bundle.keyword_additions.empty()) {
        out << " (";
        for (std::size_t i = 0; i < bundle.keyword_additions.size(); ++i)
            out << (i ? ", " : "") << bundle.keyword_additions[i].tag;
        out << ")";
    }
    out << "\n";

    if (bundle.finance) {
        const auto& f = *bundle.finance;
        out << "\nFinancial model:\n";
        out << "  PAE " << f.pae << ", PPIA " << f.ppia.str() << "\n";
        out << "  market value MV = " << f.mv.str() << "\n";
        if (f.fc_forward) out << "  fixed cost FC = " << f.fc_forward->str() << "\n";
        if (f.bep) out << "  break-even BEP = " << *f.bep << " units\n";
        if (f.max_investment)
            out << "  max adversary investment = " << f.max_investment->str() << "\n";
        if (f.margin_note) out << "  note: " << *f.margin_note << "\n";
    }
    return out.str();
}

void write_artifacts(const std::filesystem::path& out_dir,
                     const std::vector<std::pair<std::string, std::string>>& artifacts) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir.string() + "'");

    std::vector<std::filesystem::path> written;
    const auto cleanup = [&] {
        for (const auto& path : written) std::filesystem::remove(path, ec);
    };

    for (const auto& [name, content] : artifacts) {
        const auto target = out_dir / name;
        const auto tmp = out_dir / (name + ".tmp");
        try {
            {
                std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
                if (!out) throw IoError("cannot write '" + target.string() + "'");
                out << content;
                out.flush();
                if (!out) throw IoError("error while writing '" + target.string() + "'");
            }
            written.push_back(tmp);
            std::filesystem::rename(tmp, target);
            written.back() = target;
        } catch (...) {
            cleanup();
            throw;
        }
    }
}

namespace {

std::vector<std::pair<std::string, std::string>> bundle_artifacts(const ReportBundle& bundle) {
    std::vector<std::pair<std::string, std::string>> artifacts;
    artifacts.emplace_back("summary.txt", summary_text(bundle));
    artifacts.emplace_back("sai.csv", sai_csv(bundle.sai));
    artifacts.emplace_back("sai.json", sai_json_text(bundle.sai));
    artifacts.emplace_back("tuned_tables.csv", tuned_csv(bundle.tuned));
    artifacts.emplace_back("tuned_tables.json", tuned_json_text(bundle.tuned));
    artifacts.emplace_back("sai_chart.svg", sai_chart_svg(bundle.sai));
    artifacts.emplace_back("keywords.db", db_to_text(bundle.updated_db));
    artifacts.emplace_back("additions.json", additions_json_text(bundle.keyword_additions));
    artifacts.emplace_back("run.json", run_json_text(bundle));
    if (bundle.finance) artifacts.emplace_back("finance.json", finance_json_text(*bundle.finance));
    return artifacts;
}

}  // namespace

ReportBundle cmd_analyze(const RunConfig& cfg) {
    const ReportBundle bundle = run_analysis(cfg);
    write_artifacts(cfg.output_dir, bundle_artifacts(bundle));
    if (!bundle.finance) {
        // a rerun without a finance section must not leave a stale report
        std::error_code ec;
        std::filesystem::remove(cfg.output_dir / "finance.json", ec);
    }
    return bundle;
}

std::vector<SaiEntry> cmd_sai(const RunConfig& cfg) {
    const KeywordDb db = load_db(cfg.keyword_db_path);
    const PostCollection corpus = load_all_corpora(cfg);
    const auto matches = query_posts(corpus, build_query(cfg, db));
    auto sai = compute_sai(matches, db, cfg.sai_weights);

    write_artifacts(cfg.output_dir, {{"sai.csv", sai_csv(sai)},
                                     {"sai.json", sai_json_text(sai)},
                                     {"sai_chart.svg", sai_chart_svg(sai)}});
    return sai;
}

std::vector<TunedTable> cmd_tune(const RunConfig& cfg,
                                 const std::optional<std::string>& scenario) {
    const auto sai_path = cfg.output_dir / "sai.json";
    if (!std::filesystem::exists(sai_path))
        throw Error("no SAI table at '" + sai_path.string() +
                    "'; run `psp sai --config <config>` first");

    const auto sai = sai_from_json_text(read_file(sai_path));
    const auto split = split_insider_outsider(sai);
    const FeasibilityConfig feasibility = FeasibilityConfig::load(cfg.feasibility_config_path);
    const KeywordDb db = load_db(cfg.keyword_db_path);

    std::vector<std::string> scenarios = db.scenarios();
    if (scenario) {
        if (std::find(scenarios.begin(), scenarios.end(), *scenario) == scenarios.end())
            throw ValidationError("scenario '" + *scenario + "' is not in the keyword db");
        scenarios = {*scenario};
    }

    std::vector<TunedTable> tables;
    for (const auto& s : scenarios)
        tables.push_back(tune_for_scenario(feasibility.vector_table, split.insider,
                                           split.outsider, s, cfg.tuning, cfg.window));

    write_artifacts(cfg.output_dir,
                    {{"tuned_tables.csv", tuned_csv(tables)},
                     {"tuned_tables.json", tuned_json_text(tables)}});
    return tables;
}

FinancialReport cmd_finance(const RunConfig& cfg) {
    if (!cfg.finance)
        throw ValidationError("config has no finance section; nothing to compute");

    std::optional<PostCollection> corpus;
    if (cfg.finance->ppia_from_corpus) corpus = load_all_corpora(cfg);

    const FinancialReport report =
        evaluate_financials(*cfg.finance, corpus ? &*corpus : nullptr);
    write_artifacts(cfg.output_dir, {{"finance.json", finance_json_text(report)}});
    return report;
}

ExpandResult cmd_keywords_expand(const RunConfig& cfg) {
    const KeywordDb db = load_db(cfg.keyword_db_path);
    const PostCollection corpus = load_all_corpora(cfg);
    const auto matches = query_posts(corpus, build_query(cfg, db));

    ExpandParams expansion = cfg.expansion;
    expansion.run_id = compute_run_id(cfg);
    auto result = expand_keywords(db, matches, expansion);

    write_artifacts(cfg.output_dir, {{"keywords.db", db_to_text(result.db)},
                                     {"additions.json", additions_json_text(result.added)}});
    return result;
}

}  // namespace psp
