#include "psp/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "psp/errors.hpp"
#include "psp/feasibility.hpp"

namespace psp {

namespace {

using nlohmann::json;

json parse_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open config '" + file.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ParseError("config '" + file.string() + "': " + e.what());
    }
}

Money money_field(const json& j, const std::string& currency, const char* name) {
    const auto& v = j.at(name);
    if (v.is_string()) return Money::parse(v.get<std::string>(), currency);
    if (v.is_number_integer()) return Money(v.get<std::int64_t>() * 100, currency);
    throw ParseError(std::string("finance field '") + name +
                     "' must be a string like \"360.00\" or a whole number");
}

FinancialScenario read_finance(const json& j) {
    FinancialScenario s;
    s.currency = j.value("currency", std::string("EUR"));
    if (j.contains("pae")) s.pae = j.at("pae").get<std::uint64_t>();
    if (j.contains("vs_or_ms")) s.vs_or_ms = j.at("vs_or_ms").get<double>();
    if (j.contains("pea")) s.pea = j.at("pea").get<double>();
    if (j.contains("market"))
        s.market = market_type_from_string(j.at("market").get<std::string>());
    if (j.contains("ppia")) s.ppia = money_field(j, s.currency, "ppia");
    s.ppia_from_corpus = j.value("ppia_from_corpus", false);
    if (j.contains("vcu")) s.vcu = money_field(j, s.currency, "vcu");
    if (j.contains("fteh_hours")) s.fteh_hours = j.at("fteh_hours").get<double>();
    if (j.contains("hourly_cost")) s.hourly_cost = money_field(j, s.currency, "hourly_cost");
    if (j.contains("sld")) s.sld = money_field(j, s.currency, "sld");
    s.competitors = j.value("n", std::uint64_t{1});
    return s;
}

RunConfig read_config(const json& j, const std::filesystem::path& file) {
    RunConfig cfg;
    cfg.source_file = file;
    const auto base = file.has_parent_path() ? file.parent_path() : std::filesystem::path(".");
    const auto resolve = [&](const std::string& p) {
        std::filesystem::path path(p);
        return path.is_absolute() ? path : base / path;
    };

    const auto& corpus = j.at("corpus");
    if (corpus.is_string()) {
        cfg.corpus_paths.push_back(resolve(corpus.get<std::string>()));
    } else {
        for (const auto& p : corpus) cfg.corpus_paths.push_back(resolve(p.get<std::string>()));
    }
    cfg.keyword_db_path = resolve(j.at("keyword_db").get<std::string>());
    cfg.feasibility_config_path = resolve(j.at("feasibility_config").get<std::string>());

    const auto& query = j.at("query");
    cfg.application_terms = query.at("application_terms").get<std::vector<std::string>>();
    if (query.contains("region") && !query.at("region").is_null())
        cfg.region = query.at("region").get<std::string>();
    if (query.contains("window") && !query.at("window").is_null()) {
        const auto& w = query.at("window");
        cfg.window = TimeWindow{parse_utc(w.at("start").get<std::string>()),
                                parse_utc(w.at("end").get<std::string>())};
    }

    if (j.contains("sai_weights")) {
        const auto& w = j.at("sai_weights");
        cfg.sai_weights.views = w.value("views", 0.4);
        cfg.sai_weights.interactions = w.value("interactions", 0.4);
        cfg.sai_weights.popularity = w.value("popularity", 0.2);
    }
    if (j.contains("tuning")) {
        const auto& t = j.at("tuning");
        cfg.tuning.major = t.value("major_share", 0.5);
        cfg.tuning.minor = t.value("minor_share", 0.2);
    }
    if (j.contains("expansion")) {
        const auto& e = j.at("expansion");
        cfg.expansion.min_cooccurrence = e.value("min_cooccurrence", 3);
        cfg.expansion.min_support_fraction = e.value("min_support_fraction", 0.05);
    }
    if (j.contains("finance") && !j.at("finance").is_null())
        cfg.finance = read_finance(j.at("finance"));

    cfg.output_dir = resolve(j.value("output_dir", std::string("out")));
    return cfg;
}

}  // namespace

RunConfig RunConfig::load(const std::filesystem::path& file) {
    try {
        return read_config(parse_file(file), file);
    } catch (const json::exception& e) {
        throw ParseError("config '" + file.string() + "': " + e.what());
    }
}

std::vector<std::string> validate_config(const std::filesystem::path& file) {
    // An unreadable file is the only throwing failure; everything else is a
    // collected diagnostic.
    {
        std::ifstream probe(file);
        if (!probe) throw IoError("cannot open config '" + file.string() + "'");
    }

    std::vector<std::string> diagnostics;
    RunConfig cfg;
    try {
        cfg = RunConfig::load(file);
    } catch (const Error& e) {
        diagnostics.push_back(e.what());
        return diagnostics;
    }

    for (const auto& path : cfg.corpus_paths)
        if (!std::filesystem::exists(path))
            diagnostics.push_back("corpus file not found: " + path.string());
    if (!std::filesystem::exists(cfg.keyword_db_path)) {
        diagnostics.push_back("keyword db not found: " + cfg.keyword_db_path.string());
    } else {
        try {
            load_db(cfg.keyword_db_path);
        } catch (const Error& e) {
            diagnostics.push_back(e.what());
        }
    }
    if (!std::filesystem::exists(cfg.feasibility_config_path)) {
        diagnostics.push_back("feasibility config not found: " +
                              cfg.feasibility_config_path.string());
    } else {
        try {
            FeasibilityConfig::load(cfg.feasibility_config_path);
        } catch (const Error& e) {
            diagnostics.push_back(e.what());
        }
    }

    if (cfg.application_terms.empty())
        diagnostics.push_back("query.application_terms must name at least one term");
    if (cfg.window && !(cfg.window->start < cfg.window->end))
        diagnostics.push_back("query.window start must precede end");

    try {
        cfg.sai_weights.validate();
    } catch (const Error& e) {
        diagnostics.push_back(e.what());
    }
    try {
        cfg.tuning.validate();
    } catch (const Error& e) {
        diagnostics.push_back(e.what());
    }
    try {
        cfg.expansion.validate();
    } catch (const Error& e) {
        diagnostics.push_back(e.what());
    }
    if (cfg.finance) {
        try {
            cfg.finance->validate();
        } catch (const Error& e) {
            diagnostics.push_back(e.what());
        }
    }
    if (cfg.output_dir.empty()) diagnostics.push_back("output_dir must not be empty");

    return diagnostics;
}

TimeWindow parse_window_arg(std::string_view arg) {
    const auto sep = arg.find("..");
    if (sep == std::string_view::npos)
        throw ParseError("window must look like START..END, got '" + std::string(arg) + "'");
    const auto start = arg.substr(0, sep);
    const auto end = arg.substr(sep + 2);
    if (start.empty() || end.empty())
        throw ParseError("window needs both START and END, got '" + std::string(arg) + "'");
    TimeWindow w{parse_utc(start), parse_utc(end)};
    if (!(w.start < w.end)) throw ValidationError("window start must precede end");
    return w;
}

}  // namespace psp
