#include "psp/finance.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

#include "psp/errors.hpp"

namespace psp {

namespace {

// Integer products that can exceed 64 bits (cents * count) go through 128-bit
// intermediates.
using Wide = __int128;

std::int64_t narrow(Wide v, const char* what) {
    if (v > Wide(INT64_MAX) || v < Wide(INT64_MIN))
        throw ValidationError(std::string(what) + " overflows fixed-point range");
    return static_cast<std::int64_t>(v);
}

}  // namespace

std::string_view to_string(MarketType m) {
    return m == MarketType::Monopolistic ? "monopolistic" : "non_monopolistic";
}

MarketType market_type_from_string(std::string_view s) {
    if (s == "monopolistic") return MarketType::Monopolistic;
    if (s == "non_monopolistic") return MarketType::NonMonopolistic;
    throw ParseError("unknown market type '" + std::string(s) + "'");
}

Money market_value(std::uint64_t pae, const Money& ppia) {
    const Wide cents = Wide(ppia.cents()) * Wide(pae);
    return Money(narrow(cents, "market value"), ppia.currency());
}

PotentialAttackers potential_attackers(double vs_or_ms, double pea, MarketType market) {
    if (pea < 0.0 || pea > 1.0)
        throw ValidationError("pea must lie in [0, 1], got " + std::to_string(pea));
    if (vs_or_ms < 0.0) throw ValidationError("vehicle sales / market share must be non-negative");

    const double product = vs_or_ms * pea;
    // Products like 14060 * 0.1 land a hair under the exact integer; snap
    // before flooring so the count matches the exact arithmetic.
    const double rounded = std::round(product);
    const double value = std::abs(product - rounded) < 1e-6 ? rounded : std::floor(product);
    return PotentialAttackers{static_cast<std::uint64_t>(value), market};
}

Money fixed_cost(double fteh_hours, const Money& hourly_cost, const Money& sld) {
    if (fteh_hours < 0.0) throw ValidationError("fteh hours must be non-negative");
    if (!hourly_cost.same_currency(sld))
        throw ValidationError("currency mismatch: " + hourly_cost.currency() + " vs " +
                              sld.currency());
    const double labour = fteh_hours * static_cast<double>(hourly_cost.cents());
    return Money(std::llround(labour) + sld.cents(), sld.currency());
}

std::uint64_t break_even(const Money& fc, std::uint64_t n, const Money& ppia, const Money& vcu) {
    if (n == 0) throw ValidationError("competitor count n must be at least 1");
    const Money margin = ppia - vcu;
    if (margin.cents() <= 0)
        throw MarginError("attack unprofitable at any volume: ppia (" + ppia.str() +
                          ") does not exceed vcu (" + vcu.str() + ")");
    if (!fc.same_currency(ppia))
        throw ValidationError("currency mismatch: " + fc.currency() + " vs " + ppia.currency());
    if (fc.cents() < 0) throw ValidationError("fixed cost must be non-negative");

    const Wide numerator = Wide(fc.cents()) * Wide(n);
    const Wide denominator = Wide(margin.cents());
    return static_cast<std::uint64_t>((numerator + denominator - 1) / denominator);
}

Money max_adversary_investment(std::uint64_t bep, const Money& ppia, const Money& vcu,
                               std::uint64_t n) {
    if (n == 0) throw ValidationError("competitor count n must be at least 1");
    const Money margin = ppia - vcu;
    if (margin.cents() <= 0)
        throw MarginError("attack unprofitable at any volume: ppia (" + ppia.str() +
                          ") does not exceed vcu (" + vcu.str() + ")");

    const Wide cents = Wide(bep) * Wide(margin.cents()) / Wide(n);
    return Money(narrow(cents, "adversary investment"), ppia.currency()).floor_to_whole();
}

Money estimate_ppia(std::vector<Money> price_samples) {
    if (price_samples.empty())
        throw ValidationError("cannot estimate ppia: no price samples");
    const std::string currency = price_samples.front().currency();
    for (const auto& sample : price_samples)
        if (sample.currency() != currency)
            throw ValidationError("price samples mix currencies: " + currency + " vs " +
                                  sample.currency());

    std::vector<std::int64_t> cents;
    cents.reserve(price_samples.size());
    for (const auto& sample : price_samples) cents.push_back(sample.cents());
    std::sort(cents.begin(), cents.end());

    // Nearest-rank quartiles (inverse empirical CDF): stable under sample
    // permutation and whole-list duplication.
    const std::size_t k = cents.size();
    const auto nearest_rank = [&](std::size_t num, std::size_t den) {
        const std::size_t rank = (num * k + den - 1) / den;  // ceil(num*k/den), >= 1
        return cents[rank - 1];
    };
    const std::int64_t q1 = nearest_rank(1, 4);
    const std::int64_t q3 = nearest_rank(3, 4);
    const std::int64_t iqr = q3 - q1;

    std::vector<std::int64_t> survivors;
    for (std::int64_t c : cents)
        if (2 * c >= 2 * q1 - 3 * iqr && 2 * c <= 2 * q3 + 3 * iqr) survivors.push_back(c);

    // The fences always keep q1..q3, so survivors is non-empty.
    return Money(survivors[(survivors.size() - 1) / 2], currency);
}

namespace {

struct KnownCurrency {
    const char* marker;
    const char* code;
};

// Symbols first so "€" wins over any embedded code text.
constexpr KnownCurrency kCurrencies[] = {
    {"\xE2\x82\xAC", "EUR"},  // €
    {"\xC2\xA3", "GBP"},      // £
    {"$", "USD"},
    {"EUR", "EUR"},
    {"USD", "USD"},
    {"GBP", "GBP"},
};

const std::regex& price_regex() {
    // number: digits, optional 3-digit separator groups, optional 1-2 digit
    // decimals; marker: symbol or ISO code on either side.
    static const std::regex re(
        R"((\xE2\x82\xAC|\xC2\xA3|\$|\b(?:EUR|USD|GBP)\b)\s*(\d+(?:[.,]\d{3})*(?:[.,]\d{1,2})?))"
        R"(|(\d+(?:[.,]\d{3})*(?:[.,]\d{1,2})?)\s*(\xE2\x82\xAC|\xC2\xA3|\$|\b(?:EUR|USD|GBP)\b))");
    return re;
}

std::string resolve_code(const std::string& marker) {
    for (const auto& c : kCurrencies)
        if (marker == c.marker) return c.code;
    return {};
}

// Interprets '.' and ',' in a numeric token: when both occur the last one is
// the decimal mark; a single separator followed by exactly three digits is a
// thousands separator, otherwise it is the decimal mark.
std::optional<std::int64_t> cents_from_token(const std::string& token) {
    const std::size_t last_dot = token.rfind('.');
    const std::size_t last_comma = token.rfind(',');

    char decimal_sep = '\0';
    if (last_dot != std::string::npos && last_comma != std::string::npos) {
        decimal_sep = last_dot > last_comma ? '.' : ',';
    } else if (last_dot != std::string::npos || last_comma != std::string::npos) {
        const char sep = last_dot != std::string::npos ? '.' : ',';
        const std::size_t pos = std::max(last_dot == std::string::npos ? 0 : last_dot,
                                         last_comma == std::string::npos ? 0 : last_comma);
        const std::size_t tail = token.size() - pos - 1;
        const bool multiple = token.find(sep) != pos;
        decimal_sep = (tail == 3 || multiple) ? '\0' : sep;
    }

    std::string digits;
    std::int64_t frac = 0;
    std::size_t frac_digits = 0;
    bool in_fraction = false;
    for (char c : token) {
        if (c == decimal_sep && !in_fraction) {
            in_fraction = true;
            continue;
        }
        if (c == '.' || c == ',') {
            if (in_fraction) return std::nullopt;  // separator after decimals
            continue;                              // thousands separator
        }
        if (in_fraction) {
            frac = frac * 10 + (c - '0');
            ++frac_digits;
        } else {
            digits.push_back(c);
        }
    }
    if (digits.empty() || digits.size() > 15 || frac_digits > 2) return std::nullopt;
    if (frac_digits == 1) frac *= 10;
    return std::stoll(digits) * 100 + frac;
}

}  // namespace

std::vector<Money> extract_prices_from_text(std::string_view text, std::string_view currency) {
    std::vector<Money> out;
    const std::string haystack(text);
    auto begin = std::sregex_iterator(haystack.begin(), haystack.end(), price_regex());
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
        const std::smatch& m = *it;
        const bool marker_first = m[1].matched;
        const std::string marker = marker_first ? m[1].str() : m[4].str();
        const std::string token = marker_first ? m[2].str() : m[3].str();

        const std::string code = resolve_code(marker);
        if (code != currency) continue;
        if (const auto cents = cents_from_token(token))
            out.emplace_back(*cents, code);
    }
    return out;
}

std::vector<Money> extract_prices(const std::vector<SocialPost>& posts,
                                  std::string_view currency) {
    std::vector<Money> out;
    for (const auto& post : posts) {
        auto prices = extract_prices_from_text(post.text, currency);
        out.insert(out.end(), prices.begin(), prices.end());
    }
    return out;
}

void FinancialScenario::validate() const {
    if (currency.size() != 3) throw ValidationError("financial scenario needs a currency code");
    if (!pae && !(vs_or_ms && pea))
        throw ValidationError("financial scenario needs pae, or vs_or_ms together with pea");
    if (pea && (*pea < 0.0 || *pea > 1.0)) throw ValidationError("pea must lie in [0, 1]");
    if (!ppia && !ppia_from_corpus)
        throw ValidationError("financial scenario needs ppia or ppia_from_corpus");
    if (competitors == 0) throw ValidationError("competitor count n must be at least 1");
    const bool any_fc = fteh_hours || hourly_cost || sld;
    const bool all_fc = fteh_hours && hourly_cost && sld;
    if (any_fc && !all_fc)
        throw ValidationError("fixed-cost inputs fteh_hours, hourly_cost and sld come as a set");

    const auto check_currency = [&](const std::optional<Money>& m, const char* name) {
        if (m && m->currency() != currency)
            throw ValidationError(std::string(name) + " is in " + m->currency() +
                                  " but the scenario currency is " + currency);
    };
    check_currency(ppia, "ppia");
    check_currency(vcu, "vcu");
    check_currency(hourly_cost, "hourly_cost");
    check_currency(sld, "sld");
}

FinancialReport evaluate_financials(const FinancialScenario& scenario,
                                    const PostCollection* corpus) {
    scenario.validate();

    FinancialReport report;
    report.inputs = scenario;

    if (scenario.pae) {
        report.pae = *scenario.pae;
    } else {
        report.pae = potential_attackers(*scenario.vs_or_ms, *scenario.pea, scenario.market).count;
    }

    if (scenario.ppia) {
        report.ppia = *scenario.ppia;
    } else {
        if (!corpus)
            throw ValidationError("ppia_from_corpus requires a corpus to mine prices from");
        const auto samples = extract_prices(corpus->posts(), scenario.currency);
        report.mined_price_samples = samples.size();
        report.ppia = estimate_ppia(samples);  // throws when no sample parsed
    }

    report.mv = market_value(report.pae, report.ppia);

    if (scenario.fteh_hours)
        report.fc_forward = fixed_cost(*scenario.fteh_hours, *scenario.hourly_cost, *scenario.sld);

    if (scenario.vcu) {
        if (report.ppia > *scenario.vcu) {
            if (report.fc_forward)
                report.bep = break_even(*report.fc_forward, scenario.competitors, report.ppia,
                                        *scenario.vcu);
            report.max_investment = max_adversary_investment(report.pae, report.ppia,
                                                             *scenario.vcu, scenario.competitors);
        } else {
            report.margin_note = "attack unprofitable at any volume: ppia does not exceed vcu";
        }
    }
    return report;
}

}  // namespace psp
