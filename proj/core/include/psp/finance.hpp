#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "psp/ingestion.hpp"
#include "psp/money.hpp"

namespace psp {

enum class MarketType { Monopolistic, NonMonopolistic };

std::string_view to_string(MarketType m);  // "monopolistic" | "non_monopolistic"
MarketType market_type_from_string(std::string_view s);

/// MV = PAE * PPIA, exact fixed point.
Money market_value(std::uint64_t pae, const Money& ppia);

struct PotentialAttackers {
    std::uint64_t count = 0;
    MarketType market = MarketType::NonMonopolistic;  // records the VS-vs-MS interpretation
};

/// PAE = floor(vs_or_ms * pea). The formula is identical for both market
/// modes; only the interpretation of the first factor differs (vehicle sales
/// vs market share). Throws ValidationError when pea is outside [0, 1].
PotentialAttackers potential_attackers(double vs_or_ms, double pea, MarketType market);

/// FC = fteh * ch + sld.
Money fixed_cost(double fteh_hours, const Money& hourly_cost, const Money& sld);

/// BEP = ceil(fc * n / (ppia - vcu)): units must be sold in whole numbers to
/// cover the cost. Throws MarginError when ppia <= vcu and ValidationError
/// when n is zero.
std::uint64_t break_even(const Money& fc, std::uint64_t n, const Money& ppia, const Money& vcu);

/// Inverse of the break-even relation with FC unknown:
/// FC = floor_to_whole_currency(bep * (ppia - vcu) / n).
Money max_adversary_investment(std::uint64_t bep, const Money& ppia, const Money& vcu,
                               std::uint64_t n);

/// Robust price-point estimate: drops samples outside
/// [Q1 - 1.5*IQR, Q3 + 1.5*IQR] (quartiles by nearest rank) and returns the
/// median of the survivors (lower median on even counts). Throws
/// ValidationError on an empty list or mixed currencies.
Money estimate_ppia(std::vector<Money> price_samples);

/// Scans post text for amount/currency-marker pairs (symbol or ISO code on
/// either side, optional thousands separators, optional decimals) and returns
/// every parse in the requested currency, in post order.
std::vector<Money> extract_prices(const std::vector<SocialPost>& posts,
                                  std::string_view currency);
std::vector<Money> extract_prices_from_text(std::string_view text, std::string_view currency);

/// Analyst-supplied inputs of one financial assessment. Amount fields are
/// optional so that stages can report exactly what was provided.
struct FinancialScenario {
    std::string currency = "EUR";
    std::optional<std::uint64_t> pae;  // direct attacker count ...
    std::optional<double> vs_or_ms;    // ... or derived from sales/share * pea
    std::optional<double> pea;
    MarketType market = MarketType::NonMonopolistic;
    std::optional<Money> ppia;
    bool ppia_from_corpus = false;  // mine price samples from the corpus instead
    std::optional<Money> vcu;
    std::optional<double> fteh_hours;
    std::optional<Money> hourly_cost;
    std::optional<Money> sld;
    std::uint64_t competitors = 1;  // n

    void validate() const;  // throws ValidationError
};

/// Everything the report emits for the financial model, inputs echoed.
struct FinancialReport {
    FinancialScenario inputs;
    std::uint64_t pae = 0;
    Money ppia;
    Money mv;                                    // market value
    std::optional<Money> fc_forward;             // FTEH*ch + SLD, when inputs present
    std::optional<std::uint64_t> bep;            // from fc_forward
    std::optional<Money> max_investment;         // inverse relation with BEP = PAE
    std::optional<std::string> margin_note;      // set when ppia <= vcu
    std::size_t mined_price_samples = 0;         // when ppia_from_corpus
};

/// Evaluates a scenario end to end. `corpus` is only consulted when
/// ppia_from_corpus is set. An unprofitable margin is reported, not thrown.
FinancialReport evaluate_financials(const FinancialScenario& scenario,
                                    const PostCollection* corpus);

}  // namespace psp
