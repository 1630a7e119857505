#include <algorithm>
#include <random>

#include <doctest.h>

#include "psp/errors.hpp"
#include "psp/finance.hpp"

using namespace psp;

namespace {

Money eur(const char* amount) { return Money::parse(amount, "EUR"); }

}  // namespace

TEST_CASE("Money parses and formats fixed-point amounts") {
    CHECK(eur("360").cents() == 36000);
    CHECK(eur("1234.5").cents() == 123450);
    CHECK(eur("1234.56").cents() == 123456);
    CHECK(eur("-10.25").cents() == -1025);
    CHECK(eur("0").cents() == 0);

    CHECK(eur("506160.00").str() == "506160.00 EUR");
    CHECK(eur("-10.25").str() == "-10.25 EUR");
    CHECK(eur("145286.67").floor_to_whole() == eur("145286.00"));
    CHECK(eur("-0.01").floor_to_whole() == eur("-1.00"));

    CHECK_THROWS_AS(Money::parse("1.234", "EUR"), ParseError);  // three fraction digits
    CHECK_THROWS_AS(Money::parse("", "EUR"), ParseError);
    CHECK_THROWS_AS(Money::parse("12a", "EUR"), ParseError);
    CHECK_THROWS_AS(Money::parse(".5", "EUR"), ParseError);
    CHECK_THROWS_AS(Money(100, "EURO"), ValidationError);

    CHECK_THROWS_AS(eur("1") + Money::parse("1", "USD"), ValidationError);
    CHECK((eur("2.50") + eur("0.50")).cents() == 300);
    CHECK((eur("2.50") - eur("3.00")).cents() == -50);
    CHECK(eur("2.50").scaled_by(4) == eur("10.00"));
    CHECK(eur("1.00") < eur("2.00"));
}

TEST_CASE("market_value multiplies attacker count by purchase price") {
    CHECK(market_value(1406, eur("360")) == eur("506160.00"));
    CHECK(market_value(0, eur("999.99")) == eur("0.00"));
    CHECK(market_value(100, eur("250")) == eur("25000.00"));

    // linear in the attacker count
    CHECK(market_value(2 * 1406, eur("360")).cents() ==
          2 * market_value(1406, eur("360")).cents());
}

TEST_CASE("potential_attackers floors the sales*fraction product") {
    const auto a = potential_attackers(10000, 0.1, MarketType::Monopolistic);
    CHECK(a.count == 1000);
    CHECK(a.market == MarketType::Monopolistic);

    CHECK(potential_attackers(123456, 0.0, MarketType::Monopolistic).count == 0);

    // 14060 * 0.1 must not fall to 1405 through floating-point dust
    const auto b = potential_attackers(14060, 0.1, MarketType::NonMonopolistic);
    CHECK(b.count == 1406);
    CHECK(b.market == MarketType::NonMonopolistic);

    CHECK(potential_attackers(1000.9, 1.0, MarketType::Monopolistic).count == 1000);

    CHECK_THROWS_AS(potential_attackers(10, 1.5, MarketType::Monopolistic), ValidationError);
    CHECK_THROWS_AS(potential_attackers(10, -0.1, MarketType::Monopolistic), ValidationError);
    CHECK_THROWS_AS(potential_attackers(-1.0, 0.5, MarketType::Monopolistic), ValidationError);
}

TEST_CASE("fixed_cost is labour plus straight-line depreciation") {
    CHECK(fixed_cost(0, eur("100"), eur("0")) == eur("0.00"));
    CHECK(fixed_cost(1000, eur("100"), eur("10000")) == eur("110000.00"));
    CHECK(fixed_cost(2000, eur("60"), eur("25286")) == eur("145286.00"));
    CHECK_THROWS_AS(fixed_cost(-1, eur("100"), eur("0")), ValidationError);
}

TEST_CASE("break_even needs whole units to cover the cost") {
    CHECK(break_even(eur("145286.00"), 3, eur("360"), eur("50")) == 1406);
    CHECK(break_even(eur("310"), 1, eur("360"), eur("50")) == 1);
    CHECK(break_even(eur("0"), 5, eur("360"), eur("50")) == 0);

    // exact ceiling at cent precision: one extra cent forces one more unit
    CHECK(break_even(eur("145286.66"), 3, eur("360"), eur("50")) == 1406);
    CHECK(break_even(eur("145286.67"), 3, eur("360"), eur("50")) == 1407);

    CHECK_THROWS_AS(break_even(eur("100"), 3, eur("50"), eur("50")), MarginError);
    CHECK_THROWS_AS(break_even(eur("100"), 3, eur("40"), eur("50")), MarginError);
    CHECK_THROWS_AS(break_even(eur("100"), 0, eur("360"), eur("50")), ValidationError);
}

TEST_CASE("max_adversary_investment floors to whole currency") {
    CHECK(max_adversary_investment(1406, eur("360"), eur("50"), 3) == eur("145286.00"));
    CHECK(max_adversary_investment(0, eur("360"), eur("50"), 3) == eur("0.00"));
    CHECK(max_adversary_investment(1406, eur("360"), eur("50"), 1) == eur("435860.00"));

    CHECK_THROWS_AS(max_adversary_investment(10, eur("50"), eur("50"), 1), MarginError);
    CHECK_THROWS_AS(max_adversary_investment(10, eur("360"), eur("50"), 0), ValidationError);
}

TEST_CASE("break-even is anti-monotone in the per-unit margin") {
    std::mt19937 rng(11);
    for (int iter = 0; iter < 300; ++iter) {
        const Money fc(static_cast<std::int64_t>(rng() % 100000000), "EUR");
        const std::uint64_t n = 1 + rng() % 9;
        const Money vcu(static_cast<std::int64_t>(rng() % 100000), "EUR");
        const std::int64_t m1 = 1 + static_cast<std::int64_t>(rng() % 1000000);
        const std::int64_t m2 = m1 + static_cast<std::int64_t>(rng() % 1000000);
        const Money ppia1(vcu.cents() + m1, "EUR");
        const Money ppia2(vcu.cents() + m2, "EUR");
        REQUIRE(break_even(fc, n, ppia2, vcu) <= break_even(fc, n, ppia1, vcu));
    }
}

TEST_CASE("estimate_ppia takes the median after IQR screening") {
    CHECK(estimate_ppia({eur("360")}) == eur("360.00"));
    CHECK(estimate_ppia({eur("300"), eur("360"), eur("420")}) == eur("360.00"));
    // the troll price is outside the upper Tukey fence and gets dropped
    CHECK(estimate_ppia({eur("300"), eur("360"), eur("420"), eur("100000")}) == eur("360.00"));

    CHECK_THROWS_AS(estimate_ppia({}), ValidationError);
    CHECK_THROWS_AS(estimate_ppia({eur("10"), Money::parse("10", "USD")}), ValidationError);
}

TEST_CASE("estimate_ppia is invariant under permutation and duplication") {
    std::mt19937 rng(4242);
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<Money> samples;
        const std::size_t n = 1 + rng() % 12;
        for (std::size_t i = 0; i < n; ++i)
            samples.emplace_back(static_cast<std::int64_t>(rng() % 50000) *
                                     (rng() % 8 == 0 ? 100 : 1),
                                 "EUR");

        const Money base = estimate_ppia(samples);

        auto shuffled = samples;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        REQUIRE(estimate_ppia(shuffled) == base);

        auto doubled = samples;
        doubled.insert(doubled.end(), samples.begin(), samples.end());
        REQUIRE(estimate_ppia(doubled) == base);
    }
}

TEST_CASE("extract_prices parses amounts next to currency markers") {
    SocialPost post;
    post.text = "DPF off kit only 360 EUR installed";
    CHECK(extract_prices({post}, "EUR") == std::vector<Money>{eur("360.00")});

    post.text = "no price here";
    CHECK(extract_prices({post}, "EUR").empty());

    post.text = "\xE2\x82\xAC" "1.200,50 or 1,200.50 EUR";  // both separator conventions
    const auto both = extract_prices({post}, "EUR");
    REQUIRE(both.size() == 2);
    CHECK(both[0] == eur("1200.50"));
    CHECK(both[1] == eur("1200.50"));

    post.text = "EUR 75 up front, then 12,50\xE2\x82\xAC later";
    const auto mixed = extract_prices({post}, "EUR");
    REQUIRE(mixed.size() == 2);
    CHECK(mixed[0] == eur("75.00"));
    CHECK(mixed[1] == eur("12.50"));

    post.text = "$199.99 only today";
    CHECK(extract_prices({post}, "EUR").empty());
    CHECK(extract_prices({post}, "USD") == std::vector<Money>{Money::parse("199.99", "USD")});

    post.text = "EUROVISION 360 tickets";  // no currency marker, no price
    CHECK(extract_prices({post}, "EUR").empty());

    post.text = "big rig 100,000 EUR full service";
    CHECK(extract_prices({post}, "EUR") == std::vector<Money>{eur("100000.00")});
}

TEST_CASE("extract_prices walks posts in order") {
    SocialPost a, b;
    a.text = "kit 300 EUR";
    b.text = "kit 420 EUR";
    const auto prices = extract_prices({a, b}, "EUR");
    REQUIRE(prices.size() == 2);
    CHECK(prices[0] == eur("300.00"));
    CHECK(prices[1] == eur("420.00"));
}

TEST_CASE("evaluate_financials composes the whole model") {
    FinancialScenario s;
    s.currency = "EUR";
    s.pae = 1406;
    s.ppia = eur("360");
    s.vcu = eur("50");
    s.competitors = 3;
    s.fteh_hours = 2000;
    s.hourly_cost = eur("60");
    s.sld = eur("25286");

    const auto report = evaluate_financials(s, nullptr);
    CHECK(report.pae == 1406);
    CHECK(report.mv == eur("506160.00"));
    REQUIRE(report.fc_forward.has_value());
    CHECK(*report.fc_forward == eur("145286.00"));
    REQUIRE(report.bep.has_value());
    CHECK(*report.bep == 1406);
    REQUIRE(report.max_investment.has_value());
    CHECK(*report.max_investment == eur("145286.00"));
    CHECK(!report.margin_note.has_value());

    SUBCASE("attacker count can come from sales times fraction") {
        s.pae.reset();
        s.vs_or_ms = 14060;
        s.pea = 0.1;
        const auto derived = evaluate_financials(s, nullptr);
        CHECK(derived.pae == 1406);
        CHECK(derived.mv == eur("506160.00"));
    }
    SUBCASE("ppia can be mined from the corpus") {
        s.ppia.reset();
        s.ppia_from_corpus = true;
        std::vector<SocialPost> posts(4);
        posts[0].id = "m0";
        posts[0].text = "kit 300 EUR";
        posts[1].id = "m1";
        posts[1].text = "deal \xE2\x82\xAC" "360";
        posts[2].id = "m2";
        posts[2].text = "price 420 EUR fitted";
        posts[3].id = "m3";
        posts[3].text = "lol 100,000 EUR";
        const auto corpus = PostCollection::from_posts(posts);
        const auto mined = evaluate_financials(s, &corpus);
        CHECK(mined.ppia == eur("360.00"));
        CHECK(mined.mined_price_samples == 4);
        CHECK(mined.mv == eur("506160.00"));
    }
    SUBCASE("an unprofitable margin is reported, not thrown") {
        s.vcu = eur("360");
        const auto flat = evaluate_financials(s, nullptr);
        REQUIRE(flat.margin_note.has_value());
        CHECK(!flat.bep.has_value());
        CHECK(!flat.max_investment.has_value());
    }
    SUBCASE("invalid scenarios are rejected") {
        FinancialScenario bad;
        bad.currency = "EUR";
        CHECK_THROWS_AS(evaluate_financials(bad, nullptr), ValidationError);

        s.vcu = eur("50");
        s.hourly_cost.reset();  // partial fixed-cost inputs
        CHECK_THROWS_AS(evaluate_financials(s, nullptr), ValidationError);
    }
}

TEST_CASE("investment/break-even round trip stays within flooring slack") {
    std::mt19937 rng(2025);
    for (int iter = 0; iter < 200; ++iter) {
        const std::uint64_t n = 1 + rng() % 10;
        const std::int64_t vcu_cents = rng() % 1000000;
        const std::int64_t margin = 100 * static_cast<std::int64_t>(n) +
                                    static_cast<std::int64_t>(rng() % 10000000);
        const std::uint64_t b = rng() % 1000000;
        const Money vcu(vcu_cents, "EUR");
        const Money ppia(vcu_cents + margin, "EUR");

        const Money fc = max_adversary_investment(b, ppia, vcu, n);
        const std::uint64_t b2 = break_even(fc, n, ppia, vcu);
        REQUIRE((b2 == b || b2 == b + 1));
    }
}
