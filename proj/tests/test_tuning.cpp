#include <random>

#include <doctest.h>

#include "psp/errors.hpp"
#include "psp/tuning.hpp"

using namespace psp;

namespace {

SaiEntry entry(std::string scenario, AttackerClass cls, AttackVector vec, double score) {
    SaiEntry e;
    e.scenario = std::move(scenario);
    e.attacker_class = cls;
    e.dominant_vector = vec;
    e.raw_score = score;
    return e;
}

const VectorFeasibilityTable kDefaultBase{FeasibilityRating::VeryLow, FeasibilityRating::Low,
                                          FeasibilityRating::Medium, FeasibilityRating::High};

}  // namespace

TEST_CASE("corrective_factors normalizes insider scores per vector") {
    SUBCASE("no entries for the scenario") {
        const auto f = corrective_factors({entry("other", AttackerClass::Insider,
                                                 AttackVector::Physical, 5.0)},
                                          "ecm_reprogramming");
        CHECK(f.all_zero());
    }
    SUBCASE("single entry concentrates the share") {
        const auto f = corrective_factors({entry("s", AttackerClass::Insider,
                                                 AttackVector::Physical, 4.2)},
                                          "s");
        CHECK(f.at(AttackVector::Physical) == doctest::Approx(1.0));
        CHECK(f.at(AttackVector::Local) == 0.0);
        CHECK(f.argmax() == AttackVector::Physical);
    }
    SUBCASE("6:2 split yields 0.75/0.25") {
        const auto f = corrective_factors(
            {entry("s", AttackerClass::Insider, AttackVector::Physical, 6.0),
             entry("s", AttackerClass::Insider, AttackVector::Local, 2.0)},
            "s");
        CHECK(f.at(AttackVector::Physical) == doctest::Approx(0.75));
        CHECK(f.at(AttackVector::Local) == doctest::Approx(0.25));
        CHECK(f.at(AttackVector::Adjacent) == 0.0);
        CHECK(f.at(AttackVector::Network) == 0.0);
    }
    SUBCASE("all-zero scores mean no evidence") {
        const auto f = corrective_factors({entry("s", AttackerClass::Insider,
                                                 AttackVector::Physical, 0.0)},
                                          "s");
        CHECK(f.all_zero());
    }
}

TEST_CASE("tune_table applies ordinal steps with a High clamp") {
    SUBCASE("all-zero factors return the base unchanged") {
        CHECK(tune_table(kDefaultBase, CorrectiveFactors{}) == kDefaultBase);
    }
    SUBCASE("a dominant physical share lifts very_low by two steps") {
        CorrectiveFactors f;
        f.shares = {0.75, 0.25, 0.0, 0.0};
        const auto tuned = tune_table(kDefaultBase, f);
        CHECK(tuned.at(AttackVector::Physical) == FeasibilityRating::Medium);
        CHECK(tuned.at(AttackVector::Local) == FeasibilityRating::Medium);  // low + 1
        CHECK(tuned.at(AttackVector::Adjacent) == FeasibilityRating::Medium);  // untouched
        CHECK(tuned.at(AttackVector::Network) == FeasibilityRating::High);
    }
    SUBCASE("High clamps") {
        CorrectiveFactors f;
        f.shares = {0.0, 0.0, 0.4, 0.6};
        const auto tuned = tune_table(kDefaultBase, f);
        CHECK(tuned.at(AttackVector::Network) == FeasibilityRating::High);
        CHECK(tuned.at(AttackVector::Adjacent) == FeasibilityRating::High);  // medium + 1
    }
}

TEST_CASE("tune_table steps: 0.5 gives two, 0.2 gives one, below gives none") {
    CorrectiveFactors f;
    f.shares = {0.5, 0.2, 0.19, 0.11};
    const VectorFeasibilityTable base = VectorFeasibilityTable::uniform(FeasibilityRating::VeryLow);
    const auto tuned = tune_table(base, f);
    CHECK(tuned.at(AttackVector::Physical) == FeasibilityRating::Medium);   // +2
    CHECK(tuned.at(AttackVector::Local) == FeasibilityRating::Low);         // +1
    CHECK(tuned.at(AttackVector::Adjacent) == FeasibilityRating::VeryLow);  // below minor
    CHECK(tuned.at(AttackVector::Network) == FeasibilityRating::VeryLow);

    CHECK_THROWS_AS(tune_table(base, f, TuneThresholds{0.2, 0.5}), ValidationError);
    CHECK_THROWS_AS(tune_table(base, f, TuneThresholds{0.0, 0.0}), ValidationError);
}

TEST_CASE("tune_for_scenario keeps outsider-only scenarios verbatim") {
    const std::vector<SaiEntry> insider = {
        entry("dpf_tampering", AttackerClass::Insider, AttackVector::Physical, 7.0)};
    const std::vector<SaiEntry> outsider = {
        entry("can_injection", AttackerClass::Outsider, AttackVector::Network, 9.0)};

    const auto outsider_only =
        tune_for_scenario(kDefaultBase, insider, outsider, "can_injection");
    CHECK(outsider_only.tuned == kDefaultBase);
    CHECK(outsider_only.factors.all_zero());

    const auto insider_one = tune_for_scenario(kDefaultBase, insider, outsider, "dpf_tampering");
    CHECK(insider_one.tuned.at(AttackVector::Physical) == FeasibilityRating::Medium);
    CHECK(insider_one.factors.at(AttackVector::Physical) == doctest::Approx(1.0));

    SUBCASE("no SAI evidence at all leaves the base") {
        const auto empty = tune_for_scenario(kDefaultBase, {}, {}, "dpf_tampering");
        CHECK(empty.tuned == kDefaultBase);
        CHECK(empty.factors.all_zero());
    }
    SUBCASE("the query window is recorded for reproducibility") {
        const TimeWindow window{parse_utc("2021-01-01T00:00:00Z"),
                                parse_utc("2023-01-01T00:00:00Z")};
        const auto tuned = tune_for_scenario(kDefaultBase, insider, outsider, "dpf_tampering",
                                             TuneThresholds{}, window);
        REQUIRE(tuned.window.has_value());
        CHECK(*tuned.window == window);
    }
}

TEST_CASE("window choice flips the dominant vector on a two-epoch history") {
    // pre-2021 evidence is physical-dominated, 2021+ local-dominated
    const std::vector<SaiEntry> full_window = {
        entry("ecm_reprogramming", AttackerClass::Insider, AttackVector::Physical, 10.0)};
    const std::vector<SaiEntry> recent_window = {
        entry("ecm_reprogramming", AttackerClass::Insider, AttackVector::Local, 4.0)};

    const auto full = tune_for_scenario(kDefaultBase, full_window, {}, "ecm_reprogramming");
    const auto recent = tune_for_scenario(kDefaultBase, recent_window, {}, "ecm_reprogramming");

    CHECK(full.factors.argmax() == AttackVector::Physical);
    CHECK(recent.factors.argmax() == AttackVector::Local);
    CHECK(full.factors.argmax() != recent.factors.argmax());
    CHECK(full.tuned.at(AttackVector::Physical) > full.base.at(AttackVector::Physical));
}

TEST_CASE("tuning properties over randomized SAI lists") {
    std::mt19937 rng(31337);
    const std::vector<std::string> scenarios = {"s0", "s1", "s2"};

    for (int iter = 0; iter < 300; ++iter) {
        std::vector<SaiEntry> insider, outsider;
        for (const auto& s : scenarios) {
            const std::size_t k = rng() % 3;
            for (std::size_t i = 0; i < k; ++i) {
                const bool is_insider = rng() % 2 == 0;
                auto e = entry(s, is_insider ? AttackerClass::Insider : AttackerClass::Outsider,
                               static_cast<AttackVector>(rng() % 4),
                               static_cast<double>(rng() % 100) / 10.0);
                (is_insider ? insider : outsider).push_back(std::move(e));
            }
        }

        for (const auto& s : scenarios) {
            const auto tuned = tune_for_scenario(kDefaultBase, insider, outsider, s);

            // tuned never falls below base, stays in the rating domain
            for (AttackVector v : kAllVectors) {
                REQUIRE(tuned.tuned.at(v) >= tuned.base.at(v));
                REQUIRE(tuned.tuned.at(v) <= FeasibilityRating::High);
            }

            // outsider-only scenarios are never modified
            const auto in_half = [&](const std::vector<SaiEntry>& half) {
                return std::any_of(half.begin(), half.end(),
                                   [&](const SaiEntry& e) { return e.scenario == s; });
            };
            if (!in_half(insider) && in_half(outsider)) {
                REQUIRE(tuned.tuned == kDefaultBase);
                REQUIRE(tuned.factors.all_zero());
            }

            // factors are a distribution (or all zero)
            double sum = 0.0;
            for (AttackVector v : kAllVectors) {
                REQUIRE(tuned.factors.at(v) >= 0.0);
                sum += tuned.factors.at(v);
            }
            REQUIRE((sum == doctest::Approx(0.0) || sum == doctest::Approx(1.0)));
        }
    }
}

TEST_CASE("raising a vector's share never lowers its tuned rating") {
    std::mt19937 rng(777);
    for (int iter = 0; iter < 500; ++iter) {
        CorrectiveFactors low, high;
        const auto v = static_cast<AttackVector>(rng() % 4);
        const double share_low = (rng() % 101) / 100.0;
        const double share_high = share_low + (100 - static_cast<int>(share_low * 100)) *
                                                  (rng() % 101) / 10000.0;
        const auto spread = [&](CorrectiveFactors& f, double share) {
            const double rest = (1.0 - share) / 3.0;
            for (AttackVector u : kAllVectors)
                f.shares[static_cast<std::size_t>(u)] = (u == v) ? share : rest;
        };
        spread(low, share_low);
        spread(high, share_high);

        const auto tuned_low = tune_table(kDefaultBase, low);
        const auto tuned_high = tune_table(kDefaultBase, high);
        REQUIRE(tuned_high.at(v) >= tuned_low.at(v));
    }
}
