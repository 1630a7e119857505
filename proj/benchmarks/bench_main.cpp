#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "psp/finance.hpp"
#include "psp/ingestion.hpp"
#include "psp/keyword_db.hpp"
#include "psp/sai.hpp"
#include "psp/sha256.hpp"

namespace {

using namespace psp;

KeywordDb bench_db() {
    const auto entry = [](std::string tag, std::string scenario, AttackVector vec) {
        AttackKeyword k;
        k.tag = std::move(tag);
        k.scenario = std::move(scenario);
        k.attacker_class = AttackerClass::Insider;
        k.vector = vec;
        return k;
    };
    return seed_db({entry("dpfdelete", "dpf_tampering", AttackVector::Physical),
                    entry("dpfoff", "dpf_tampering", AttackVector::Local),
                    entry("egroff", "egr_tampering", AttackVector::Physical),
                    entry("chiptuning", "ecu_chip_tuning", AttackVector::Local)});
}

PostCollection synthetic_corpus(std::size_t n) {
    std::mt19937 rng(7);
    std::vector<SocialPost> posts;
    posts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        SocialPost p;
        p.id = "post" + std::to_string(i);
        p.created_at = UtcTime{1600000000 + static_cast<std::int64_t>(i)};
        p.text = (i % 3 == 0 ? "excavator work today " : "truck day ") +
                 std::string(i % 2 == 0 ? "#dpfdelete #dpfoff" : "#chiptuning") +
                 " lorem ipsum filler text for realism 360 EUR";
        p.views = rng() % 100000;
        p.interactions = rng() % 10000;
        p.author_followers = rng() % 1000000;
        posts.push_back(std::move(p));
    }
    return PostCollection::from_posts(std::move(posts));
}

void BM_ExtractHashtags(benchmark::State& state) {
    const std::string text =
        "Fleet excavator maintenance hack #dpfdelete #DPFoff no more regen, "
        "also #ChipTuning and #egr_removal on the side #dieselpower";
    for (auto _ : state) benchmark::DoNotOptimize(extract_hashtags(text));
}
BENCHMARK(BM_ExtractHashtags);

void BM_QueryPosts(benchmark::State& state) {
    const auto corpus = synthetic_corpus(static_cast<std::size_t>(state.range(0)));
    const auto db = bench_db();
    PostQuery query;
    query.application_terms = {"excavator"};
    query.attack_keywords = db.tags();
    for (auto _ : state) benchmark::DoNotOptimize(query_posts(corpus, query));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_QueryPosts)->Arg(1000)->Arg(10000);

void BM_ComputeSai(benchmark::State& state) {
    const auto corpus = synthetic_corpus(static_cast<std::size_t>(state.range(0)));
    const auto db = bench_db();
    PostQuery query;
    query.application_terms = {"excavator"};
    query.attack_keywords = db.tags();
    const auto matches = query_posts(corpus, query);
    const SaiWeights w{0.4, 0.4, 0.2};
    for (auto _ : state) benchmark::DoNotOptimize(compute_sai(matches, db, w));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(matches.size()));
}
BENCHMARK(BM_ComputeSai)->Arg(1000)->Arg(10000);

void BM_ExpandKeywords(benchmark::State& state) {
    const auto corpus = synthetic_corpus(static_cast<std::size_t>(state.range(0)));
    const auto db = bench_db();
    PostQuery query;
    query.application_terms = {"excavator"};
    query.attack_keywords = db.tags();
    const auto matches = query_posts(corpus, query);
    const ExpandParams params{3, 0.05, "bench"};
    for (auto _ : state) benchmark::DoNotOptimize(expand_keywords(db, matches, params));
}
BENCHMARK(BM_ExpandKeywords)->Arg(1000);

void BM_ExtractPrices(benchmark::State& state) {
    const auto corpus = synthetic_corpus(1000);
    for (auto _ : state) benchmark::DoNotOptimize(extract_prices(corpus.posts(), "EUR"));
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_ExtractPrices);

void BM_BreakEven(benchmark::State& state) {
    const Money fc(14528600, "EUR"), ppia(36000, "EUR"), vcu(5000, "EUR");
    for (auto _ : state) benchmark::DoNotOptimize(break_even(fc, 3, ppia, vcu));
}
BENCHMARK(BM_BreakEven);

void BM_EstimatePpia(benchmark::State& state) {
    std::mt19937 rng(5);
    std::vector<Money> samples;
    for (int i = 0; i < 1000; ++i)
        samples.emplace_back(20000 + static_cast<std::int64_t>(rng() % 40000), "EUR");
    for (auto _ : state) benchmark::DoNotOptimize(estimate_ppia(samples));
}
BENCHMARK(BM_EstimatePpia);

void BM_Sha256_64k(benchmark::State& state) {
    const std::string data(64 * 1024, 'x');
    for (auto _ : state) benchmark::DoNotOptimize(Sha256::hash_hex(data));
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}
BENCHMARK(BM_Sha256_64k);

}  // namespace

BENCHMARK_MAIN();
