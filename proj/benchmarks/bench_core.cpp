#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "factcheck/evaluation.hpp"
#include "factcheck/knowledge.hpp"
#include "factcheck/model.hpp"
#include "factcheck/rng.hpp"

using namespace factcheck;

namespace {

KnowledgeGraph synthetic_kg(std::size_t n) {
    SeededRng rng(7);
    const std::vector<std::string> relations = {"MENGANDUNG", "MENGHASILKAN", "MEMERLUKAN"};
    std::vector<Triplet> triplets;
    triplets.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        triplets.push_back({"unsur-" + std::to_string(i % (n / 4 + 1)),
                            relations[i % relations.size()],
                            "bahan-" + std::to_string(rng.uniform_index(64))});
    }
    return KnowledgeGraph::from_triplets(std::move(triplets));
}

}  // namespace

static void BM_FactsForHypothesis(benchmark::State& state) {
    const KnowledgeGraph kg = synthetic_kg(static_cast<std::size_t>(state.range(0)));
    const StopwordList& stopwords = StopwordList::default_indonesian();
    const std::string hypothesis = "laporan menyebut unsur-3 mengandung bahan-7 dan unsur-9";
    for (auto _ : state) {
        FactParagraph facts = facts_for_hypothesis(hypothesis, kg, stopwords);
        benchmark::DoNotOptimize(facts);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FactsForHypothesis)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

static void BM_LoadIndexFromTriplets(benchmark::State& state) {
    const KnowledgeGraph base = synthetic_kg(static_cast<std::size_t>(state.range(0)));
    std::vector<Triplet> triplets = base.triplets();
    for (auto _ : state) {
        KnowledgeGraph kg = KnowledgeGraph::from_triplets(triplets);
        benchmark::DoNotOptimize(kg);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LoadIndexFromTriplets)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

static void BM_ForwardProposed(benchmark::State& state) {
    SeededRng rng(3);
    const Vocabulary vocab = build_vocab({"satu dua tiga empat lima enam tujuh delapan"}, 1);
    ModelConfig config;
    config.embed_dim = static_cast<std::size_t>(state.range(0));
    config.hidden_dim = static_cast<std::size_t>(state.range(0));
    const Model model = make_model(ModelVariant::proposed, vocab, config, rng);
    for (auto _ : state) {
        auto probs = forward(model, "satu dua tiga empat", "lima enam tujuh",
                             "satu tiga lima. Dua empat enam.");
        benchmark::DoNotOptimize(probs);
    }
}
BENCHMARK(BM_ForwardProposed)->Arg(16)->Arg(32)->Arg(64);

static void BM_WilcoxonExact(benchmark::State& state) {
    SeededRng rng(11);
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < state.range(0); ++i) {
        pairs.emplace_back(rng.uniform_real(0, 1), rng.uniform_real(0, 1));
    }
    for (auto _ : state) {
        WilcoxonResult r = wilcoxon_signed_rank(pairs);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_WilcoxonExact)->Arg(8)->Arg(12)->Arg(16)->Arg(20);

BENCHMARK_MAIN();
