#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "yembed/vocab.hpp"

namespace {

void BM_ExtractNgrams(benchmark::State& state) {
  const yembed::SubwordIndexer indexer{3, 6, 2'000'000};
  const std::string word(static_cast<std::size_t>(state.range(0)), 'a');
  for (auto _ : state) {
    auto ids = indexer.ngram_ids(word, 100000);
    benchmark::DoNotOptimize(ids);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ExtractNgrams)->Arg(4)->Arg(8)->Arg(16);

void BM_NegativeSampling(benchmark::State& state) {
  std::vector<std::string> tokens;
  for (int i = 0; i < 10000; ++i) {
    for (int c = 0; c < 1 + i % 13; ++c) tokens.push_back("tok" + std::to_string(i));
  }
  const yembed::Vocabulary vocab = yembed::build_vocab(tokens, 1);
  const yembed::NegativeTable table(vocab);
  yembed::Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(table.sample(rng));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_NegativeSampling);

}  // namespace
