#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "yembed/sgns.hpp"

namespace {

void BM_TrainStep(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  yembed::Rng rng(1);
  std::vector<float> center(dim), context(dim), grad(dim);
  std::vector<std::vector<float>> negatives(5, std::vector<float>(dim));
  for (float& v : center) v = static_cast<float>(rng.real() - 0.5);
  for (float& v : context) v = static_cast<float>(rng.real() - 0.5);
  for (auto& n : negatives) {
    for (float& v : n) v = static_cast<float>(rng.real() - 0.5);
  }
  std::vector<float*> neg_ptrs;
  for (auto& n : negatives) neg_ptrs.push_back(n.data());
  const yembed::Sigmoid sigmoid(yembed::Sigmoid::Kind::table);
  for (auto _ : state) {
    const double loss = yembed::train_step<float>(
        center, context, std::span<float* const>(neg_ptrs), 1e-6, sigmoid, grad);
    benchmark::DoNotOptimize(loss);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_TrainStep)->Arg(100)->Arg(300);

void BM_TrainEpochWordMode(benchmark::State& state) {
  yembed::Rng gen(3);
  std::vector<std::string> lines;
  std::vector<std::string> tokens;
  for (int i = 0; i < 500; ++i) {
    std::string line;
    for (int j = 0; j < 12; ++j) {
      const std::string token = "w" + std::to_string(gen.below(200));
      if (j > 0) line += ' ';
      line += token;
      tokens.push_back(token);
    }
    lines.push_back(line);
  }
  const yembed::Vocabulary vocab = yembed::build_vocab(tokens, 1);
  const yembed::EncodedCorpus corpus = yembed::EncodedCorpus::from_lines(lines, vocab);
  yembed::TrainConfig config;
  config.dim = 50;
  config.epochs = 1;
  config.subsample_t = 0;
  for (auto _ : state) {
    auto model = yembed::train(corpus, vocab, config);
    benchmark::DoNotOptimize(model);
  }
  state.SetItemsProcessed(state.iterations() * corpus.token_count());
}
BENCHMARK(BM_TrainEpochWordMode)->Unit(benchmark::kMillisecond);

}  // namespace
