#include <benchmark/benchmark.h>

#include <string>

#include "yembed/textnorm.hpp"

namespace {

const std::string kLine =
    "Awo osan ati brown inu isujo Júpítérì wa lati iwusoke awon adapo ti won unyi awo wọn "
    "pada nigba ti wọn ba dojuko imọle [[ultraviolet]] lati ọdọ Orun.";

void BM_NormalizeLine(benchmark::State& state) {
  const yembed::NormalizationPolicy policy{true, true, true};
  for (auto _ : state) {
    std::string out = yembed::normalize_text(kLine, policy);
    benchmark::DoNotOptimize(out);
  }
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(kLine.size()));
}
BENCHMARK(BM_NormalizeLine);

void BM_StripMarkup(benchmark::State& state) {
  for (auto _ : state) {
    std::string out = yembed::strip_markup(kLine);
    benchmark::DoNotOptimize(out);
  }
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(kLine.size()));
}
BENCHMARK(BM_StripMarkup);

}  // namespace
