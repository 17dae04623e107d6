#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "yembed/corpus.hpp"
#include "yembed/sgns.hpp"
#include "yembed/textnorm.hpp"

// Pipeline orchestration behind the CLI subcommands. Every stage is a pure
// function of its input files and flags, so a fixed seed reruns to identical
// outputs in deterministic (single worker) mode.

namespace yembed {

// Flat key=value configuration; CLI flags override file values.
struct PipelineConfig {
  std::string raw_corpus;
  std::string cleaned_corpus;
  std::string normalized_corpus;
  std::string model_dir;
  std::string report_dir;
  std::string analogy_set;
  std::string wordpair_set;

  NormalizationPolicy policy{true, true, true};
  double filter_threshold = 0.25;
  bool lowercase = false;

  std::int64_t min_count = 5;
  TrainConfig train;
  int repeats = 2;

  bool case_insensitive = true;
  std::int32_t restrict_vocab = 0;
  std::string eval_sets = "matched";  // "matched" or "diacritized"

  // Parses "key=value" lines; '#' starts a comment. Unknown keys and
  // malformed values raise UsageError.
  static PipelineConfig load_file(const std::string& path);
  void set(const std::string& key, const std::string& value);

  EvalOptions eval_options() const { return {case_insensitive, restrict_vocab}; }
};

// Streams stdin-style line input through normalize_text. Encoding errors are
// rethrown as ParseError carrying the line number.
void normalize_stream(std::istream& in, std::ostream& out, const NormalizationPolicy& policy);

struct TrainFileResult {
  std::int64_t vocab_size = 0;
  std::int64_t corpus_tokens = 0;  // in-vocabulary tokens
  TrainStats stats;
};

// build_vocab + train + save. Writes the model to `model_out`, optionally
// the vocabulary ("token<TAB>count" lines) and the n-gram matrix.
TrainFileResult train_file(const std::string& corpus_path, const TrainConfig& config,
                           std::int64_t min_count, const std::string& model_out,
                           const std::string& vocab_out = "", const std::string& ngrams_out = "");

// Loads a model (plus optional n-gram companion) and evaluates it against
// the given set files; empty paths skip a suite.
EvalReport eval_files(const std::string& model_path, const std::string& ngrams_path,
                      const std::string& analogy_path, const std::string& wordpair_path,
                      const EvalOptions& options);

struct ExperimentLeg {
  std::string corpus_name;  // "diacritized" or "undiacritized"
  Mode mode = Mode::word;
  std::int64_t vocab_size = 0;
  std::int64_t corpus_tokens = 0;
  AveragedMetrics mean;
  std::vector<EvalReport> runs;
};

struct ExperimentSummary {
  std::vector<ExperimentLeg> legs;  // one per (corpus variant, mode)
  std::int64_t diacritized_vocab = 0;
  std::int64_t undiacritized_vocab = 0;
  std::int64_t diacritized_tokens = 0;
  std::int64_t undiacritized_tokens = 0;
  std::int64_t analogy_quads_dropped = 0;   // collapsed during derivation
  std::int64_t wordpairs_dropped = 0;
};

// Full protocol: clean (when raw_corpus is set), fork into diacritized and
// normalized corpora, train word and subword embeddings on both, evaluate
// each leg `repeats` times and average. Progress goes to `log`.
ExperimentSummary run_full_experiment(const PipelineConfig& config, std::ostream& log);

// Comparative table plus per-leg machine-readable blocks.
void write_experiment_report(std::ostream& os, const ExperimentSummary& summary);

}  // namespace yembed
