#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "yembed/evalsuite.hpp"
#include "yembed/vocab.hpp"

// Skipgram with negative sampling, word-level and subword-level, trained by
// asynchronous SGD over shared matrices (hogwild style).

namespace yembed {

enum class Mode { word, subword };

struct TrainConfig {
  int dim = 300;
  int window = 4;     // per position, actual window is uniform in [1, window]
  int negatives = 5;  // negative samples per positive
  int epochs = 5;
  double lr_start = 0.05;
  double lr_end = 0.0001;     // linear decay endpoint
  double subsample_t = 1e-4;  // <= 0 disables subsampling
  Mode mode = Mode::word;
  std::uint64_t seed = 1;
  int workers = 1;
  int min_n = 3;
  int max_n = 6;
  std::int64_t bucket_count = 2'000'000;
  bool exact_sigmoid = false;  // table lookup by default

  void validate() const;  // throws UsageError on out-of-range values
};

// Sigmoid used by the loss: 512-entry table over [-8, 8], clamped to the
// table bounds outside, or exact math for tests.
class Sigmoid {
 public:
  enum class Kind { table, exact };
  static constexpr int kTableSize = 512;
  static constexpr double kMaxArg = 8.0;

  explicit Sigmoid(Kind kind = Kind::table) : kind_(kind) {}

  static double exact(double x) { return 1.0 / (1.0 + std::exp(-x)); }

  double operator()(double x) const {
    if (kind_ == Kind::exact) return exact(x);
    if (std::isnan(x)) return x;  // propagate so the trainer can abort
    const auto& t = table();
    if (x <= -kMaxArg) return t.front();
    if (x >= kMaxArg) return t.back();
    const int i = static_cast<int>((x + kMaxArg) * (kTableSize / (2.0 * kMaxArg)));
    return t[i < kTableSize ? i : kTableSize - 1];
  }

  Kind kind() const { return kind_; }

 private:
  static const std::array<double, kTableSize>& table();
  Kind kind_;
};

// One SGNS update: loss L = -log s(u.v) - sum_i log s(-n_i.v) for center v,
// context u and negatives n_i. Gradients are taken at the incoming values;
// context and negatives are updated in place, grad receives dL/dv, and the
// center moves by -lr * grad. Returns the loss.
template <std::floating_point S>
double train_step(std::span<S> center, std::span<S> context, std::span<S* const> negatives,
                  double lr, const Sigmoid& sig, std::span<S> grad) {
  const std::size_t dim = center.size();
  for (std::size_t j = 0; j < dim; ++j) grad[j] = S(0);

  double dot = 0.0;
  for (std::size_t j = 0; j < dim; ++j) dot += static_cast<double>(context[j]) * center[j];
  const double s_pos = sig(dot);
  double loss = -std::log(s_pos);
  const double g_pos = s_pos - 1.0;  // dL/d(u.v)
  for (std::size_t j = 0; j < dim; ++j) {
    grad[j] += static_cast<S>(g_pos) * context[j];
    context[j] -= static_cast<S>(lr * g_pos) * center[j];
  }

  for (S* negative : negatives) {
    double ndot = 0.0;
    for (std::size_t j = 0; j < dim; ++j) ndot += static_cast<double>(negative[j]) * center[j];
    const double s_neg = sig(ndot);
    loss += -std::log(1.0 - s_neg);  // log s(-x) = log(1 - s(x))
    for (std::size_t j = 0; j < dim; ++j) {
      grad[j] += static_cast<S>(s_neg) * negative[j];
      negative[j] -= static_cast<S>(lr * s_neg) * center[j];
    }
  }

  for (std::size_t j = 0; j < dim; ++j) center[j] -= static_cast<S>(lr) * grad[j];
  return loss;
}

// Vocabulary-mapped corpus: in-vocabulary token ids with line boundaries
// (training windows never cross lines).
struct EncodedCorpus {
  std::vector<std::int32_t> tokens;
  std::vector<std::int64_t> line_starts;  // size line_count() + 1

  std::int64_t token_count() const { return static_cast<std::int64_t>(tokens.size()); }
  std::int64_t line_count() const { return static_cast<std::int64_t>(line_starts.size()) - 1; }

  static EncodedCorpus from_lines(std::span<const std::string> lines, const Vocabulary& vocab);
  static EncodedCorpus from_file(const std::string& path, const Vocabulary& vocab);
};

class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  EmbeddingModel(Mode mode, int dim, Vocabulary vocab, const SubwordIndexer& indexer,
                 std::uint64_t seed);

  Mode mode() const { return mode_; }
  int dim() const { return dim_; }
  const Vocabulary& vocab() const { return vocab_; }
  const SubwordIndexer& indexer() const { return indexer_; }
  std::int64_t input_rows() const { return input_rows_; }

  std::span<float> input_row(std::int64_t id);
  std::span<const float> input_row(std::int64_t id) const;
  std::span<float> output_row(std::int32_t index);
  std::span<const float> output_row(std::int32_t index) const;

  // Word mode: the word's input row (throws OutOfVocabulary when absent).
  // Subword mode: mean of the word's own row (when in vocabulary) and all
  // its n-gram rows; OOV words use the n-gram rows alone.
  std::vector<float> word_vector(std::string_view word) const;

  bool all_finite() const;

  // Composed per-token vectors plus the n-gram extension in subword mode.
  EvalModel to_eval_model() const;

 private:
  friend EmbeddingModel train(const EncodedCorpus&, const Vocabulary&, const TrainConfig&,
                              struct TrainStats*);
  Mode mode_ = Mode::word;
  int dim_ = 0;
  Vocabulary vocab_;
  SubwordIndexer indexer_;
  std::int64_t input_rows_ = 0;
  // Shared by training workers without locks: races lose updates but each
  // element is a naturally aligned 32-bit scalar, so no torn values wider
  // than one float are observable on the supported targets.
  std::vector<float> input_;
  std::vector<float> output_;
};

struct TrainStats {
  std::vector<double> epoch_mean_loss;
  std::int64_t updates = 0;  // positive updates performed
};

// Trains a model from scratch. Throws EmptyCorpus when the corpus has no
// tokens and NonFiniteLoss if any parameter or step loss stops being finite.
// Single-worker runs with a fixed seed are bit-reproducible.
EmbeddingModel train(const EncodedCorpus& corpus, const Vocabulary& vocab,
                     const TrainConfig& config, TrainStats* stats = nullptr);

// ---------------------------------------------------------------------------
// Model files

// word2vec text format: "vocab_size dim" header, then one "token v1 .. vdim"
// line per word with the composed vector. Values are printed with enough
// digits to round-trip float exactly.
void save_word2vec_text(const EmbeddingModel& model, const std::string& path);

// Companion file holding the n-gram bucket matrix of a subword model:
// header "bucket_count dim min_n max_n vocab_size", then one line of dim
// values per bucket row.
void save_ngram_matrix(const EmbeddingModel& model, const std::string& path);

// Loads a word2vec text file (ours or an external one) for evaluation; the
// optional companion restores OOV composition. Throws ParseError / DataError
// on malformed files or a dim mismatch between the two.
EvalModel load_word2vec_text(const std::string& path, const std::string& ngrams_path = "");

// ---------------------------------------------------------------------------
// Experiment protocol

struct ExperimentResult {
  std::vector<EvalReport> runs;
  AveragedMetrics mean;
};

// Trains `repeats` models (seed = config.seed + repeat index), evaluates
// each, and averages every scalar metric.
ExperimentResult run_experiment(const EncodedCorpus& corpus, const Vocabulary& vocab,
                                const TrainConfig& config, const AnalogySet* analogy_set,
                                const WordPairSet* wordpair_set, int repeats = 2,
                                const EvalOptions& options = {});

}  // namespace yembed
