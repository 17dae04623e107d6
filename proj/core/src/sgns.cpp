#include "yembed/sgns.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "yembed/corpus.hpp"

namespace yembed {

void TrainConfig::validate() const {
  if (dim < 1) throw UsageError("dim must be >= 1");
  if (window < 1) throw UsageError("window must be >= 1");
  if (negatives < 1) throw UsageError("negatives must be >= 1");
  if (epochs < 0) throw UsageError("epochs must be >= 0");
  if (!(lr_start >= lr_end) || !(lr_end > 0)) throw UsageError("need lr_start >= lr_end > 0");
  if (workers < 1) throw UsageError("workers must be >= 1");
  if (min_n < 1 || max_n < min_n) throw UsageError("need 1 <= min_n <= max_n");
  if (bucket_count < 1) throw UsageError("bucket_count must be >= 1");
}

const std::array<double, Sigmoid::kTableSize>& Sigmoid::table() {
  static const std::array<double, kTableSize> t = [] {
    std::array<double, kTableSize> values{};
    for (int i = 0; i < kTableSize; ++i) {
      const double x = -kMaxArg + i * (2.0 * kMaxArg / kTableSize);
      values[i] = exact(x);
    }
    return values;
  }();
  return t;
}

EncodedCorpus EncodedCorpus::from_lines(std::span<const std::string> lines,
                                        const Vocabulary& vocab) {
  EncodedCorpus corpus;
  corpus.line_starts.push_back(0);
  for (const std::string& line : lines) {
    for (const std::string& token : tokenize(line)) {
      const std::int32_t id = vocab.index_of(token);
      if (id >= 0) corpus.tokens.push_back(id);
    }
    corpus.line_starts.push_back(corpus.token_count());
  }
  return corpus;
}

EncodedCorpus EncodedCorpus::from_file(const std::string& path, const Vocabulary& vocab) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open corpus file: " + path);
  EncodedCorpus corpus;
  corpus.line_starts.push_back(0);
  std::string line;
  while (std::getline(is, line)) {
    for (const std::string& token : tokenize(line)) {
      const std::int32_t id = vocab.index_of(token);
      if (id >= 0) corpus.tokens.push_back(id);
    }
    corpus.line_starts.push_back(corpus.token_count());
  }
  return corpus;
}

EmbeddingModel::EmbeddingModel(Mode mode, int dim, Vocabulary vocab, const SubwordIndexer& indexer,
                               std::uint64_t seed)
    : mode_(mode), dim_(dim), vocab_(std::move(vocab)), indexer_(indexer) {
  input_rows_ = vocab_.size();
  if (mode_ == Mode::subword) input_rows_ += indexer_.bucket_count;
  input_.resize(static_cast<std::size_t>(input_rows_) * dim_);
  output_.assign(static_cast<std::size_t>(vocab_.size()) * dim_, 0.0f);
  Rng rng(seed);
  const double bound = 1.0 / dim_;
  for (float& v : input_) v = static_cast<float>((rng.real() * 2.0 - 1.0) * bound);
}

std::span<float> EmbeddingModel::input_row(std::int64_t id) {
  return {input_.data() + id * dim_, static_cast<std::size_t>(dim_)};
}
std::span<const float> EmbeddingModel::input_row(std::int64_t id) const {
  return {input_.data() + id * dim_, static_cast<std::size_t>(dim_)};
}
std::span<float> EmbeddingModel::output_row(std::int32_t index) {
  return {output_.data() + static_cast<std::int64_t>(index) * dim_, static_cast<std::size_t>(dim_)};
}
std::span<const float> EmbeddingModel::output_row(std::int32_t index) const {
  return {output_.data() + static_cast<std::int64_t>(index) * dim_, static_cast<std::size_t>(dim_)};
}

std::vector<float> EmbeddingModel::word_vector(std::string_view word) const {
  if (word.empty()) throw DataError("empty word");
  const std::int32_t index = vocab_.index_of(word);
  if (mode_ == Mode::word) {
    if (index < 0) throw OutOfVocabulary(std::string(word));
    auto row = input_row(index);
    return {row.begin(), row.end()};
  }
  std::vector<std::int64_t> ids = indexer_.ngram_ids(word, vocab_.size());
  if (index >= 0) ids.insert(ids.begin(), index);
  // Double accumulation keeps the mean exact when every row is identical.
  std::vector<double> sum(dim_, 0.0);
  for (std::int64_t id : ids) {
    auto row = input_row(id);
    for (int j = 0; j < dim_; ++j) sum[j] += row[j];
  }
  std::vector<float> mean(dim_);
  for (int j = 0; j < dim_; ++j) {
    mean[j] = static_cast<float>(sum[j] / static_cast<double>(ids.size()));
  }
  return mean;
}

bool EmbeddingModel::all_finite() const {
  auto finite = [](const std::vector<float>& values) {
    return std::all_of(values.begin(), values.end(), [](float v) { return std::isfinite(v); });
  };
  return finite(input_) && finite(output_);
}

EvalModel EmbeddingModel::to_eval_model() const {
  std::vector<std::string> tokens;
  tokens.reserve(vocab_.size());
  for (std::int32_t i = 0; i < vocab_.size(); ++i) tokens.push_back(vocab_.token(i));

  std::vector<float> rows(static_cast<std::size_t>(vocab_.size()) * dim_);
  for (std::int32_t i = 0; i < vocab_.size(); ++i) {
    std::vector<float> v = word_vector(vocab_.token(i));
    std::copy(v.begin(), v.end(), rows.begin() + static_cast<std::size_t>(i) * dim_);
  }

  std::optional<SubwordExtension> extension;
  if (mode_ == Mode::subword) {
    SubwordExtension ext;
    ext.indexer = indexer_;
    ext.train_vocab_size = vocab_.size();
    ext.bucket_rows.assign(input_.begin() + static_cast<std::size_t>(vocab_.size()) * dim_,
                           input_.end());
    extension = std::move(ext);
  }
  return EvalModel(std::move(tokens), std::move(rows), dim_, std::move(extension));
}

namespace {

struct WorkerError {
  std::exception_ptr error;
  std::mutex mutex;

  void capture() {
    std::lock_guard lock(mutex);
    if (!error) error = std::current_exception();
  }
};

}  // namespace

EmbeddingModel train(const EncodedCorpus& corpus, const Vocabulary& vocab,
                     const TrainConfig& config, TrainStats* stats) {
  config.validate();
  if (corpus.token_count() == 0) throw EmptyCorpus("corpus has no in-vocabulary tokens");

  SubwordIndexer indexer{config.min_n, config.max_n, config.bucket_count};
  EmbeddingModel model(config.mode, config.dim, vocab, indexer, config.seed);
  const Sigmoid sigmoid(config.exact_sigmoid ? Sigmoid::Kind::exact : Sigmoid::Kind::table);
  const NegativeTable negative_table(vocab, 0.75);

  // Per-token keep probabilities and (in subword mode) the input-row id list
  // for every vocabulary word, computed once and shared read-only.
  std::vector<double> keep_prob(vocab.size(), 1.0);
  if (config.subsample_t > 0) {
    for (std::int32_t i = 0; i < vocab.size(); ++i) {
      keep_prob[i] = keep_probability(vocab.count(i), vocab.total_count(), config.subsample_t);
    }
  }
  std::vector<std::vector<std::int64_t>> row_ids;
  if (config.mode == Mode::subword) {
    row_ids.resize(vocab.size());
    for (std::int32_t i = 0; i < vocab.size(); ++i) {
      row_ids[i] = indexer.ngram_ids(vocab.token(i), vocab.size());
      row_ids[i].insert(row_ids[i].begin(), i);
    }
  }

  const std::int64_t total_tokens = corpus.token_count();
  const double total_work =
      static_cast<double>(config.epochs) * static_cast<double>(total_tokens) + 1.0;
  std::atomic<std::int64_t> processed{0};

  const int workers = static_cast<int>(
      std::min<std::int64_t>(config.workers, std::max<std::int64_t>(1, corpus.line_count())));
  std::vector<std::vector<double>> epoch_loss(workers, std::vector<double>(config.epochs, 0.0));
  std::vector<std::vector<std::int64_t>> epoch_updates(workers,
                                                       std::vector<std::int64_t>(config.epochs, 0));
  WorkerError failure;

  auto worker_main = [&](int worker_id) {
    try {
      Rng rng(config.seed + 1 + static_cast<std::uint64_t>(worker_id));
      const std::int64_t lines = corpus.line_count();
      const std::int64_t begin_line = lines * worker_id / workers;
      const std::int64_t end_line = lines * (worker_id + 1) / workers;

      std::vector<std::int32_t> kept;
      std::vector<float> hidden(config.dim);
      std::vector<float> grad(config.dim);
      std::vector<float*> negatives;
      negatives.reserve(config.negatives);

      for (int epoch = 0; epoch < config.epochs; ++epoch) {
        for (std::int64_t line = begin_line; line < end_line; ++line) {
          const std::int64_t line_begin = corpus.line_starts[line];
          const std::int64_t line_end = corpus.line_starts[line + 1];
          if (line_begin == line_end) continue;

          const double progress =
              std::min(1.0, static_cast<double>(processed.load(std::memory_order_relaxed)) /
                                total_work);
          const double lr = config.lr_start - (config.lr_start - config.lr_end) * progress;

          kept.clear();
          for (std::int64_t i = line_begin; i < line_end; ++i) {
            const std::int32_t id = corpus.tokens[i];
            if (config.subsample_t > 0 && rng.real() >= keep_prob[id]) continue;
            kept.push_back(id);
          }

          for (std::size_t pos = 0; pos < kept.size(); ++pos) {
            const std::int32_t center = kept[pos];
            const auto window = static_cast<std::ptrdiff_t>(1 + rng.below(config.window));
            const auto spos = static_cast<std::ptrdiff_t>(pos);
            for (std::ptrdiff_t off = -window; off <= window; ++off) {
              if (off == 0) continue;
              const std::ptrdiff_t cpos = spos + off;
              if (cpos < 0 || cpos >= static_cast<std::ptrdiff_t>(kept.size())) continue;
              const std::int32_t context = kept[cpos];

              negatives.clear();
              for (int k = 0; k < config.negatives; ++k) {
                for (int attempt = 0; attempt < 16; ++attempt) {
                  const std::int32_t sampled = negative_table.sample(rng);
                  if (sampled != context) {
                    negatives.push_back(model.output_row(sampled).data());
                    break;
                  }
                }
              }

              std::span<float> center_vec;
              if (config.mode == Mode::word) {
                center_vec = model.input_row(center);
              } else {
                const std::vector<std::int64_t>& ids = row_ids[center];
                std::fill(hidden.begin(), hidden.end(), 0.0f);
                for (std::int64_t id : ids) {
                  auto row = model.input_row(id);
                  for (int j = 0; j < config.dim; ++j) hidden[j] += row[j];
                }
                const float inv = 1.0f / static_cast<float>(ids.size());
                for (float& v : hidden) v *= inv;
                center_vec = hidden;
              }

              const double loss =
                  train_step<float>(center_vec, model.output_row(context),
                                    std::span<float* const>(negatives), lr, sigmoid, grad);
              if (!std::isfinite(loss)) {
                throw NonFiniteLoss("non-finite loss at epoch " + std::to_string(epoch) +
                                    ", line " + std::to_string(line) + ", center token '" +
                                    vocab.token(center) + "'");
              }
              epoch_loss[worker_id][epoch] += loss;
              ++epoch_updates[worker_id][epoch];

              if (config.mode == Mode::subword) {
                // Mean composition: applying the full hidden-vector update to
                // every contributing row moves the composed vector by exactly
                // -lr * grad.
                for (std::int64_t id : row_ids[center]) {
                  auto row = model.input_row(id);
                  for (int j = 0; j < config.dim; ++j) row[j] -= static_cast<float>(lr) * grad[j];
                }
              }
            }
          }
          processed.fetch_add(line_end - line_begin, std::memory_order_relaxed);
        }
      }
    } catch (...) {
      failure.capture();
    }
  };

  if (workers == 1) {
    worker_main(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) threads.emplace_back(worker_main, w);
    for (std::thread& t : threads) t.join();
  }
  if (failure.error) std::rethrow_exception(failure.error);

  if (!model.all_finite()) throw NonFiniteLoss("non-finite parameter after training");

  if (stats) {
    stats->epoch_mean_loss.assign(config.epochs, 0.0);
    stats->updates = 0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
      double loss = 0.0;
      std::int64_t updates = 0;
      for (int w = 0; w < workers; ++w) {
        loss += epoch_loss[w][epoch];
        updates += epoch_updates[w][epoch];
      }
      stats->epoch_mean_loss[epoch] = updates > 0 ? loss / static_cast<double>(updates) : 0.0;
      stats->updates += updates;
    }
  }
  return model;
}

ExperimentResult run_experiment(const EncodedCorpus& corpus, const Vocabulary& vocab,
                                const TrainConfig& config, const AnalogySet* analogy_set,
                                const WordPairSet* wordpair_set, int repeats,
                                const EvalOptions& options) {
  if (repeats < 1) throw UsageError("repeats must be >= 1");
  ExperimentResult result;
  for (int r = 0; r < repeats; ++r) {
    TrainConfig run_config = config;
    run_config.seed = config.seed + static_cast<std::uint64_t>(r);
    EmbeddingModel model = train(corpus, vocab, run_config);
    EvalModel eval_model = model.to_eval_model();
    result.runs.push_back(evaluate(eval_model, analogy_set, wordpair_set, options));
  }
  result.mean = average_metrics(result.runs);
  return result;
}

}  // namespace yembed
