#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "yembed/textnorm.hpp"
#include "yembed/vocab.hpp"

// Intrinsic evaluation: analogy accuracy (3CosAdd over unit vectors),
// word-pair similarity with Pearson and Spearman correlations, and nearest
// neighbors. Also owns the test-set file formats and the derivation of
// undiacritized sets from diacritized ones.

namespace yembed {

// ---------------------------------------------------------------------------
// Test sets

struct AnalogyQuad {
  std::string a, b, c, d;
};

struct AnalogySection {
  std::string name;
  std::vector<AnalogyQuad> quads;
};

// File format: ": section-name" headers followed by "a b c d" lines.
struct AnalogySet {
  std::vector<AnalogySection> sections;
  bool diacritized = true;

  std::size_t total_quads() const;
  static AnalogySet load(std::istream& is);        // throws ParseError
  static AnalogySet load_file(const std::string& path);
  void save(std::ostream& os) const;
  void save_file(const std::string& path) const;
};

struct WordPair {
  std::string word1, word2;
  double score;  // human judgment in [0, 10]
};

// File format: "word1<TAB>word2<TAB>score", optional header line.
struct WordPairSet {
  std::vector<WordPair> pairs;
  static WordPairSet load(std::istream& is);  // throws ParseError
  static WordPairSet load_file(const std::string& path);
};

struct Violation {
  std::size_t line;
  std::string message;
};

// Structural checks for analogy files: empty tokens, wrong arity, duplicate
// quadruples within a section, data before any section header, malformed
// headers. Parse-level failures (bad encoding) throw ParseError instead.
std::vector<Violation> validate_set(std::istream& is);
std::vector<Violation> validate_set_file(const std::string& path);

// Normalizes every token of a diacritized set. Quadruples where two
// previously distinct tokens collapse to the same string are dropped;
// `dropped` (when given) receives the count. Idempotent.
AnalogySet derive_undiacritized_set(const AnalogySet& set, const NormalizationPolicy& policy,
                                    std::int64_t* dropped = nullptr);

// ---------------------------------------------------------------------------
// Models under evaluation

// N-gram bucket matrix kept alongside word vectors so out-of-vocabulary
// words can be composed after a model is reloaded.
struct SubwordExtension {
  SubwordIndexer indexer;
  std::int64_t train_vocab_size = 0;
  std::vector<float> bucket_rows;  // bucket_count x dim
};

// Read-only word vectors keyed by token, the shape every evaluation runs on.
// Unit rows are precomputed (norms accumulated in double, components stored
// as float); rows with zero norm are never candidates.
class EvalModel {
 public:
  EvalModel(std::vector<std::string> tokens, std::vector<float> rows, int dim,
            std::optional<SubwordExtension> subword = std::nullopt);

  int dim() const { return dim_; }
  std::int32_t size() const { return static_cast<std::int32_t>(tokens_.size()); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  bool has_subword() const { return subword_.has_value(); }

  // Exact lookup, then case-folded fallback (lowest index wins) when
  // case_insensitive. Returns -1 if absent.
  std::int32_t lookup(std::string_view word, bool case_insensitive) const;

  std::span<const float> row(std::int32_t index) const;
  std::span<const float> unit_row(std::int32_t index) const;
  double norm(std::int32_t index) const { return norms_[index]; }

  // Composed vector for any representable word: the vocabulary row when
  // present, otherwise the mean of the word's n-gram bucket rows (subword
  // models only). nullopt when the word is not representable.
  std::optional<std::vector<float>> vector(std::string_view word,
                                           bool case_insensitive = true) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::int32_t> index_;
  std::unordered_map<std::string, std::int32_t> folded_index_;
  std::vector<float> rows_;
  std::vector<float> unit_rows_;
  std::vector<double> norms_;
  int dim_;
  std::optional<SubwordExtension> subword_;
};

// ---------------------------------------------------------------------------
// Metrics

// u.v / (|u||v|), accumulated in double. Throws ZeroVector.
double cosine(std::span<const float> u, std::span<const float> v);
double cosine(std::span<const double> u, std::span<const double> v);

// Pearson correlation; throws DegenerateInput when either side has zero
// variance, and TooFewPairs for fewer than two points.
double pearson(std::span<const double> xs, std::span<const double> ys);

// Average ranks (ties get the mean of their rank range), 1-based.
std::vector<double> average_ranks(std::span<const double> values);

// Spearman's rho: Pearson of average-ranked data. Same errors as pearson.
double spearman(std::span<const double> xs, std::span<const double> ys);

struct EvalOptions {
  bool case_insensitive = true;
  std::int32_t restrict_vocab = 0;  // 0 = full vocabulary
};

struct SectionResult {
  std::int64_t evaluated = 0;
  std::int64_t correct = 0;
  std::int64_t skipped = 0;  // quadruples with an OOV word
  double accuracy_pct() const;
};

struct AnalogyResult {
  std::map<std::string, SectionResult> sections;
  SectionResult overall;  // micro-average
};

// 3CosAdd: for each quadruple with all four words resolvable, predict
// argmax over the (restricted) vocabulary of unit_row . (b - a + c), with
// the resolved a, b, c excluded as candidates; correct iff the prediction
// matches d (case-insensitive by default). OOV quadruples are skipped and
// counted. Throws NoEvaluableQuadruples when everything is skipped.
AnalogyResult analogy_accuracy(const EvalModel& model, const AnalogySet& set,
                               const EvalOptions& options = {});

struct WordSimResult {
  double pearson_pct = 0.0;   // Pearson x 100
  double spearman_pct = 0.0;  // Spearman x 100
  std::int64_t evaluated = 0;
  std::int64_t skipped = 0;
  double oov_ratio() const;
};

// Model cosine vs human score. Pairs with an unrepresentable word are
// skipped (word-level models) or composed from n-grams (subword models).
// Throws TooFewPairs when fewer than two pairs are evaluable.
WordSimResult wordpair_eval(const EvalModel& model, const WordPairSet& set,
                            const EvalOptions& options = {});

// Top-k vocabulary tokens by cosine to the word's vector, query excluded,
// ties broken lexicographically. k is clamped to vocab size - 1.
std::vector<std::pair<std::string, double>> nearest_neighbors(const EvalModel& model,
                                                              std::string_view word, std::int64_t k,
                                                              const EvalOptions& options = {});

// ---------------------------------------------------------------------------
// Reports

struct EvalReport {
  std::int64_t vocab_size = 0;
  std::optional<AnalogyResult> analogy;
  std::optional<WordSimResult> wordsim;
};

EvalReport evaluate(const EvalModel& model, const AnalogySet* analogy_set,
                    const WordPairSet* wordpair_set, const EvalOptions& options = {});

// Arithmetic mean of every scalar metric across runs (counts averaged as
// doubles). Runs must all carry the same suites and section names.
struct AveragedMetrics {
  std::int64_t vocab_size = 0;
  std::optional<double> analogy_pct;
  std::map<std::string, double> section_pct;
  double analogy_evaluated = 0, analogy_skipped = 0;
  std::optional<double> wordsim_pearson_pct;
  std::optional<double> wordsim_spearman_pct;
  double wordsim_evaluated = 0, wordsim_skipped = 0;
};

AveragedMetrics average_metrics(std::span<const EvalReport> runs);

// Machine-readable "key: value" lines mirroring the vocab / analogy /
// wordsim / spearman report columns.
void write_report_kv(std::ostream& os, const EvalReport& report);
void write_report_kv(std::ostream& os, const AveragedMetrics& metrics);

}  // namespace yembed
