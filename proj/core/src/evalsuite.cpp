#include "yembed/evalsuite.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "yembed/unicode.hpp"

namespace yembed {

// ---------------------------------------------------------------------------
// Test-set files

namespace {

std::vector<std::string> split_tokens(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.emplace_back(line.substr(start, i - start));
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

void check_encoding(std::string_view line, std::size_t line_number) {
  try {
    utf8_decode(line);
  } catch (const InvalidEncoding& e) {
    throw ParseError(line_number, e.what());
  }
}

}  // namespace

std::size_t AnalogySet::total_quads() const {
  std::size_t n = 0;
  for (const AnalogySection& section : sections) n += section.quads.size();
  return n;
}

AnalogySet AnalogySet::load(std::istream& is) {
  AnalogySet set;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(is, line)) {
    ++line_number;
    check_encoding(line, line_number);
    std::string_view view = trim(line);
    if (view.empty()) continue;
    if (view.front() == ':') {
      std::string_view name = trim(view.substr(1));
      if (name.empty()) throw ParseError(line_number, "section header with no name");
      set.sections.push_back({std::string(name), {}});
      continue;
    }
    if (set.sections.empty()) throw ParseError(line_number, "data line before any section header");
    std::vector<std::string> tokens = split_tokens(view);
    if (tokens.size() != 4) {
      throw ParseError(line_number,
                       "expected 4 tokens, got " + std::to_string(tokens.size()));
    }
    set.sections.back().quads.push_back(
        {std::move(tokens[0]), std::move(tokens[1]), std::move(tokens[2]), std::move(tokens[3])});
  }
  if (set.total_quads() == 0) throw ParseError(line_number, "no quadruples in file");
  return set;
}

AnalogySet AnalogySet::load_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open analogy file: " + path);
  return load(is);
}

void AnalogySet::save(std::ostream& os) const {
  for (const AnalogySection& section : sections) {
    os << ": " << section.name << '\n';
    for (const AnalogyQuad& quad : section.quads) {
      os << quad.a << ' ' << quad.b << ' ' << quad.c << ' ' << quad.d << '\n';
    }
  }
}

void AnalogySet::save_file(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write analogy file: " + path);
  save(os);
}

WordPairSet WordPairSet::load(std::istream& is) {
  WordPairSet set;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(is, line)) {
    ++line_number;
    check_encoding(line, line_number);
    std::string_view view = trim(line);
    if (view.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= view.size(); ++i) {
      if (i == view.size() || view[i] == '\t') {
        fields.emplace_back(trim(view.substr(start, i - start)));
        start = i + 1;
      }
    }
    if (fields.size() != 3) throw ParseError(line_number, "expected word1<TAB>word2<TAB>score");
    double score = 0.0;
    auto [ptr, ec] =
        std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), score);
    if (ec != std::errc{} || ptr != fields[2].data() + fields[2].size()) {
      if (line_number == 1) continue;  // header line
      throw ParseError(line_number, "bad score '" + fields[2] + "'");
    }
    if (score < 0.0 || score > 10.0) throw ParseError(line_number, "score outside [0, 10]");
    if (fields[0].empty() || fields[1].empty()) throw ParseError(line_number, "empty word");
    auto key = std::minmax(fields[0], fields[1]);
    if (!seen.insert({key.first, key.second}).second) {
      throw ParseError(line_number, "duplicate pair " + fields[0] + " / " + fields[1]);
    }
    set.pairs.push_back({std::move(fields[0]), std::move(fields[1]), score});
  }
  if (set.pairs.empty()) throw ParseError(line_number, "no pairs in file");
  return set;
}

WordPairSet WordPairSet::load_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open word-pair file: " + path);
  return load(is);
}

std::vector<Violation> validate_set(std::istream& is) {
  std::vector<Violation> violations;
  std::set<std::string> section_names;
  std::set<std::string> quads_in_section;
  bool in_section = false;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(is, line)) {
    ++line_number;
    check_encoding(line, line_number);
    std::string_view view = trim(line);
    if (view.empty()) continue;
    if (view.front() == ':') {
      std::string name(trim(view.substr(1)));
      if (name.empty()) {
        violations.push_back({line_number, "section header with no name"});
      } else if (!section_names.insert(name).second) {
        violations.push_back({line_number, "duplicate section name '" + name + "'"});
      }
      in_section = true;
      quads_in_section.clear();
      continue;
    }
    if (!in_section) {
      violations.push_back({line_number, "data line before any section header"});
      continue;
    }
    std::vector<std::string> tokens = split_tokens(view);
    if (tokens.size() != 4) {
      violations.push_back(
          {line_number, "expected 4 tokens, got " + std::to_string(tokens.size())});
      continue;
    }
    std::string key = tokens[0] + ' ' + tokens[1] + ' ' + tokens[2] + ' ' + tokens[3];
    if (!quads_in_section.insert(key).second) {
      violations.push_back({line_number, "duplicate quadruple '" + key + "'"});
    }
  }
  return violations;
}

std::vector<Violation> validate_set_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open analogy file: " + path);
  return validate_set(is);
}

AnalogySet derive_undiacritized_set(const AnalogySet& set, const NormalizationPolicy& policy,
                                    std::int64_t* dropped) {
  AnalogySet derived;
  derived.diacritized = false;
  std::int64_t drop_count = 0;
  for (const AnalogySection& section : set.sections) {
    AnalogySection out{section.name, {}};
    for (const AnalogyQuad& quad : section.quads) {
      const std::array<const std::string*, 4> before = {&quad.a, &quad.b, &quad.c, &quad.d};
      std::array<std::string, 4> after;
      for (int i = 0; i < 4; ++i) after[i] = normalize_text(*before[i], policy);
      bool degenerate = false;
      for (int i = 0; i < 4 && !degenerate; ++i) {
        for (int j = i + 1; j < 4; ++j) {
          if (*before[i] != *before[j] && after[i] == after[j]) {
            degenerate = true;
            break;
          }
        }
      }
      if (degenerate) {
        ++drop_count;
        continue;
      }
      out.quads.push_back({std::move(after[0]), std::move(after[1]), std::move(after[2]),
                           std::move(after[3])});
    }
    derived.sections.push_back(std::move(out));
  }
  if (dropped) *dropped = drop_count;
  return derived;
}

// ---------------------------------------------------------------------------
// EvalModel

EvalModel::EvalModel(std::vector<std::string> tokens, std::vector<float> rows, int dim,
                     std::optional<SubwordExtension> subword)
    : tokens_(std::move(tokens)), rows_(std::move(rows)), dim_(dim), subword_(std::move(subword)) {
  if (dim_ < 1) throw DataError("model dim must be >= 1");
  if (rows_.size() != tokens_.size() * static_cast<std::size_t>(dim_)) {
    throw DataError("row matrix does not match token count");
  }
  index_.reserve(tokens_.size());
  folded_index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    index_.emplace(tokens_[i], static_cast<std::int32_t>(i));  // first occurrence wins
    folded_index_.emplace(lowercase_utf8(tokens_[i]), static_cast<std::int32_t>(i));
  }
  norms_.resize(tokens_.size());
  unit_rows_.resize(rows_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    const float* row = rows_.data() + i * dim_;
    double sq = 0.0;
    for (int j = 0; j < dim_; ++j) sq += static_cast<double>(row[j]) * row[j];
    const double norm = std::sqrt(sq);
    norms_[i] = norm;
    float* unit = unit_rows_.data() + i * dim_;
    for (int j = 0; j < dim_; ++j) {
      unit[j] = norm > 0.0 ? static_cast<float>(row[j] / norm) : 0.0f;
    }
  }
}

std::int32_t EvalModel::lookup(std::string_view word, bool case_insensitive) const {
  auto it = index_.find(std::string(word));
  if (it != index_.end()) return it->second;
  if (case_insensitive) {
    auto folded = folded_index_.find(lowercase_utf8(word));
    if (folded != folded_index_.end()) return folded->second;
  }
  return -1;
}

std::span<const float> EvalModel::row(std::int32_t index) const {
  return {rows_.data() + static_cast<std::size_t>(index) * dim_, static_cast<std::size_t>(dim_)};
}

std::span<const float> EvalModel::unit_row(std::int32_t index) const {
  return {unit_rows_.data() + static_cast<std::size_t>(index) * dim_,
          static_cast<std::size_t>(dim_)};
}

std::optional<std::vector<float>> EvalModel::vector(std::string_view word,
                                                    bool case_insensitive) const {
  const std::int32_t index = lookup(word, case_insensitive);
  if (index >= 0) {
    auto r = row(index);
    return std::vector<float>(r.begin(), r.end());
  }
  if (!subword_) return std::nullopt;
  if (word.empty()) return std::nullopt;
  const std::vector<std::int64_t> bucket_ids = subword_->indexer.ngram_ids(word, 0);
  if (bucket_ids.empty()) return std::nullopt;
  std::vector<double> sum(dim_, 0.0);
  for (std::int64_t b : bucket_ids) {
    const float* row = subword_->bucket_rows.data() + static_cast<std::size_t>(b) * dim_;
    for (int j = 0; j < dim_; ++j) sum[j] += row[j];
  }
  std::vector<float> mean(dim_);
  for (int j = 0; j < dim_; ++j) {
    mean[j] = static_cast<float>(sum[j] / static_cast<double>(bucket_ids.size()));
  }
  return mean;
}

// ---------------------------------------------------------------------------
// Metrics

namespace {

template <typename A, typename B>
double dot_double(const A* a, const B* b, int dim) {
  double sum = 0.0;
  for (int j = 0; j < dim; ++j) sum += static_cast<double>(a[j]) * static_cast<double>(b[j]);
  return sum;
}

template <typename S>
double cosine_impl(std::span<const S> u, std::span<const S> v) {
  if (u.size() != v.size()) throw UsageError("cosine: dimension mismatch");
  double uu = 0.0, vv = 0.0, uv = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    uu += static_cast<double>(u[j]) * u[j];
    vv += static_cast<double>(v[j]) * v[j];
    uv += static_cast<double>(u[j]) * v[j];
  }
  if (uu == 0.0 || vv == 0.0) throw ZeroVector("cosine of a zero vector");
  return uv / (std::sqrt(uu) * std::sqrt(vv));
}

}  // namespace

double cosine(std::span<const float> u, std::span<const float> v) { return cosine_impl(u, v); }
double cosine(std::span<const double> u, std::span<const double> v) { return cosine_impl(u, v); }

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw UsageError("pearson: length mismatch");
  const std::size_t n = xs.size();
  if (n < 2) throw TooFewPairs("pearson needs at least 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DegenerateInput("constant input to correlation");
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&values](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // positions i..j share the mean of ranks i+1..j+1
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw UsageError("spearman: length mismatch");
  if (xs.size() < 2) throw TooFewPairs("spearman needs at least 2 points");
  const std::vector<double> rx = average_ranks(xs);
  const std::vector<double> ry = average_ranks(ys);
  return pearson(rx, ry);
}

// ---------------------------------------------------------------------------
// Analogy, word pairs, neighbors

double SectionResult::accuracy_pct() const {
  return evaluated > 0 ? 100.0 * static_cast<double>(correct) / static_cast<double>(evaluated)
                       : 0.0;
}

double WordSimResult::oov_ratio() const {
  const std::int64_t total = evaluated + skipped;
  return total > 0 ? static_cast<double>(skipped) / static_cast<double>(total) : 0.0;
}

AnalogyResult analogy_accuracy(const EvalModel& model, const AnalogySet& set,
                               const EvalOptions& options) {
  const bool ci = options.case_insensitive;
  const std::int32_t limit =
      options.restrict_vocab > 0 ? std::min(options.restrict_vocab, model.size()) : model.size();
  AnalogyResult result;
  std::vector<double> target(model.dim());

  for (const AnalogySection& section : set.sections) {
    SectionResult& summary = result.sections[section.name];
    for (const AnalogyQuad& quad : section.quads) {
      const std::int32_t ia = model.lookup(quad.a, ci);
      const std::int32_t ib = model.lookup(quad.b, ci);
      const std::int32_t ic = model.lookup(quad.c, ci);
      const std::int32_t id = model.lookup(quad.d, ci);
      const bool resolvable = ia >= 0 && ib >= 0 && ic >= 0 && id >= 0 && ia < limit &&
                              ib < limit && ic < limit && id < limit &&
                              model.norm(ia) > 0.0 && model.norm(ib) > 0.0 && model.norm(ic) > 0.0;
      if (!resolvable) {
        ++summary.skipped;
        ++result.overall.skipped;
        continue;
      }
      const auto ua = model.unit_row(ia);
      const auto ub = model.unit_row(ib);
      const auto uc = model.unit_row(ic);
      for (int j = 0; j < model.dim(); ++j) {
        target[j] = static_cast<double>(ub[j]) - ua[j] + uc[j];
      }
      std::int32_t best = -1;
      double best_score = -std::numeric_limits<double>::infinity();
      for (std::int32_t w = 0; w < limit; ++w) {
        if (w == ia || w == ib || w == ic) continue;
        if (model.norm(w) == 0.0) continue;
        const double score = dot_double(model.unit_row(w).data(), target.data(), model.dim());
        if (score > best_score) {
          best_score = score;
          best = w;
        }
      }
      ++summary.evaluated;
      ++result.overall.evaluated;
      if (best < 0) continue;
      const bool correct = ci ? lowercase_utf8(model.tokens()[best]) == lowercase_utf8(quad.d)
                              : model.tokens()[best] == quad.d;
      if (correct) {
        ++summary.correct;
        ++result.overall.correct;
      }
    }
  }
  if (result.overall.evaluated == 0) {
    throw NoEvaluableQuadruples("every quadruple contains an unresolvable word");
  }
  return result;
}

WordSimResult wordpair_eval(const EvalModel& model, const WordPairSet& set,
                            const EvalOptions& options) {
  WordSimResult result;
  std::vector<double> cosines;
  std::vector<double> humans;
  for (const WordPair& pair : set.pairs) {
    const auto v1 = model.vector(pair.word1, options.case_insensitive);
    const auto v2 = model.vector(pair.word2, options.case_insensitive);
    bool usable = v1.has_value() && v2.has_value();
    double cos = 0.0;
    if (usable) {
      try {
        cos = cosine(std::span<const float>(*v1), std::span<const float>(*v2));
      } catch (const ZeroVector&) {
        usable = false;
      }
    }
    if (!usable) {
      ++result.skipped;
      continue;
    }
    cosines.push_back(cos);
    humans.push_back(pair.score);
    ++result.evaluated;
  }
  if (result.evaluated < 2) throw TooFewPairs("fewer than 2 evaluable word pairs");
  result.pearson_pct = 100.0 * pearson(cosines, humans);
  result.spearman_pct = 100.0 * spearman(cosines, humans);
  return result;
}

std::vector<std::pair<std::string, double>> nearest_neighbors(const EvalModel& model,
                                                              std::string_view word, std::int64_t k,
                                                              const EvalOptions& options) {
  const auto query = model.vector(word, options.case_insensitive);
  if (!query) throw OutOfVocabulary(std::string(word));
  double qq = 0.0;
  for (float v : *query) qq += static_cast<double>(v) * v;
  if (qq == 0.0) throw ZeroVector("query vector has zero norm");
  const double qnorm = std::sqrt(qq);
  std::vector<double> qunit(query->size());
  for (std::size_t j = 0; j < query->size(); ++j) qunit[j] = (*query)[j] / qnorm;

  const std::int32_t self = model.lookup(word, options.case_insensitive);
  std::vector<std::pair<std::string, double>> scored;
  scored.reserve(model.size());
  for (std::int32_t w = 0; w < model.size(); ++w) {
    if (w == self || model.tokens()[w] == word) continue;
    if (model.norm(w) == 0.0) continue;
    const double cos = dot_double(model.unit_row(w).data(), qunit.data(), model.dim());
    scored.emplace_back(model.tokens()[w], cos);
  }
  if (k < 0) k = 0;
  const std::int64_t take = std::min<std::int64_t>(k, static_cast<std::int64_t>(scored.size()));
  std::partial_sort(scored.begin(), scored.begin() + take, scored.end(),
                    [](const auto& a, const auto& b) {
                      if (a.second != b.second) return a.second > b.second;
                      return a.first < b.first;
                    });
  scored.resize(take);
  return scored;
}

// ---------------------------------------------------------------------------
// Reports

EvalReport evaluate(const EvalModel& model, const AnalogySet* analogy_set,
                    const WordPairSet* wordpair_set, const EvalOptions& options) {
  EvalReport report;
  report.vocab_size = model.size();
  if (analogy_set) report.analogy = analogy_accuracy(model, *analogy_set, options);
  if (wordpair_set) report.wordsim = wordpair_eval(model, *wordpair_set, options);
  return report;
}

AveragedMetrics average_metrics(std::span<const EvalReport> runs) {
  if (runs.empty()) throw UsageError("no reports to average");
  AveragedMetrics mean;
  mean.vocab_size = runs.front().vocab_size;
  const double n = static_cast<double>(runs.size());
  const bool has_analogy = runs.front().analogy.has_value();
  const bool has_wordsim = runs.front().wordsim.has_value();
  for (const EvalReport& run : runs) {
    if (run.analogy.has_value() != has_analogy || run.wordsim.has_value() != has_wordsim) {
      throw DataError("reports to average carry different suites");
    }
  }
  if (has_analogy) {
    double pct = 0.0;
    for (const EvalReport& run : runs) {
      pct += run.analogy->overall.accuracy_pct();
      mean.analogy_evaluated += static_cast<double>(run.analogy->overall.evaluated) / n;
      mean.analogy_skipped += static_cast<double>(run.analogy->overall.skipped) / n;
      for (const auto& [name, section] : run.analogy->sections) {
        mean.section_pct[name] += section.accuracy_pct() / n;
      }
    }
    mean.analogy_pct = pct / n;
  }
  if (has_wordsim) {
    double p = 0.0, s = 0.0;
    for (const EvalReport& run : runs) {
      p += run.wordsim->pearson_pct;
      s += run.wordsim->spearman_pct;
      mean.wordsim_evaluated += static_cast<double>(run.wordsim->evaluated) / n;
      mean.wordsim_skipped += static_cast<double>(run.wordsim->skipped) / n;
    }
    mean.wordsim_pearson_pct = p / n;
    mean.wordsim_spearman_pct = s / n;
  }
  return mean;
}

void write_report_kv(std::ostream& os, const EvalReport& report) {
  os << "vocab: " << report.vocab_size << '\n';
  if (report.analogy) {
    os << "analogy_pct: " << report.analogy->overall.accuracy_pct() << '\n';
    os << "analogy_evaluated: " << report.analogy->overall.evaluated << '\n';
    os << "analogy_skipped: " << report.analogy->overall.skipped << '\n';
    for (const auto& [name, section] : report.analogy->sections) {
      os << "section_" << name << "_pct: " << section.accuracy_pct() << '\n';
    }
  }
  if (report.wordsim) {
    os << "wordsim_pct: " << report.wordsim->pearson_pct << '\n';
    os << "spearman_pct: " << report.wordsim->spearman_pct << '\n';
    os << "wordsim_evaluated: " << report.wordsim->evaluated << '\n';
    os << "wordsim_skipped: " << report.wordsim->skipped << '\n';
  }
}

void write_report_kv(std::ostream& os, const AveragedMetrics& metrics) {
  os << "vocab: " << metrics.vocab_size << '\n';
  if (metrics.analogy_pct) {
    os << "analogy_pct: " << *metrics.analogy_pct << '\n';
    os << "analogy_evaluated: " << metrics.analogy_evaluated << '\n';
    os << "analogy_skipped: " << metrics.analogy_skipped << '\n';
    for (const auto& [name, pct] : metrics.section_pct) {
      os << "section_" << name << "_pct: " << pct << '\n';
    }
  }
  if (metrics.wordsim_pearson_pct) {
    os << "wordsim_pct: " << *metrics.wordsim_pearson_pct << '\n';
    os << "spearman_pct: " << *metrics.wordsim_spearman_pct << '\n';
    os << "wordsim_evaluated: " << metrics.wordsim_evaluated << '\n';
    os << "wordsim_skipped: " << metrics.wordsim_skipped << '\n';
  }
}

}  // namespace yembed
