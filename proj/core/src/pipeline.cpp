#include "yembed/pipeline.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

namespace yembed {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_bool(const std::string& key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw UsageError("config key '" + key + "': expected true/false, got '" + std::string(value) + "'");
}

template <typename T>
T parse_number(const std::string& key, std::string_view value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw UsageError("config key '" + key + "': bad number '" + std::string(value) + "'");
  }
  return out;
}

}  // namespace

void PipelineConfig::set(const std::string& key, const std::string& raw_value) {
  const std::string value(trim(raw_value));
  if (key == "raw_corpus") raw_corpus = value;
  else if (key == "cleaned_corpus") cleaned_corpus = value;
  else if (key == "normalized_corpus") normalized_corpus = value;
  else if (key == "model_dir") model_dir = value;
  else if (key == "report_dir") report_dir = value;
  else if (key == "analogy_set") analogy_set = value;
  else if (key == "wordpair_set") wordpair_set = value;
  else if (key == "strip_tone") policy.strip_tone = parse_bool(key, value);
  else if (key == "strip_underdot") policy.strip_underdot = parse_bool(key, value);
  else if (key == "strip_markup") policy.strip_markup = parse_bool(key, value);
  else if (key == "filter_threshold") filter_threshold = parse_number<double>(key, value);
  else if (key == "lowercase") lowercase = parse_bool(key, value);
  else if (key == "min_count") min_count = parse_number<std::int64_t>(key, value);
  else if (key == "dim") train.dim = parse_number<int>(key, value);
  else if (key == "window") train.window = parse_number<int>(key, value);
  else if (key == "negatives") train.negatives = parse_number<int>(key, value);
  else if (key == "epochs") train.epochs = parse_number<int>(key, value);
  else if (key == "lr_start") train.lr_start = parse_number<double>(key, value);
  else if (key == "lr_end") train.lr_end = parse_number<double>(key, value);
  else if (key == "subsample_t") train.subsample_t = parse_number<double>(key, value);
  else if (key == "bucket_count") train.bucket_count = parse_number<std::int64_t>(key, value);
  else if (key == "min_n") train.min_n = parse_number<int>(key, value);
  else if (key == "max_n") train.max_n = parse_number<int>(key, value);
  else if (key == "seed") train.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "workers") train.workers = parse_number<int>(key, value);
  else if (key == "repeats") repeats = parse_number<int>(key, value);
  else if (key == "case_insensitive") case_insensitive = parse_bool(key, value);
  else if (key == "restrict_vocab") restrict_vocab = parse_number<std::int32_t>(key, value);
  else if (key == "eval_sets") {
    if (value != "matched" && value != "diacritized") {
      throw UsageError("config key 'eval_sets': expected matched or diacritized");
    }
    eval_sets = value;
  } else {
    throw UsageError("unknown config key '" + key + "'");
  }
}

PipelineConfig PipelineConfig::load_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot open config file: " + path);
  PipelineConfig config;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(is, line)) {
    ++line_number;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const std::size_t eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("config line " + std::to_string(line_number) + ": expected key=value");
    }
    config.set(std::string(trim(view.substr(0, eq))), std::string(view.substr(eq + 1)));
  }
  return config;
}

void normalize_stream(std::istream& in, std::ostream& out, const NormalizationPolicy& policy) {
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    try {
      out << normalize_text(line, policy) << '\n';
    } catch (const InvalidEncoding& e) {
      throw ParseError(line_number, e.what());
    }
  }
}

TrainFileResult train_file(const std::string& corpus_path, const TrainConfig& config,
                           std::int64_t min_count, const std::string& model_out,
                           const std::string& vocab_out, const std::string& ngrams_out) {
  TrainFileResult result;
  const Vocabulary vocab = build_vocab_from_file(corpus_path, min_count);
  const EncodedCorpus corpus = EncodedCorpus::from_file(corpus_path, vocab);
  EmbeddingModel model = train(corpus, vocab, config, &result.stats);
  result.vocab_size = vocab.size();
  result.corpus_tokens = corpus.token_count();
  save_word2vec_text(model, model_out);
  if (!vocab_out.empty()) vocab.save_file(vocab_out);
  if (!ngrams_out.empty()) save_ngram_matrix(model, ngrams_out);
  return result;
}

EvalReport eval_files(const std::string& model_path, const std::string& ngrams_path,
                      const std::string& analogy_path, const std::string& wordpair_path,
                      const EvalOptions& options) {
  const EvalModel model = load_word2vec_text(model_path, ngrams_path);
  std::optional<AnalogySet> analogy_set;
  std::optional<WordPairSet> wordpair_set;
  if (!analogy_path.empty()) analogy_set = AnalogySet::load_file(analogy_path);
  if (!wordpair_path.empty()) wordpair_set = WordPairSet::load_file(wordpair_path);
  return evaluate(model, analogy_set ? &*analogy_set : nullptr,
                  wordpair_set ? &*wordpair_set : nullptr, options);
}

namespace {

// Normalizes a word-pair set: pairs whose two words collapse together and
// pairs that duplicate an earlier one after normalization are dropped.
WordPairSet derive_wordpairs(const WordPairSet& set, const NormalizationPolicy& policy,
                             std::int64_t* dropped) {
  WordPairSet out;
  std::set<std::pair<std::string, std::string>> seen;
  std::int64_t drop_count = 0;
  for (const WordPair& pair : set.pairs) {
    WordPair derived{normalize_text(pair.word1, policy), normalize_text(pair.word2, policy),
                     pair.score};
    auto key = std::minmax(derived.word1, derived.word2);
    const bool collapsed = pair.word1 != pair.word2 && derived.word1 == derived.word2;
    if (collapsed || !seen.insert({key.first, key.second}).second) {
      ++drop_count;
      continue;
    }
    out.pairs.push_back(std::move(derived));
  }
  if (dropped) *dropped = drop_count;
  return out;
}

const char* mode_name(Mode mode) { return mode == Mode::word ? "word" : "subword"; }

}  // namespace

ExperimentSummary run_full_experiment(const PipelineConfig& config, std::ostream& log) {
  namespace fs = std::filesystem;
  if (config.repeats < 1) throw UsageError("repeats must be >= 1");
  if (config.cleaned_corpus.empty() || config.normalized_corpus.empty()) {
    throw UsageError("experiment needs cleaned_corpus and normalized_corpus paths");
  }

  ExperimentSummary summary;

  // Stage 1: clean (optional, when a raw dump is given).
  if (!config.raw_corpus.empty()) {
    std::ifstream raw(config.raw_corpus, std::ios::binary);
    if (!raw) throw DataError("cannot open raw corpus: " + config.raw_corpus);
    std::ofstream cleaned(config.cleaned_corpus, std::ios::binary);
    if (!cleaned) throw DataError("cannot write cleaned corpus: " + config.cleaned_corpus);
    CleanOptions clean_options;
    clean_options.profile.threshold = config.filter_threshold;
    clean_options.strip_markup = config.policy.strip_markup;
    clean_options.lowercase = config.lowercase;
    const CorpusStats stats = clean_stream(raw, cleaned, clean_options);
    log << "clean: kept " << (stats.total_lines - stats.dropped_lines) << "/" << stats.total_lines
        << " lines, " << stats.total_tokens << " tokens\n";
  }

  // Stage 2: fork the normalized (undiacritized) corpus.
  {
    std::ifstream cleaned(config.cleaned_corpus, std::ios::binary);
    if (!cleaned) throw DataError("cannot open cleaned corpus: " + config.cleaned_corpus);
    std::ofstream normalized(config.normalized_corpus, std::ios::binary);
    if (!normalized) throw DataError("cannot write normalized corpus: " + config.normalized_corpus);
    NormalizationPolicy policy = config.policy;
    policy.strip_markup = false;  // markup already handled by cleaning
    normalize_stream(cleaned, normalized, policy);
    log << "normalize: wrote " << config.normalized_corpus << '\n';
  }

  // Stage 3: evaluation sets, diacritized and derived.
  std::optional<AnalogySet> analogy_dia, analogy_norm;
  std::optional<WordPairSet> pairs_dia, pairs_norm;
  if (!config.analogy_set.empty()) {
    analogy_dia = AnalogySet::load_file(config.analogy_set);
    analogy_norm = derive_undiacritized_set(*analogy_dia, config.policy,
                                            &summary.analogy_quads_dropped);
  }
  if (!config.wordpair_set.empty()) {
    pairs_dia = WordPairSet::load_file(config.wordpair_set);
    pairs_norm = derive_wordpairs(*pairs_dia, config.policy, &summary.wordpairs_dropped);
  }

  if (!config.model_dir.empty()) fs::create_directories(config.model_dir);
  if (!config.report_dir.empty()) fs::create_directories(config.report_dir);

  // Stage 4: train and evaluate each (corpus variant, mode) leg.
  struct Variant {
    const char* name;
    const std::string* path;
    bool diacritized;
  };
  const Variant variants[2] = {{"diacritized", &config.cleaned_corpus, true},
                               {"undiacritized", &config.normalized_corpus, false}};
  for (const Variant& variant : variants) {
    const Vocabulary vocab = build_vocab_from_file(*variant.path, config.min_count);
    const EncodedCorpus corpus = EncodedCorpus::from_file(*variant.path, vocab);
    if (variant.diacritized) {
      summary.diacritized_vocab = vocab.size();
      summary.diacritized_tokens = corpus.token_count();
    } else {
      summary.undiacritized_vocab = vocab.size();
      summary.undiacritized_tokens = corpus.token_count();
    }
    const bool use_diacritized_sets = variant.diacritized || config.eval_sets == "diacritized";
    const AnalogySet* analogy =
        use_diacritized_sets ? (analogy_dia ? &*analogy_dia : nullptr)
                             : (analogy_norm ? &*analogy_norm : nullptr);
    const WordPairSet* pairs = use_diacritized_sets ? (pairs_dia ? &*pairs_dia : nullptr)
                                                    : (pairs_norm ? &*pairs_norm : nullptr);

    for (const Mode mode : {Mode::word, Mode::subword}) {
      TrainConfig train_config = config.train;
      train_config.mode = mode;
      ExperimentLeg leg;
      leg.corpus_name = variant.name;
      leg.mode = mode;
      leg.vocab_size = vocab.size();
      leg.corpus_tokens = corpus.token_count();
      for (int r = 0; r < config.repeats; ++r) {
        TrainConfig run_config = train_config;
        run_config.seed = config.train.seed + static_cast<std::uint64_t>(r);
        EmbeddingModel model = train(corpus, vocab, run_config);
        if (!config.model_dir.empty()) {
          const std::string stem = std::string(variant.name) + "_" + mode_name(mode) + "_run" +
                                   std::to_string(r);
          save_word2vec_text(model, config.model_dir + "/" + stem + ".vec");
          if (mode == Mode::subword) {
            save_ngram_matrix(model, config.model_dir + "/" + stem + ".ngrams");
          }
        }
        const EvalModel eval_model = model.to_eval_model();
        leg.runs.push_back(evaluate(eval_model, analogy, pairs, config.eval_options()));
        log << "leg " << variant.name << "/" << mode_name(mode) << " run " << r << " done\n";
      }
      leg.mean = average_metrics(leg.runs);
      summary.legs.push_back(std::move(leg));
    }
  }

  if (summary.undiacritized_vocab > summary.diacritized_vocab) {
    throw DataError("undiacritized vocabulary is larger than the diacritized one");
  }
  return summary;
}

void write_experiment_report(std::ostream& os, const ExperimentSummary& summary) {
  os << std::left << std::setw(14) << "corpus" << std::setw(9) << "mode" << std::right
     << std::setw(9) << "vocab" << std::setw(10) << "analogy%" << std::setw(10) << "wordsim%"
     << std::setw(11) << "spearman%" << '\n';
  auto cell = [](std::optional<double> v) {
    std::ostringstream ss;
    if (v) ss << std::fixed << std::setprecision(2) << *v;
    else ss << "-";
    return ss.str();
  };
  for (const ExperimentLeg& leg : summary.legs) {
    os << std::left << std::setw(14) << leg.corpus_name << std::setw(9)
       << (leg.mode == Mode::word ? "word" : "subword") << std::right << std::setw(9)
       << leg.vocab_size << std::setw(10) << cell(leg.mean.analogy_pct) << std::setw(10)
       << cell(leg.mean.wordsim_pearson_pct) << std::setw(11)
       << cell(leg.mean.wordsim_spearman_pct) << '\n';
  }
  os << '\n';
  for (const ExperimentLeg& leg : summary.legs) {
    os << "leg: " << leg.corpus_name << "/" << (leg.mode == Mode::word ? "word" : "subword")
       << '\n';
    write_report_kv(os, leg.mean);
    os << '\n';
  }
  os << "diacritized_vocab: " << summary.diacritized_vocab << '\n'
     << "undiacritized_vocab: " << summary.undiacritized_vocab << '\n'
     << "diacritized_tokens: " << summary.diacritized_tokens << '\n'
     << "undiacritized_tokens: " << summary.undiacritized_tokens << '\n'
     << "analogy_quads_dropped: " << summary.analogy_quads_dropped << '\n'
     << "wordpairs_dropped: " << summary.wordpairs_dropped << '\n';
}

}  // namespace yembed
