// yembed: clean a noisy Yoruba corpus, produce diacritized and undiacritized
// variants, train skipgram-negative-sampling embeddings (word and subword)
// and compare them with intrinsic evaluations.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "yembed/pipeline.hpp"

namespace {

using namespace yembed;

std::ifstream open_input(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open input file: " + path);
  return is;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write output file: " + path);
  return os;
}

Mode parse_mode(const std::string& name) {
  if (name == "word") return Mode::word;
  if (name == "subword") return Mode::subword;
  throw UsageError("mode must be 'word' or 'subword'");
}

struct CleanArgs {
  std::string input = "-";
  std::string output = "-";
  double threshold = 0.25;
  bool lowercase = false;
  bool keep_markup = false;
};

void cmd_clean(const CleanArgs& args) {
  CleanOptions options;
  options.profile.threshold = args.threshold;
  options.strip_markup = !args.keep_markup;
  options.lowercase = args.lowercase;

  std::ifstream file_in;
  std::ofstream file_out;
  std::istream* in = &std::cin;
  std::ostream* out = &std::cout;
  if (args.input != "-") {
    file_in = open_input(args.input);
    in = &file_in;
  }
  if (args.output != "-") {
    file_out = open_output(args.output);
    out = &file_out;
  }
  const CorpusStats stats = clean_stream(*in, *out, options);
  // Stats are results: stdout unless the cleaned text already goes there.
  (args.output != "-" ? std::cout : std::cerr) << stats;
}

struct NormalizeArgs {
  std::string input = "-";
  std::string output = "-";
  bool keep_tone = false;
  bool keep_underdot = false;
  bool strip_markup = false;
};

void cmd_normalize(const NormalizeArgs& args) {
  NormalizationPolicy policy;
  policy.strip_tone = !args.keep_tone;
  policy.strip_underdot = !args.keep_underdot;
  policy.strip_markup = args.strip_markup;

  std::ifstream file_in;
  std::ofstream file_out;
  std::istream* in = &std::cin;
  std::ostream* out = &std::cout;
  if (args.input != "-") {
    file_in = open_input(args.input);
    in = &file_in;
  }
  if (args.output != "-") {
    file_out = open_output(args.output);
    out = &file_out;
  }
  normalize_stream(*in, *out, policy);
}

struct TrainArgs {
  std::string corpus;
  std::string output;
  std::string config_path;
  std::string mode = "word";
  std::string save_vocab;
  std::string save_ngrams;
  std::optional<int> dim, window, negatives, epochs, workers, min_n, max_n;
  std::optional<double> lr_start, lr_end, subsample;
  std::optional<std::int64_t> min_count, bucket_count;
  std::optional<std::uint64_t> seed;
  bool exact_sigmoid = false;
};

void cmd_train(const TrainArgs& args) {
  PipelineConfig config;
  if (!args.config_path.empty()) config = PipelineConfig::load_file(args.config_path);
  TrainConfig train = config.train;
  train.mode = parse_mode(args.mode);
  if (args.dim) train.dim = *args.dim;
  if (args.window) train.window = *args.window;
  if (args.negatives) train.negatives = *args.negatives;
  if (args.epochs) train.epochs = *args.epochs;
  if (args.workers) train.workers = *args.workers;
  if (args.min_n) train.min_n = *args.min_n;
  if (args.max_n) train.max_n = *args.max_n;
  if (args.lr_start) train.lr_start = *args.lr_start;
  if (args.lr_end) train.lr_end = *args.lr_end;
  if (args.subsample) train.subsample_t = *args.subsample;
  if (args.bucket_count) train.bucket_count = *args.bucket_count;
  if (args.seed) train.seed = *args.seed;
  if (args.exact_sigmoid) train.exact_sigmoid = true;
  const std::int64_t min_count = args.min_count.value_or(config.min_count);

  const TrainFileResult result =
      train_file(args.corpus, train, min_count, args.output, args.save_vocab, args.save_ngrams);
  std::cerr << "vocab: " << result.vocab_size << ", tokens: " << result.corpus_tokens << '\n';
  for (std::size_t e = 0; e < result.stats.epoch_mean_loss.size(); ++e) {
    std::cerr << "epoch " << e << " mean loss: " << result.stats.epoch_mean_loss[e] << '\n';
  }
  std::cerr << "saved " << args.output << '\n';
}

struct EvalArgs {
  std::string model;
  std::string ngrams;
  std::string analogy;
  std::string wordpairs;
  std::string report;
  std::int32_t restrict_vocab = 0;
  bool case_sensitive = false;
};

void cmd_eval(const EvalArgs& args) {
  if (args.analogy.empty() && args.wordpairs.empty()) {
    throw UsageError("eval needs --analogy and/or --wordpairs");
  }
  EvalOptions options{!args.case_sensitive, args.restrict_vocab};
  const EvalReport report =
      eval_files(args.model, args.ngrams, args.analogy, args.wordpairs, options);
  if (args.report.empty()) {
    write_report_kv(std::cout, report);
  } else {
    std::ofstream os = open_output(args.report);
    write_report_kv(os, report);
    std::cerr << "report written to " << args.report << '\n';
  }
}

struct ExperimentArgs {
  std::string config_path;
  std::optional<int> repeats, epochs, dim, workers;
  std::optional<std::uint64_t> seed;
  std::string eval_sets;
};

void cmd_experiment(const ExperimentArgs& args) {
  PipelineConfig config = PipelineConfig::load_file(args.config_path);
  if (args.repeats) config.repeats = *args.repeats;
  if (args.epochs) config.train.epochs = *args.epochs;
  if (args.dim) config.train.dim = *args.dim;
  if (args.workers) config.train.workers = *args.workers;
  if (args.seed) config.train.seed = *args.seed;
  if (!args.eval_sets.empty()) config.set("eval_sets", args.eval_sets);

  const ExperimentSummary summary = run_full_experiment(config, std::cerr);
  if (config.report_dir.empty()) {
    write_experiment_report(std::cout, summary);
  } else {
    const std::string path = config.report_dir + "/experiment_report.txt";
    std::ofstream os = open_output(path);
    write_experiment_report(os, summary);
    std::cerr << "report written to " << path << '\n';
  }
}

struct NnArgs {
  std::string model;
  std::string ngrams;
  std::string word;
  std::int64_t k = 10;
};

void cmd_nn(const NnArgs& args) {
  const EvalModel model = load_word2vec_text(args.model, args.ngrams);
  const auto neighbors = nearest_neighbors(model, args.word, args.k);
  for (const auto& [token, cos] : neighbors) {
    std::cout << token << '\t' << cos << '\n';
  }
}

struct ValidateArgs {
  std::string analogy;
};

void cmd_validate_set(const ValidateArgs& args) {
  const std::vector<Violation> violations = validate_set_file(args.analogy);
  for (const Violation& v : violations) {
    std::cout << "line " << v.line << ": " << v.message << '\n';
  }
  if (!violations.empty()) {
    throw DataError(std::to_string(violations.size()) + " violation(s) in " + args.analogy);
  }
  std::cerr << args.analogy << ": ok\n";
}

struct DeriveArgs {
  std::string input;
  std::string output;
  bool keep_tone = false;
  bool keep_underdot = false;
};

void cmd_derive_set(const DeriveArgs& args) {
  NormalizationPolicy policy;
  policy.strip_tone = !args.keep_tone;
  policy.strip_underdot = !args.keep_underdot;
  policy.strip_markup = false;
  const AnalogySet set = AnalogySet::load_file(args.input);
  std::int64_t dropped = 0;
  const AnalogySet derived = derive_undiacritized_set(set, policy, &dropped);
  derived.save_file(args.output);
  std::cerr << "derived " << derived.total_quads() << " quadruples, dropped " << dropped
            << " degenerate\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Yoruba corpus cleaning, diacritic normalization, SGNS embeddings and evaluation"};
  app.require_subcommand(1);

  CleanArgs clean_args;
  auto* clean = app.add_subcommand("clean", "Strip markup and filter foreign-language lines");
  clean->add_option("--input", clean_args.input, "input file or - for stdin");
  clean->add_option("--output", clean_args.output, "output file or - for stdout");
  clean->add_option("--threshold", clean_args.threshold, "language score threshold [0,1]");
  clean->add_flag("--lowercase", clean_args.lowercase, "lowercase kept lines");
  clean->add_flag("--keep-markup", clean_args.keep_markup, "do not strip tags and wiki links");
  clean->callback([&] { cmd_clean(clean_args); });

  NormalizeArgs norm_args;
  auto* normalize = app.add_subcommand("normalize", "Convert text to its undiacritized form");
  normalize->add_option("--input", norm_args.input, "input file or - for stdin");
  normalize->add_option("--output", norm_args.output, "output file or - for stdout");
  normalize->add_flag("--keep-tone", norm_args.keep_tone, "keep tone marks");
  normalize->add_flag("--keep-underdot", norm_args.keep_underdot, "keep dot-below letters");
  normalize->add_flag("--strip-markup", norm_args.strip_markup, "also strip residual markup");
  normalize->callback([&] { cmd_normalize(norm_args); });

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "Train SGNS embeddings on a corpus");
  train->add_option("--corpus", train_args.corpus, "training corpus (one line per document)")
      ->required();
  train->add_option("--output", train_args.output, "model output (word2vec text format)")
      ->required();
  train->add_option("--config", train_args.config_path, "key=value config file");
  train->add_option("--mode", train_args.mode, "word or subword");
  train->add_option("--dim", train_args.dim, "vector dimensionality");
  train->add_option("--window", train_args.window, "max context offset");
  train->add_option("--negatives", train_args.negatives, "negative samples per positive");
  train->add_option("--epochs", train_args.epochs, "training passes");
  train->add_option("--lr-start", train_args.lr_start, "initial learning rate");
  train->add_option("--lr-end", train_args.lr_end, "final learning rate");
  train->add_option("--subsample", train_args.subsample, "subsample threshold t (<=0 disables)");
  train->add_option("--min-count", train_args.min_count, "minimum token count");
  train->add_option("--bucket-count", train_args.bucket_count, "n-gram hash buckets");
  train->add_option("--min-n", train_args.min_n, "minimum n-gram length");
  train->add_option("--max-n", train_args.max_n, "maximum n-gram length");
  train->add_option("--seed", train_args.seed, "RNG seed");
  train->add_option("--workers", train_args.workers, "parallel workers");
  train->add_option("--save-vocab", train_args.save_vocab, "also write the vocabulary");
  train->add_option("--save-ngrams", train_args.save_ngrams,
                    "also write the n-gram matrix (subword mode)");
  train->add_flag("--exact-sigmoid", train_args.exact_sigmoid, "exact sigmoid instead of table");
  train->callback([&] { cmd_train(train_args); });

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Evaluate a model against analogy / word-pair sets");
  eval->add_option("--model", eval_args.model, "word2vec text model")->required();
  eval->add_option("--ngrams", eval_args.ngrams, "n-gram matrix companion file");
  eval->add_option("--analogy", eval_args.analogy, "analogy set file");
  eval->add_option("--wordpairs", eval_args.wordpairs, "word-pair similarity file");
  eval->add_option("--report", eval_args.report, "write key:value report here");
  eval->add_option("--restrict-vocab", eval_args.restrict_vocab,
                   "only use the N most frequent words");
  eval->add_flag("--case-sensitive", eval_args.case_sensitive, "exact-case matching");
  eval->callback([&] { cmd_eval(eval_args); });

  ExperimentArgs exp_args;
  auto* experiment =
      app.add_subcommand("experiment", "Full protocol: clean, fork, train 2x2, evaluate, average");
  experiment->add_option("--config", exp_args.config_path, "key=value config file")->required();
  experiment->add_option("--repeats", exp_args.repeats, "training repetitions per leg");
  experiment->add_option("--epochs", exp_args.epochs, "override epochs");
  experiment->add_option("--dim", exp_args.dim, "override dim");
  experiment->add_option("--workers", exp_args.workers, "override workers");
  experiment->add_option("--seed", exp_args.seed, "override seed");
  experiment->add_option("--eval-sets", exp_args.eval_sets,
                         "matched (default) or diacritized test sets");
  experiment->callback([&] { cmd_experiment(exp_args); });

  NnArgs nn_args;
  auto* nn = app.add_subcommand("nn", "Nearest neighbors of a word");
  nn->add_option("--model", nn_args.model, "word2vec text model")->required();
  nn->add_option("--ngrams", nn_args.ngrams, "n-gram matrix companion file");
  nn->add_option("--word", nn_args.word, "query word")->required();
  nn->add_option("-k,--top", nn_args.k, "number of neighbors");
  nn->callback([&] { cmd_nn(nn_args); });

  ValidateArgs validate_args;
  auto* validate = app.add_subcommand("validate-set", "Check an analogy set file");
  validate->add_option("--analogy", validate_args.analogy, "analogy set file")->required();
  validate->callback([&] { cmd_validate_set(validate_args); });

  DeriveArgs derive_args;
  auto* derive = app.add_subcommand("derive-set", "Derive the undiacritized analogy set");
  derive->add_option("--input", derive_args.input, "diacritized analogy set")->required();
  derive->add_option("--output", derive_args.output, "derived set output")->required();
  derive->add_flag("--keep-tone", derive_args.keep_tone, "keep tone marks");
  derive->add_flag("--keep-underdot", derive_args.keep_underdot, "keep dot-below letters");
  derive->callback([&] { cmd_derive_set(derive_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
