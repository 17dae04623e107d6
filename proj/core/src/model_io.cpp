#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "yembed/sgns.hpp"

namespace yembed {

namespace {

// Enough digits to round-trip a float exactly through text.
void append_float(std::string& out, float value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 9);
  out.append(buf, ptr);
}

float parse_float(std::string_view field, std::size_t line_number) {
  float value = 0.0f;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(line_number, "bad float field '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

std::int64_t parse_int(std::string_view field, std::size_t line_number) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(line_number, "bad integer field '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

void save_word2vec_text(const EmbeddingModel& model, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write model file: " + path);
  os << model.vocab().size() << ' ' << model.dim() << '\n';
  std::string line;
  for (std::int32_t i = 0; i < model.vocab().size(); ++i) {
    line.clear();
    line += model.vocab().token(i);
    const std::vector<float> vec = model.word_vector(model.vocab().token(i));
    for (float v : vec) {
      line.push_back(' ');
      append_float(line, v);
    }
    line.push_back('\n');
    os << line;
  }
  if (!os) throw DataError("write failed: " + path);
}

void save_ngram_matrix(const EmbeddingModel& model, const std::string& path) {
  if (model.mode() != Mode::subword) throw UsageError("model has no n-gram matrix");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write n-gram file: " + path);
  const SubwordIndexer& indexer = model.indexer();
  os << indexer.bucket_count << ' ' << model.dim() << ' ' << indexer.min_n << ' ' << indexer.max_n
     << ' ' << model.vocab().size() << '\n';
  std::string line;
  for (std::int64_t b = 0; b < indexer.bucket_count; ++b) {
    line.clear();
    auto row = model.input_row(model.vocab().size() + b);
    for (int j = 0; j < model.dim(); ++j) {
      if (j > 0) line.push_back(' ');
      append_float(line, row[j]);
    }
    line.push_back('\n');
    os << line;
  }
  if (!os) throw DataError("write failed: " + path);
}

namespace {

std::optional<SubwordExtension> load_ngram_matrix(const std::string& path, int expected_dim) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open n-gram file: " + path);
  std::string line;
  std::size_t line_number = 0;
  if (!std::getline(is, line)) throw ParseError(1, "missing n-gram header");
  ++line_number;
  auto header = split_ws(line);
  if (header.size() != 5) throw ParseError(1, "n-gram header needs 5 fields");
  SubwordExtension ext;
  ext.indexer.bucket_count = parse_int(header[0], 1);
  const auto dim = static_cast<int>(parse_int(header[1], 1));
  ext.indexer.min_n = static_cast<int>(parse_int(header[2], 1));
  ext.indexer.max_n = static_cast<int>(parse_int(header[3], 1));
  ext.train_vocab_size = parse_int(header[4], 1);
  if (dim != expected_dim) {
    throw DataError("n-gram matrix dim " + std::to_string(dim) + " does not match model dim " +
                    std::to_string(expected_dim));
  }
  if (ext.indexer.bucket_count < 1 || ext.indexer.min_n < 1 || ext.indexer.max_n < ext.indexer.min_n)
    throw ParseError(1, "bad n-gram header values");
  ext.bucket_rows.reserve(static_cast<std::size_t>(ext.indexer.bucket_count) * dim);
  for (std::int64_t b = 0; b < ext.indexer.bucket_count; ++b) {
    if (!std::getline(is, line)) throw ParseError(line_number + 1, "truncated n-gram matrix");
    ++line_number;
    auto fields = split_ws(line);
    if (static_cast<int>(fields.size()) != dim) throw ParseError(line_number, "wrong column count");
    for (auto field : fields) ext.bucket_rows.push_back(parse_float(field, line_number));
  }
  return ext;
}

}  // namespace

EvalModel load_word2vec_text(const std::string& path, const std::string& ngrams_path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open model file: " + path);
  std::string line;
  if (!std::getline(is, line)) throw ParseError(1, "missing header");
  auto header = split_ws(line);
  if (header.size() != 2) throw ParseError(1, "header must be 'vocab_size dim'");
  const std::int64_t declared = parse_int(header[0], 1);
  const auto dim = static_cast<int>(parse_int(header[1], 1));
  if (declared < 1 || dim < 1) throw ParseError(1, "bad header values");

  std::vector<std::string> tokens;
  std::vector<float> rows;
  tokens.reserve(declared);
  rows.reserve(static_cast<std::size_t>(declared) * dim);
  std::size_t line_number = 1;
  while (std::getline(is, line)) {
    ++line_number;
    if (line.empty()) continue;
    auto fields = split_ws(line);
    if (static_cast<int>(fields.size()) != dim + 1) {
      throw ParseError(line_number, "expected token plus " + std::to_string(dim) + " values");
    }
    tokens.emplace_back(fields[0]);
    for (int j = 1; j <= dim; ++j) rows.push_back(parse_float(fields[j], line_number));
  }
  if (static_cast<std::int64_t>(tokens.size()) != declared) {
    throw DataError("model file declares " + std::to_string(declared) + " rows but has " +
                    std::to_string(tokens.size()));
  }

  std::optional<SubwordExtension> extension;
  if (!ngrams_path.empty()) extension = load_ngram_matrix(ngrams_path, dim);
  return EvalModel(std::move(tokens), std::move(rows), dim, std::move(extension));
}

}  // namespace yembed
