#include "yembed/vocab.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "yembed/corpus.hpp"
#include "yembed/unicode.hpp"

namespace yembed {

Vocabulary Vocabulary::build(
    const std::function<void(const std::function<void(std::string_view)>&)>& feed,
    std::int64_t min_count) {
  std::unordered_map<std::string, std::int64_t> counts;
  feed([&counts](std::string_view token) { counts[std::string(token)] += 1; });
  std::vector<Entry> entries;
  entries.reserve(counts.size());
  for (auto& [token, count] : counts) entries.push_back({token, count});
  return from_counts(std::move(entries), min_count);
}

Vocabulary Vocabulary::from_counts(std::vector<Entry> counts, std::int64_t min_count) {
  Vocabulary vocab;
  vocab.min_count_ = min_count;
  std::erase_if(counts, [min_count](const Entry& e) { return e.count < min_count; });
  if (counts.empty()) throw EmptyVocabulary("no token reaches min_count");
  std::sort(counts.begin(), counts.end(), [](const Entry& a, const Entry& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.token < b.token;
  });
  vocab.entries_ = std::move(counts);
  vocab.index_entries();
  return vocab;
}

void Vocabulary::index_entries() {
  index_.clear();
  index_.reserve(entries_.size());
  total_count_ = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    index_.emplace(entries_[i].token, static_cast<std::int32_t>(i));
    total_count_ += entries_[i].count;
  }
}

std::int32_t Vocabulary::index_of(std::string_view token) const {
  auto it = index_.find(token);
  return it == index_.end() ? -1 : it->second;
}

void Vocabulary::save(std::ostream& os) const {
  for (const Entry& entry : entries_) os << entry.token << '\t' << entry.count << '\n';
}

void Vocabulary::save_file(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw DataError("cannot write vocabulary file: " + path);
  save(os);
}

Vocabulary Vocabulary::load(std::istream& is) {
  Vocabulary vocab;
  std::string line;
  std::size_t line_number = 0;
  std::int64_t min_seen = 0;
  while (std::getline(is, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(line_number, "expected token<TAB>count");
    Entry entry;
    entry.token = line.substr(0, tab);
    try {
      entry.count = std::stoll(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw ParseError(line_number, "bad count field");
    }
    if (entry.token.empty() || entry.count < 1) throw ParseError(line_number, "bad vocabulary entry");
    min_seen = min_seen == 0 ? entry.count : std::min(min_seen, entry.count);
    vocab.entries_.push_back(std::move(entry));
  }
  if (vocab.entries_.empty()) throw EmptyVocabulary("empty vocabulary file");
  vocab.min_count_ = min_seen;
  vocab.index_entries();
  return vocab;
}

Vocabulary Vocabulary::load_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open vocabulary file: " + path);
  return load(is);
}

Vocabulary build_vocab(std::span<const std::string> tokens, std::int64_t min_count) {
  return Vocabulary::build(
      [tokens](const std::function<void(std::string_view)>& sink) {
        for (const std::string& token : tokens) sink(token);
      },
      min_count);
}

Vocabulary build_vocab_from_file(const std::string& path, std::int64_t min_count) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open corpus file: " + path);
  return Vocabulary::build(
      [&is](const std::function<void(std::string_view)>& sink) {
        std::string line;
        while (std::getline(is, line)) {
          for (const std::string& token : tokenize(line)) sink(token);
        }
      },
      min_count);
}

double keep_probability(std::int64_t count, std::int64_t total_count, double t) {
  const double f = static_cast<double>(count) / static_cast<double>(total_count);
  if (f <= t) return 1.0;
  return std::min(1.0, std::sqrt(t / f) + t / f);
}

std::uint32_t SubwordIndexer::hash(std::string_view gram) {
  std::uint32_t h = kFnvOffsetBasis;
  for (unsigned char byte : gram) {
    h ^= byte;
    h *= kFnvPrime;
  }
  return h;
}

std::vector<std::string> SubwordIndexer::ngram_strings(std::string_view word) const {
  std::string wrapped;
  wrapped.reserve(word.size() + 2);
  wrapped.push_back('<');
  wrapped.append(word);
  wrapped.push_back('>');

  // Codepoint start offsets, so n-grams count characters, not bytes.
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < wrapped.size(); ++i) {
    if ((static_cast<unsigned char>(wrapped[i]) & 0xC0) != 0x80) starts.push_back(i);
  }
  starts.push_back(wrapped.size());
  const std::size_t n_chars = starts.size() - 1;

  std::vector<std::string> grams;
  for (int n = min_n; n <= max_n; ++n) {
    if (static_cast<std::size_t>(n) > n_chars) break;
    for (std::size_t pos = 0; pos + n <= n_chars; ++pos) {
      grams.emplace_back(wrapped.substr(starts[pos], starts[pos + n] - starts[pos]));
    }
  }
  return grams;
}

std::vector<std::int64_t> SubwordIndexer::ngram_ids(std::string_view word,
                                                    std::int64_t vocab_size) const {
  std::vector<std::int64_t> ids;
  for (const std::string& gram : ngram_strings(word)) {
    ids.push_back(vocab_size + hash(gram) % static_cast<std::uint32_t>(bucket_count));
  }
  return ids;
}

NegativeTable::NegativeTable(const Vocabulary& vocab, double alpha) {
  if (vocab.size() == 0) throw EmptyVocabulary("negative table needs a nonempty vocabulary");
  cumulative_.resize(vocab.size());
  double total = 0.0;
  for (std::int32_t i = 0; i < vocab.size(); ++i) {
    total += std::pow(static_cast<double>(vocab.count(i)), alpha);
    cumulative_[i] = total;
  }
  for (double& c : cumulative_) c /= total;
  cumulative_.back() = 1.0;
}

std::int32_t NegativeTable::sample(Rng& rng) const {
  const double u = rng.real();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return static_cast<std::int32_t>(it - cumulative_.begin());
}

double NegativeTable::probability(std::int32_t index) const {
  const double lo = index == 0 ? 0.0 : cumulative_[index - 1];
  return cumulative_[index] - lo;
}

}  // namespace yembed
