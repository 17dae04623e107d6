#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "yembed/errors.hpp"
#include "yembed/rng.hpp"

namespace yembed {

// Dense-indexed vocabulary ordered by descending count, ties broken
// lexicographically. Tokens below min_count are excluded.
class Vocabulary {
 public:
  struct Entry {
    std::string token;
    std::int64_t count;
  };

  Vocabulary() = default;

  // Counts tokens delivered through `feed`, then finalizes. Throws
  // EmptyVocabulary if nothing reaches min_count.
  static Vocabulary build(const std::function<void(const std::function<void(std::string_view)>&)>& feed,
                          std::int64_t min_count);
  static Vocabulary from_counts(std::vector<Entry> counts, std::int64_t min_count);

  std::int32_t index_of(std::string_view token) const;  // -1 when absent
  const std::string& token(std::int32_t index) const { return entries_[index].token; }
  std::int64_t count(std::int32_t index) const { return entries_[index].count; }
  std::int32_t size() const { return static_cast<std::int32_t>(entries_.size()); }
  std::int64_t total_count() const { return total_count_; }
  std::int64_t min_count() const { return min_count_; }
  std::span<const Entry> entries() const { return entries_; }

  // One "token<TAB>count" line per entry, in index order.
  void save(std::ostream& os) const;
  void save_file(const std::string& path) const;
  static Vocabulary load(std::istream& is);
  static Vocabulary load_file(const std::string& path);

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view sv) const { return std::hash<std::string_view>{}(sv); }
  };

  void index_entries();

  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::int32_t, StringHash, std::equal_to<>> index_;
  std::int64_t total_count_ = 0;
  std::int64_t min_count_ = 1;
};

// Convenience builders.
Vocabulary build_vocab(std::span<const std::string> tokens, std::int64_t min_count);
Vocabulary build_vocab_from_file(const std::string& path, std::int64_t min_count);

// Probability of keeping an occurrence of a token during subsampling:
// p = min(1, sqrt(t/f) + t/f) with f = count/total. Returns 1 when f <= t.
// Requires t > 0 and count >= 1.
double keep_probability(std::int64_t count, std::int64_t total_count, double t);

// Character n-gram extraction with bucket hashing. Words are wrapped in
// '<' and '>' before enumeration; n-grams run over codepoints, hashing over
// their UTF-8 bytes (FNV-1a 32-bit), each bucket id offset by the vocabulary
// size so word ids and n-gram ids share one matrix.
struct SubwordIndexer {
  int min_n = 3;
  int max_n = 6;
  std::int64_t bucket_count = 2'000'000;

  static constexpr std::uint32_t kFnvOffsetBasis = 2166136261u;
  static constexpr std::uint32_t kFnvPrime = 16777619u;

  static std::uint32_t hash(std::string_view gram);

  std::vector<std::string> ngram_strings(std::string_view word) const;
  // Ids in [vocab_size, vocab_size + bucket_count), one per n-gram, in the
  // same order as ngram_strings.
  std::vector<std::int64_t> ngram_ids(std::string_view word, std::int64_t vocab_size) const;
};

// Cumulative unigram^alpha distribution for drawing negative samples.
class NegativeTable {
 public:
  explicit NegativeTable(const Vocabulary& vocab, double alpha = 0.75);

  std::int32_t sample(Rng& rng) const;  // inverse-CDF over the cumulative table
  double probability(std::int32_t index) const;
  std::int32_t size() const { return static_cast<std::int32_t>(cumulative_.size()); }

 private:
  std::vector<double> cumulative_;
};

}  // namespace yembed
