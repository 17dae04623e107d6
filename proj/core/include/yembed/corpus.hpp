#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "yembed/unicode.hpp"

// Corpus ingestion: tokenize dump text, score lines against a language
// profile and keep the ones that look like the target language. The original
// dump mixes English, French and other content with the Yoruba articles, so
// cleaning is a reproducible, threshold-based proxy for what would otherwise
// be a manual pass.

namespace yembed {

struct CorpusStats {
  std::int64_t total_tokens = 0;     // tokens on kept lines
  std::int64_t distinct_tokens = 0;  // distinct tokens on kept lines
  std::int64_t total_lines = 0;      // input lines seen
  std::int64_t dropped_lines = 0;    // lines below threshold or without tokens
  std::int64_t byte_size = 0;        // bytes of kept text including newlines
};

std::ostream& operator<<(std::ostream& os, const CorpusStats& stats);

struct LanguageProfile {
  // Codepoints that mark a token as Yoruba: the combining marks plus the
  // precomposed tonal/underdot letters.
  std::unordered_set<Codepoint> marker_codepoints;
  // High-frequency Yoruba tokens, lowercase, in diacritized and bare forms.
  std::unordered_set<std::string> function_words;
  double threshold = 0.25;  // keep lines scoring at least this

  // threshold must lie in [0,1] and both sets must be nonempty.
  void validate() const;

  static LanguageProfile yoruba_defaults();
};

// Tokens are maximal runs of letters, combining marks, digits, apostrophes
// and hyphens; everything else separates. Case is preserved.
std::vector<std::string> tokenize(std::string_view line);

// Fraction of tokens that carry a marker codepoint or match a function word
// (case-folded). Empty token list scores 0.
double score_line(std::span<const std::string> tokens, const LanguageProfile& profile);

struct FilterResult {
  std::vector<std::string> kept;
  CorpusStats stats;
};

// Keeps exactly the lines with at least one token and score >= threshold.
// Order-preserving and pure.
FilterResult filter_corpus(std::span<const std::string> lines, const LanguageProfile& profile);

struct CleanOptions {
  LanguageProfile profile = LanguageProfile::yoruba_defaults();
  bool strip_markup = true;
  bool lowercase = false;
};

// Streaming form used by the CLI: reads lines, strips markup, filters, and
// writes kept lines. Throws EmptyCorpus when nothing survives.
CorpusStats clean_stream(std::istream& in, std::ostream& out, const CleanOptions& options);

}  // namespace yembed
