#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "yembed/unicode.hpp"

// Diacritic normalization for Yoruba text.
//
// Yoruba marks three tones on vowels and syllabic nasals (grave = low,
// acute = high, optional macron = mid) and uses a phonemic dot below to
// distinguish the letters e/ẹ, o/ọ and s/ṣ. "Undiacritized" text restricts
// every marked letter to its base version. The two mark classes are stripped
// independently so either reading of "undiacritized" is available.

namespace yembed {

struct NormalizationPolicy {
  bool strip_tone = true;      // U+0300, U+0301, U+0304
  bool strip_underdot = true;  // U+0323
  bool strip_markup = false;   // residual tags and wiki link brackets

  bool strips(Codepoint mark) const {
    if (strip_tone && is_tone_mark(mark)) return true;
    return strip_underdot && mark == kCombiningDotBelow;
  }
};

// Applies the policy to UTF-8 text. Marked letters are handled whether they
// arrive precomposed or as base + combining marks; output is canonically
// composed. Codepoints outside the letter table pass through unchanged.
// Throws InvalidEncoding on malformed input.
std::string normalize_text(std::string_view text, const NormalizationPolicy& policy);

// Splits one user-perceived character into its base codepoint and its
// combining marks in canonical order. Throws NotSingleGrapheme unless the
// input is exactly one starter followed only by combining marks.
std::pair<Codepoint, std::vector<Codepoint>> canonical_decompose(std::string_view grapheme);

// Best-effort removal of residual markup: <...> tag spans are deleted,
// [[target]] keeps "target", [[target|label]] keeps "label". Unbalanced
// brackets are left in place. Operates on bytes; safe on any UTF-8.
std::string strip_markup(std::string_view raw);

}  // namespace yembed
