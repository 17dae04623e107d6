#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "yembed/errors.hpp"

// Minimal Unicode support for Latin-script tonal orthographies.
//
// Covers strict UTF-8 transcoding plus canonical decomposition, ordering and
// composition for the repertoire that matters here: Latin letters carrying a
// grave, acute, macron or dot-below, in precomposed or combining form. The
// letter table is generated from UnicodeData.txt restricted to that
// repertoire; codepoints outside it are passed through untouched.

namespace yembed {

using Codepoint = char32_t;

inline constexpr Codepoint kCombiningGrave = 0x0300;
inline constexpr Codepoint kCombiningAcute = 0x0301;
inline constexpr Codepoint kCombiningMacron = 0x0304;
inline constexpr Codepoint kCombiningDotBelow = 0x0323;

// Strict decode: overlong forms, surrogates, out-of-range scalars and
// truncated sequences all raise InvalidEncoding with the byte offset.
std::u32string utf8_decode(std::string_view bytes);

std::string utf8_encode(std::u32string_view codepoints);
void utf8_append(std::string& out, Codepoint cp);

// True for U+0300..U+036F (combining diacritical marks).
bool is_combining_mark(Codepoint cp);

// Canonical combining class; 0 for anything outside U+0300..U+036F.
int combining_class(Codepoint cp);

bool is_tone_mark(Codepoint cp);  // grave, acute or macron

struct LetterDecomposition {
  Codepoint base;  // plain ASCII letter
  Codepoint mark;  // one of the four marks above
};

// Lookup for precomposed Latin letters whose canonical decomposition is an
// ASCII letter plus exactly one of the four marks. Returns nullopt otherwise.
std::optional<LetterDecomposition> decompose_letter(Codepoint precomposed);

// Inverse lookup: (base, mark) -> precomposed letter, when one exists.
std::optional<Codepoint> compose_letter(Codepoint base, Codepoint mark);

// Canonical decomposition + canonical ordering over the table repertoire.
std::u32string to_nfd(std::u32string_view text);

// Canonical composition (decompose, reorder, recompose) over the repertoire.
std::u32string to_nfc(std::u32string_view text);

// ASCII letters and table letters map to their lowercase form (base letter
// lowered, marks kept); everything else is returned unchanged.
Codepoint simple_lowercase(Codepoint cp);
std::string lowercase_utf8(std::string_view text);

// Number of user-perceived characters: combining marks attach to the
// preceding starter.
std::size_t grapheme_count(std::u32string_view text);

}  // namespace yembed
