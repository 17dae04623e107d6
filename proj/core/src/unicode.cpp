#include "yembed/unicode.hpp"

#include <algorithm>
#include <array>
#include <vector>

namespace yembed {

namespace {

struct LetterRow {
  Codepoint precomposed;
  char base;
  Codepoint mark;
};

// Latin letters whose canonical decomposition is (ASCII letter, one of
// grave/acute/macron/dot-below). Generated from UnicodeData.txt 15.0.
constexpr LetterRow kLetterTable[] = {
    {0x00C0, 'A', 0x0300}, {0x00C1, 'A', 0x0301}, {0x00C8, 'E', 0x0300},
    {0x00C9, 'E', 0x0301}, {0x00CC, 'I', 0x0300}, {0x00CD, 'I', 0x0301},
    {0x00D2, 'O', 0x0300}, {0x00D3, 'O', 0x0301}, {0x00D9, 'U', 0x0300},
    {0x00DA, 'U', 0x0301}, {0x00DD, 'Y', 0x0301}, {0x00E0, 'a', 0x0300},
    {0x00E1, 'a', 0x0301}, {0x00E8, 'e', 0x0300}, {0x00E9, 'e', 0x0301},
    {0x00EC, 'i', 0x0300}, {0x00ED, 'i', 0x0301}, {0x00F2, 'o', 0x0300},
    {0x00F3, 'o', 0x0301}, {0x00F9, 'u', 0x0300}, {0x00FA, 'u', 0x0301},
    {0x00FD, 'y', 0x0301}, {0x0100, 'A', 0x0304}, {0x0101, 'a', 0x0304},
    {0x0106, 'C', 0x0301}, {0x0107, 'c', 0x0301}, {0x0112, 'E', 0x0304},
    {0x0113, 'e', 0x0304}, {0x012A, 'I', 0x0304}, {0x012B, 'i', 0x0304},
    {0x0139, 'L', 0x0301}, {0x013A, 'l', 0x0301}, {0x0143, 'N', 0x0301},
    {0x0144, 'n', 0x0301}, {0x014C, 'O', 0x0304}, {0x014D, 'o', 0x0304},
    {0x0154, 'R', 0x0301}, {0x0155, 'r', 0x0301}, {0x015A, 'S', 0x0301},
    {0x015B, 's', 0x0301}, {0x016A, 'U', 0x0304}, {0x016B, 'u', 0x0304},
    {0x0179, 'Z', 0x0301}, {0x017A, 'z', 0x0301}, {0x01F4, 'G', 0x0301},
    {0x01F5, 'g', 0x0301}, {0x01F8, 'N', 0x0300}, {0x01F9, 'n', 0x0300},
    {0x0232, 'Y', 0x0304}, {0x0233, 'y', 0x0304}, {0x1E04, 'B', 0x0323},
    {0x1E05, 'b', 0x0323}, {0x1E0C, 'D', 0x0323}, {0x1E0D, 'd', 0x0323},
    {0x1E20, 'G', 0x0304}, {0x1E21, 'g', 0x0304}, {0x1E24, 'H', 0x0323},
    {0x1E25, 'h', 0x0323}, {0x1E30, 'K', 0x0301}, {0x1E31, 'k', 0x0301},
    {0x1E32, 'K', 0x0323}, {0x1E33, 'k', 0x0323}, {0x1E36, 'L', 0x0323},
    {0x1E37, 'l', 0x0323}, {0x1E3E, 'M', 0x0301}, {0x1E3F, 'm', 0x0301},
    {0x1E42, 'M', 0x0323}, {0x1E43, 'm', 0x0323}, {0x1E46, 'N', 0x0323},
    {0x1E47, 'n', 0x0323}, {0x1E54, 'P', 0x0301}, {0x1E55, 'p', 0x0301},
    {0x1E5A, 'R', 0x0323}, {0x1E5B, 'r', 0x0323}, {0x1E62, 'S', 0x0323},
    {0x1E63, 's', 0x0323}, {0x1E6C, 'T', 0x0323}, {0x1E6D, 't', 0x0323},
    {0x1E7E, 'V', 0x0323}, {0x1E7F, 'v', 0x0323}, {0x1E80, 'W', 0x0300},
    {0x1E81, 'w', 0x0300}, {0x1E82, 'W', 0x0301}, {0x1E83, 'w', 0x0301},
    {0x1E88, 'W', 0x0323}, {0x1E89, 'w', 0x0323}, {0x1E92, 'Z', 0x0323},
    {0x1E93, 'z', 0x0323}, {0x1EA0, 'A', 0x0323}, {0x1EA1, 'a', 0x0323},
    {0x1EB8, 'E', 0x0323}, {0x1EB9, 'e', 0x0323}, {0x1ECA, 'I', 0x0323},
    {0x1ECB, 'i', 0x0323}, {0x1ECC, 'O', 0x0323}, {0x1ECD, 'o', 0x0323},
    {0x1EE4, 'U', 0x0323}, {0x1EE5, 'u', 0x0323}, {0x1EF2, 'Y', 0x0300},
    {0x1EF3, 'y', 0x0300}, {0x1EF4, 'Y', 0x0323}, {0x1EF5, 'y', 0x0323},
};

// Canonical combining classes for U+0300..U+036F, from UnicodeData.txt 15.0.
constexpr std::array<std::uint8_t, 112> kCombiningClass = {
    230, 230, 230, 230, 230, 230, 230, 230, 230, 230, 230, 230, 230, 230, 230, 230,
    230, 230, 230, 230, 230, 232, 220, 220, 220, 220, 232, 216, 220, 220, 220, 220,
    220, 202, 202, 220, 220, 220, 220, 202, 202, 220, 220, 220, 220, 220, 220, 220,
    220, 220, 220, 220, 1,   1,   1,   1,   1,   220, 220, 220, 220, 230, 230, 230,
    230, 230, 230, 230, 230, 240, 230, 220, 220, 220, 230, 230, 230, 220, 220, 0,
    230, 230, 230, 220, 220, 220, 220, 230, 232, 220, 220, 230, 233, 234, 234, 233,
    234, 234, 233, 230, 230, 230, 230, 230, 230, 230, 230, 230, 230, 230, 230, 230,
};

[[noreturn]] void bad_byte(std::size_t offset) { throw InvalidEncoding(offset); }

}  // namespace

std::u32string utf8_decode(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t n = bytes.size();
  while (i < n) {
    const unsigned char b0 = p[i];
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    }
    int len;
    Codepoint cp;
    if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      bad_byte(i);
    }
    if (i + len > n) bad_byte(i);
    for (int k = 1; k < len; ++k) {
      const unsigned char bk = p[i + k];
      if ((bk & 0xC0) != 0x80) bad_byte(i);
      cp = (cp << 6) | (bk & 0x3F);
    }
    // Overlong forms, surrogates and out-of-range scalars are rejected.
    static constexpr Codepoint kMinByLen[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMinByLen[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) bad_byte(i);
    out.push_back(cp);
    i += len;
  }
  return out;
}

void utf8_append(std::string& out, Codepoint cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string utf8_encode(std::u32string_view codepoints) {
  std::string out;
  out.reserve(codepoints.size() * 2);
  for (Codepoint cp : codepoints) utf8_append(out, cp);
  return out;
}

bool is_combining_mark(Codepoint cp) { return cp >= 0x0300 && cp <= 0x036F; }

int combining_class(Codepoint cp) {
  if (!is_combining_mark(cp)) return 0;
  return kCombiningClass[cp - 0x0300];
}

bool is_tone_mark(Codepoint cp) {
  return cp == kCombiningGrave || cp == kCombiningAcute || cp == kCombiningMacron;
}

std::optional<LetterDecomposition> decompose_letter(Codepoint precomposed) {
  const auto* end = std::end(kLetterTable);
  const auto* it = std::lower_bound(
      std::begin(kLetterTable), end, precomposed,
      [](const LetterRow& row, Codepoint cp) { return row.precomposed < cp; });
  if (it == end || it->precomposed != precomposed) return std::nullopt;
  return LetterDecomposition{static_cast<Codepoint>(it->base), it->mark};
}

std::optional<Codepoint> compose_letter(Codepoint base, Codepoint mark) {
  if (base >= 0x80) return std::nullopt;
  for (const LetterRow& row : kLetterTable) {
    if (row.base == static_cast<char>(base) && row.mark == mark) return row.precomposed;
  }
  return std::nullopt;
}

namespace {

void append_decomposed(std::u32string& out, Codepoint cp) {
  if (auto d = decompose_letter(cp)) {
    out.push_back(d->base);
    out.push_back(d->mark);
  } else {
    out.push_back(cp);
  }
}

// Canonical ordering: stable sort each maximal run of nonzero-ccc marks.
void canonical_order(std::u32string& text) {
  std::size_t i = 0;
  while (i < text.size()) {
    if (combining_class(text[i]) == 0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && combining_class(text[j]) != 0) ++j;
    std::stable_sort(text.begin() + i, text.begin() + j,
                     [](Codepoint a, Codepoint b) { return combining_class(a) < combining_class(b); });
    i = j;
  }
}

}  // namespace

std::u32string to_nfd(std::u32string_view text) {
  std::u32string out;
  out.reserve(text.size() + text.size() / 4);
  for (Codepoint cp : text) append_decomposed(out, cp);
  canonical_order(out);
  return out;
}

std::u32string to_nfc(std::u32string_view text) {
  std::u32string nfd = to_nfd(text);
  std::u32string out;
  out.reserve(nfd.size());
  // Standard canonical composition: a mark composes with the last starter
  // unless an intervening character blocks it (ccc 0, or ccc >= the mark's).
  std::ptrdiff_t last_starter = -1;
  int last_ccc = -1;
  for (Codepoint cp : nfd) {
    const int ccc = combining_class(cp);
    if (ccc == 0) {
      out.push_back(cp);
      last_starter = static_cast<std::ptrdiff_t>(out.size()) - 1;
      last_ccc = -1;
      continue;
    }
    if (last_starter >= 0 && last_ccc < ccc) {
      if (auto composed = compose_letter(out[last_starter], cp)) {
        out[last_starter] = *composed;
        continue;  // mark consumed; last_ccc unchanged
      }
    }
    out.push_back(cp);
    last_ccc = ccc;
  }
  return out;
}

Codepoint simple_lowercase(Codepoint cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + ('a' - 'A');
  if (auto d = decompose_letter(cp)) {
    if (d->base >= 'A' && d->base <= 'Z') {
      if (auto lower = compose_letter(d->base + ('a' - 'A'), d->mark)) return *lower;
    }
  }
  return cp;
}

std::string lowercase_utf8(std::string_view text) {
  std::u32string cps = utf8_decode(text);
  for (Codepoint& cp : cps) cp = simple_lowercase(cp);
  return utf8_encode(cps);
}

std::size_t grapheme_count(std::u32string_view text) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (combining_class(text[i]) == 0 || i == 0) ++count;
  }
  return count;
}

}  // namespace yembed
