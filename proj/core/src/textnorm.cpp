#include "yembed/textnorm.hpp"

#include <algorithm>

namespace yembed {

std::string normalize_text(std::string_view text, const NormalizationPolicy& policy) {
  std::string bytes;
  if (policy.strip_markup) {
    bytes = strip_markup(text);
    text = bytes;
  }
  std::u32string nfd = to_nfd(utf8_decode(text));
  std::u32string kept;
  kept.reserve(nfd.size());
  for (Codepoint cp : nfd) {
    if (is_combining_mark(cp) && policy.strips(cp)) continue;
    kept.push_back(cp);
  }
  return utf8_encode(to_nfc(kept));
}

std::pair<Codepoint, std::vector<Codepoint>> canonical_decompose(std::string_view grapheme) {
  std::u32string nfd = to_nfd(utf8_decode(grapheme));
  if (nfd.empty()) throw NotSingleGrapheme("empty input");
  if (combining_class(nfd[0]) != 0) throw NotSingleGrapheme("input starts with a combining mark");
  std::vector<Codepoint> marks;
  for (std::size_t i = 1; i < nfd.size(); ++i) {
    if (combining_class(nfd[i]) == 0) throw NotSingleGrapheme("more than one user-perceived character");
    marks.push_back(nfd[i]);
  }
  return {nfd[0], std::move(marks)};
}

namespace {

// Removes <...> spans. A '<' without a matching '>' is kept literally.
std::string strip_tags(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    if (raw[i] == '<') {
      std::size_t close = raw.find('>', i + 1);
      if (close != std::string_view::npos) {
        i = close + 1;
        continue;
      }
    }
    out.push_back(raw[i]);
    ++i;
  }
  return out;
}

// Reduces [[target]] / [[target|label]] to the visible text.
std::string strip_wiki_links(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    if (raw[i] == '[' && i + 1 < raw.size() && raw[i + 1] == '[') {
      std::size_t close = raw.find("]]", i + 2);
      if (close != std::string_view::npos) {
        std::string_view inner = raw.substr(i + 2, close - (i + 2));
        std::size_t pipe = inner.find('|');
        if (pipe != std::string_view::npos) inner = inner.substr(pipe + 1);
        out.append(inner);
        i = close + 2;
        continue;
      }
    }
    out.push_back(raw[i]);
    ++i;
  }
  return out;
}

}  // namespace

std::string strip_markup(std::string_view raw) { return strip_wiki_links(strip_tags(raw)); }

}  // namespace yembed
