#include "yembed/corpus.hpp"

#include <istream>
#include <ostream>

#include "yembed/textnorm.hpp"

namespace yembed {

std::ostream& operator<<(std::ostream& os, const CorpusStats& stats) {
  os << "total_lines: " << stats.total_lines << '\n'
     << "dropped_lines: " << stats.dropped_lines << '\n'
     << "total_tokens: " << stats.total_tokens << '\n'
     << "distinct_tokens: " << stats.distinct_tokens << '\n'
     << "byte_size: " << stats.byte_size << '\n';
  return os;
}

namespace {

bool is_token_char(Codepoint cp) {
  if ((cp >= '0' && cp <= '9') || (cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z')) return true;
  if (cp == '\'' || cp == '-' || cp == 0x2019) return true;  // apostrophes and hyphen
  if (cp >= 0x00C0 && cp <= 0x024F) return cp != 0x00D7 && cp != 0x00F7;  // Latin-1/Extended letters
  if (is_combining_mark(cp)) return true;
  if (cp >= 0x1E00 && cp <= 0x1EFF) return true;  // Latin Extended Additional
  return false;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> tokens;
  std::u32string cps = utf8_decode(line);
  std::string current;
  for (Codepoint cp : cps) {
    if (is_token_char(cp)) {
      utf8_append(current, cp);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

double score_line(std::span<const std::string> tokens, const LanguageProfile& profile) {
  if (tokens.empty()) return 0.0;
  std::int64_t hits = 0;
  for (const std::string& token : tokens) {
    bool marked = false;
    for (Codepoint cp : utf8_decode(token)) {
      if (profile.marker_codepoints.count(cp)) {
        marked = true;
        break;
      }
    }
    if (marked || profile.function_words.count(lowercase_utf8(token))) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(tokens.size());
}

void LanguageProfile::validate() const {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw UsageError("language-profile threshold must be in [0, 1]");
  }
  if (marker_codepoints.empty() || function_words.empty()) {
    throw UsageError("language profile needs marker codepoints and function words");
  }
}

FilterResult filter_corpus(std::span<const std::string> lines, const LanguageProfile& profile) {
  profile.validate();
  FilterResult result;
  std::unordered_set<std::string> distinct;
  for (const std::string& line : lines) {
    ++result.stats.total_lines;
    std::vector<std::string> tokens = tokenize(line);
    if (tokens.empty() || score_line(tokens, profile) < profile.threshold) {
      ++result.stats.dropped_lines;
      continue;
    }
    result.stats.total_tokens += static_cast<std::int64_t>(tokens.size());
    result.stats.byte_size += static_cast<std::int64_t>(line.size()) + 1;
    for (std::string& token : tokens) distinct.insert(std::move(token));
    result.kept.push_back(line);
  }
  result.stats.distinct_tokens = static_cast<std::int64_t>(distinct.size());
  return result;
}

CorpusStats clean_stream(std::istream& in, std::ostream& out, const CleanOptions& options) {
  options.profile.validate();
  CorpusStats stats;
  std::unordered_set<std::string> distinct;
  std::string line;
  while (std::getline(in, line)) {
    ++stats.total_lines;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string text = options.strip_markup ? strip_markup(line) : line;
    if (options.lowercase) text = lowercase_utf8(text);
    std::vector<std::string> tokens = tokenize(text);
    if (tokens.empty() || score_line(tokens, options.profile) < options.profile.threshold) {
      ++stats.dropped_lines;
      continue;
    }
    stats.total_tokens += static_cast<std::int64_t>(tokens.size());
    stats.byte_size += static_cast<std::int64_t>(text.size()) + 1;
    for (std::string& token : tokens) distinct.insert(std::move(token));
    out << text << '\n';
  }
  stats.distinct_tokens = static_cast<std::int64_t>(distinct.size());
  if (stats.total_lines == stats.dropped_lines) throw EmptyCorpus("no lines kept by the filter");
  return stats;
}

LanguageProfile LanguageProfile::yoruba_defaults() {
  LanguageProfile profile;
  profile.marker_codepoints = {
      kCombiningGrave, kCombiningAcute, kCombiningMacron, kCombiningDotBelow,
      // precomposed tonal vowels and nasals, both cases
      0x00C0, 0x00C1, 0x00C8, 0x00C9, 0x00CC, 0x00CD, 0x00D2, 0x00D3, 0x00D9, 0x00DA,
      0x00E0, 0x00E1, 0x00E8, 0x00E9, 0x00EC, 0x00ED, 0x00F2, 0x00F3, 0x00F9, 0x00FA,
      0x0100, 0x0101, 0x0112, 0x0113, 0x012A, 0x012B, 0x014C, 0x014D, 0x016A, 0x016B,
      0x0143, 0x0144, 0x01F8, 0x01F9, 0x1E3E, 0x1E3F,
      // underdot letters, both cases
      0x1EA0, 0x1EA1, 0x1EB8, 0x1EB9, 0x1ECA, 0x1ECB, 0x1ECC, 0x1ECD, 0x1EE4, 0x1EE5,
      0x1E62, 0x1E63,
  };
  profile.function_words = {
      // diacritized and bare spellings of frequent Yoruba words
      "ni",   "tí",    "ti",    "àti",   "ati",    "sí",    "si",    "wọn",  "won",
      "àwọn", "awọn",  "awon",  "fún",   "fun",    "láti",  "lati",  "pẹ̀lú",  "pẹlu",
      "pelu", "jẹ́",    "jẹ",    "je",    "kan",    "náà",   "naa",   "ó",    "o",
      "a",    "wà",    "wa",    "lọ",    "lo",     "bá",    "ba",    "bí",   "bi",
      "kò",   "ko",    "ilé",   "ile",   "ọmọ",    "omo",   "gbogbo", "ṣe",   "se",
      "sì",   "inú",   "inu",   "ara",   "nígbà",  "nigba", "ọdún",  "odun", "orílẹ̀",
      "orile", "ilẹ̀",  "ilẹ",   "ohun",  "oun",    "ibi",   "yìí",   "yii",  "lè",
      "le",   "máa",   "maa",   "kí",    "ki",     "rẹ̀",    "re",    "mo",   "mi",
  };
  return profile;
}

}  // namespace yembed
