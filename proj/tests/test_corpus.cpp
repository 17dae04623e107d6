#include <doctest.h>

#include <sstream>

#include "yembed/corpus.hpp"
#include "yembed/textnorm.hpp"

using namespace yembed;

namespace {

LanguageProfile profile_with(std::unordered_set<std::string> function_words,
                             double threshold) {
  LanguageProfile profile = LanguageProfile::yoruba_defaults();
  profile.function_words = std::move(function_words);
  profile.threshold = threshold;
  return profile;
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("tokenize splits on punctuation and whitespace") {
  CHECK(tokenize("Awo osan ati brown") ==
        std::vector<std::string>{"Awo", "osan", "ati", "brown"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("wọn je.") == std::vector<std::string>{"wọn", "je"});
  CHECK(tokenize("a,b;c") == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("tokenize keeps hyphens, apostrophes and digits inside tokens") {
  CHECK(tokenize("kọ-silẹ") == std::vector<std::string>{"kọ-silẹ"});
  CHECK(tokenize("l'ọwọ rẹ") == std::vector<std::string>{"l'ọwọ", "rẹ"});
  CHECK(tokenize("ọdún 2020!") == std::vector<std::string>{"ọdún", "2020"});
}

TEST_CASE("tokenize keeps combining marks attached") {
  CHECK(tokenize("ọ̀ta (enemy)") ==
        std::vector<std::string>{"ọ̀ta", "enemy"});
}

TEST_CASE("score_line fraction of marked or function-word tokens") {
  LanguageProfile profile = LanguageProfile::yoruba_defaults();
  const std::vector<std::string> marked = {"ọ̀tá", "ọ̀rẹ́"};
  CHECK(score_line(marked, profile) == 1.0);
  const std::vector<std::string> english = {"the", "quick", "fox"};
  CHECK(score_line(english, profile) == 0.0);
  const std::vector<std::string> half = {"ati", "brown"};
  CHECK(score_line(half, profile_with({"ati"}, 0.5)) == 0.5);
  CHECK(score_line({}, profile) == 0.0);
}

TEST_CASE("function-word match is case-folded") {
  const std::vector<std::string> tokens = {"Ati", "brown"};
  CHECK(score_line(tokens, profile_with({"ati"}, 0.5)) == 0.5);
}

TEST_CASE("filter keeps exactly the lines at or above threshold") {
  // scores: 0.0, 0.5, 1.0 under a profile whose only function word is "ati"
  const std::vector<std::string> lines = {"the quick fox", "ati brown", "ati ati"};
  LanguageProfile profile = profile_with({"ati"}, 0.4);
  const FilterResult result = filter_corpus(lines, profile);
  CHECK(result.kept == std::vector<std::string>{"ati brown", "ati ati"});
  CHECK(result.stats.total_lines == 3);
  CHECK(result.stats.dropped_lines == 1);
  CHECK(result.stats.total_tokens == 4);
  CHECK(result.stats.distinct_tokens == 2);  // ati, brown
}

TEST_CASE("threshold 0 keeps every nonempty line") {
  const std::vector<std::string> lines = {"the quick fox", "", "  ", "x"};
  const FilterResult result = filter_corpus(lines, profile_with({"ati"}, 0.0));
  CHECK(result.kept == std::vector<std::string>{"the quick fox", "x"});
  CHECK(result.stats.dropped_lines == 2);
}

TEST_CASE("profiles outside their invariants are rejected") {
  const std::vector<std::string> lines = {"x"};
  CHECK_THROWS_AS(filter_corpus(lines, profile_with({"ati"}, 1.5)), UsageError);
  CHECK_THROWS_AS(filter_corpus(lines, profile_with({"ati"}, -0.1)), UsageError);
  LanguageProfile empty_words = profile_with({}, 0.5);
  CHECK_THROWS_AS(filter_corpus(lines, empty_words), UsageError);
  LanguageProfile no_markers = profile_with({"ati"}, 0.5);
  no_markers.marker_codepoints.clear();
  CHECK_THROWS_AS(filter_corpus(lines, no_markers), UsageError);
}

TEST_CASE("threshold 1 drops mixed-language lines") {
  const std::vector<std::string> lines = {"ati brown"};
  CHECK(filter_corpus(lines, profile_with({"ati"}, 1.0)).kept.empty());
}

TEST_CASE("filter is order-preserving and pure") {
  const std::vector<std::string> lines = {"ọkan", "two", "ẹta", "four", "àrún"};
  LanguageProfile profile = LanguageProfile::yoruba_defaults();
  profile.threshold = 0.5;
  const FilterResult a = filter_corpus(lines, profile);
  const FilterResult b = filter_corpus(lines, profile);
  CHECK(a.kept == b.kept);
  CHECK(a.kept == std::vector<std::string>{"ọkan", "ẹta", "àrún"});
}

TEST_CASE("normalization commutes with tokenization") {
  const NormalizationPolicy policy{true, true, false};
  const std::vector<std::string> lines = {
      "wá lọ ọ̀tá ọ̀rẹ́", "Awo osan, ati brown!", "kọ-silẹ l'ọwọ ọdún 2020",
      "ẹ̀kọ́ àti ìwé; ṣùgbọ́n"};
  for (const std::string& line : lines) {
    std::vector<std::string> norm_then_tok = tokenize(normalize_text(line, policy));
    std::vector<std::string> tok_then_norm;
    for (const std::string& token : tokenize(line)) {
      tok_then_norm.push_back(normalize_text(token, policy));
    }
    CHECK(norm_then_tok == tok_then_norm);
  }
}

TEST_CASE("token count is invariant under normalization") {
  const NormalizationPolicy policy{true, true, false};
  const std::vector<std::string> lines = {"wá lọ ọ̀tá ọ̀rẹ́", "Awo osan ati brown",
                                          "ẹ̀kọ́ àti ìwé"};
  std::size_t diacritized = 0, normalized = 0;
  for (const std::string& line : lines) {
    diacritized += tokenize(line).size();
    normalized += tokenize(normalize_text(line, policy)).size();
  }
  CHECK(diacritized == normalized);
}

TEST_CASE("clean_stream strips markup, filters and reports stats") {
  std::istringstream in(
      "Awo osan ati brown inu isujo [[ultraviolet]] wọn\n"
      "the quick brown fox jumps over the lazy dog\n"
      "\n"
      "ọ̀tá ọ̀rẹ́ àti ìwé <ref>x</ref>\n");
  std::ostringstream out;
  CleanOptions options;
  options.profile.threshold = 0.3;
  const CorpusStats stats = clean_stream(in, out, options);
  CHECK(stats.total_lines == 4);
  CHECK(stats.dropped_lines == 2);
  CHECK(out.str().find("[[") == std::string::npos);
  CHECK(out.str().find("<ref>") == std::string::npos);
  CHECK(out.str().find("ultraviolet") != std::string::npos);
}

TEST_CASE("clean_stream lowercases on request") {
  std::istringstream in("Ọ̀tá Àti Ìwé\n");
  std::ostringstream out;
  CleanOptions options;
  options.profile.threshold = 0.0;
  options.lowercase = true;
  clean_stream(in, out, options);
  CHECK(out.str() == "ọ̀tá àti ìwé\n");
}

TEST_CASE("clean_stream throws on empty input") {
  std::istringstream in("");
  std::ostringstream out;
  CHECK_THROWS_AS(clean_stream(in, out, CleanOptions{}), EmptyCorpus);
}

TEST_CASE("stats stream output is key:value lines") {
  CorpusStats stats{10, 5, 3, 1, 42};
  std::ostringstream os;
  os << stats;
  CHECK(os.str().find("total_tokens: 10") != std::string::npos);
  CHECK(os.str().find("dropped_lines: 1") != std::string::npos);
}

}  // TEST_SUITE
