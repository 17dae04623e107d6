#include <doctest.h>

#include <string>
#include <vector>

#include "yembed/rng.hpp"
#include "yembed/textnorm.hpp"
#include "yembed/unicode.hpp"

using namespace yembed;

namespace {

const NormalizationPolicy kFull{true, true, false};
const NormalizationPolicy kToneOnly{true, false, false};
const NormalizationPolicy kIdentity{false, false, false};

// Yoruba letters in both encodings, for property inputs that do not depend
// on the implementation's own NFC/NFD.
struct EncodedLetter {
  const char* precomposed;  // may be empty when no precomposed form exists
  const char* decomposed;
};

const std::vector<EncodedLetter> kLetters = {
    {"á", "á"},          // á
    {"à", "à"},          // à
    {"ā", "ā"},          // ā
    {"é", "é"},          // é
    {"è", "è"},          // è
    {"í", "í"},          // í
    {"ì", "ì"},          // ì
    {"ó", "ó"},          // ó
    {"ò", "ò"},          // ò
    {"ú", "ú"},          // ú
    {"ù", "ù"},          // ù
    {"ẹ", "ẹ"},          // ẹ
    {"ọ", "ọ"},          // ọ
    {"ṣ", "ṣ"},          // ṣ
    {"Ẹ", "Ẹ"},          // Ẹ
    {"Ọ", "Ọ"},          // Ọ
    {"Ṣ", "Ṣ"},          // Ṣ
    {"ń", "ń"},          // ń
    {"ǹ", "ǹ"},          // ǹ
    {"ḿ", "ḿ"},          // ḿ
    {"", "ẹ́"},          // ẹ́ (no single codepoint exists)
    {"", "ọ̀"},          // ọ̀
    {"ẹ́", "ẹ́"},  // ẹ́, half-composed vs fully decomposed
    {"ọ̀", "ọ̀"},  // ọ̀
};

const char* kPlain[] = {"a", "b", "gb", "o", "n", "Jupiter", "2020", ".", ",", "-", "'"};

// Random Yoruba-repertoire text; `composed` selects which encoding marked
// letters use.
std::string random_text(Rng& rng, bool composed, std::size_t graphemes) {
  std::string out;
  for (std::size_t g = 0; g < graphemes; ++g) {
    const auto pick = rng.below(10);
    if (pick < 4) {
      const EncodedLetter& letter = kLetters[rng.below(kLetters.size())];
      if (composed && letter.precomposed[0] != '\0') {
        out += letter.precomposed;
      } else {
        out += letter.decomposed;
      }
    } else if (pick < 9) {
      out += kPlain[rng.below(std::size(kPlain))];
    } else {
      out += ' ';
    }
  }
  return out;
}

bool contains_stripped_marks(const std::string& text, const NormalizationPolicy& policy) {
  for (Codepoint cp : utf8_decode(text)) {
    if (is_combining_mark(cp) && policy.strips(cp)) return true;
    if (auto d = decompose_letter(cp); d && policy.strips(d->mark)) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("textnorm") {

TEST_CASE("paper excerpt word loses all marks") {
  CHECK(normalize_text("Júpítérì", kFull) == "Jupiteri");
}

TEST_CASE("unmarked text is untouched by any policy") {
  CHECK(normalize_text("Jupiter", kFull) == "Jupiter");
  CHECK(normalize_text("Jupiter", kIdentity) == "Jupiter");
  CHECK(normalize_text("Jupiter", kToneOnly) == "Jupiter");
}

TEST_CASE("gram2-opposite sample normalizes to bare letters") {
  CHECK(normalize_text("wá lọ ọ̀tá ọ̀rẹ́", kFull) == "wa lo ota ore");
}

TEST_CASE("tone-only stripping keeps underdots") {
  CHECK(normalize_text("ọ̀rẹ́", kToneOnly) == "ọrẹ");
}

TEST_CASE("identity policy on composed text") {
  const std::string nfc = "wá lọ ọ̀tá ọ̀rẹ́ 123.";
  CHECK(normalize_text(nfc, kIdentity) == nfc);
}

TEST_CASE("underdot-only stripping keeps tones") {
  const NormalizationPolicy underdot_only{false, true, false};
  CHECK(normalize_text("ọ̀rẹ́", underdot_only) == "òré");
}

TEST_CASE("deterministic output") {
  const std::string input = "ẹ̀kọ́ àti ìwé";
  CHECK(normalize_text(input, kFull) == normalize_text(input, kFull));
}

TEST_CASE("stripped classes absent from output, other codepoints pass through") {
  const std::string out = normalize_text("café ñandú ẹ̀kọ́ 42 – ü", kFull);
  CHECK(!contains_stripped_marks(out, kFull));
  CHECK(out.find("42") != std::string::npos);
  CHECK(out.find("ñ") != std::string::npos);  // ñ is outside the mapping classes
  CHECK(out.find("ü") != std::string::npos);  // ü likewise
  CHECK(out.find("cafe") != std::string::npos);    // é carries a tone-class mark
}

TEST_CASE("full stripping of Yoruba letters yields ASCII") {
  const std::string out = normalize_text("ọ̀rẹ́ ṣùgbọ́n ńlá m̄ ẹ̀Ẹ́Ọ̀", kFull);
  for (unsigned char byte : out) CHECK(byte < 0x80);
}

TEST_CASE("case is preserved") {
  CHECK(normalize_text("Ọ̀RẸ́ Ṣe", kFull) == "ORE Se");
}

TEST_CASE("invalid UTF-8 is rejected with the byte offset") {
  CHECK_THROWS_AS(normalize_text("ab\xFFzz", kFull), InvalidEncoding);
  CHECK_THROWS_AS(normalize_text("\xC0\xAF", kFull), InvalidEncoding);      // overlong
  CHECK_THROWS_AS(normalize_text("\xED\xA0\x80", kFull), InvalidEncoding);  // surrogate
  CHECK_THROWS_AS(normalize_text("\xE1\xBB", kFull), InvalidEncoding);      // truncated
  try {
    normalize_text("ab\xFFzz", kFull);
  } catch (const InvalidEncoding& e) {
    CHECK(e.byte_offset == 2);
  }
}

TEST_CASE("idempotence over randomized repertoire") {
  Rng rng(7);
  const NormalizationPolicy policies[] = {kFull, kToneOnly, kIdentity, {false, true, false}};
  for (int i = 0; i < 300; ++i) {
    const std::string text = random_text(rng, rng.below(2) == 0, 1 + rng.below(30));
    for (const NormalizationPolicy& policy : policies) {
      const std::string once = normalize_text(text, policy);
      CHECK(normalize_text(once, policy) == once);
    }
  }
}

TEST_CASE("NFC and NFD inputs normalize identically") {
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    Rng composed_rng(1000 + i);
    const std::string composed = random_text(composed_rng, true, 1 + rng.below(30));
    // Derive the decomposed variant independently of the library: replace
    // each precomposed letter by its known base+mark pair.
    std::string alt;
    for (Codepoint cp : utf8_decode(composed)) {
      bool replaced = false;
      for (const EncodedLetter& letter : kLetters) {
        if (letter.precomposed[0] != '\0' && utf8_decode(letter.precomposed).size() == 1 &&
            utf8_decode(letter.precomposed)[0] == cp) {
          alt += letter.decomposed;
          replaced = true;
          break;
        }
      }
      if (!replaced) utf8_append(alt, cp);
    }
    for (const NormalizationPolicy& policy : {kFull, kToneOnly, kIdentity}) {
      CHECK(normalize_text(composed, policy) == normalize_text(alt, policy));
    }
  }
}

TEST_CASE("grapheme count preserved without markup stripping") {
  Rng rng(13);
  for (int i = 0; i < 200; ++i) {
    const std::string text = random_text(rng, rng.below(2) == 0, 1 + rng.below(25));
    const std::size_t before = grapheme_count(utf8_decode(text));
    const std::size_t after = grapheme_count(utf8_decode(normalize_text(text, kFull)));
    CHECK(before == after);
  }
}

TEST_CASE("canonical_decompose on precomposed, stacked and bare letters") {
  auto [base_a, marks_a] = canonical_decompose("á");  // á
  CHECK(base_a == U'a');
  REQUIRE(marks_a.size() == 1);
  CHECK(marks_a[0] == kCombiningAcute);

  // ẹ́ in either encoding: underdot (ccc 220) must precede the tone (ccc 230)
  for (const char* encoded : {"ẹ́", "ẹ́", "ẹ́"}) {
    auto [base, marks] = canonical_decompose(encoded);
    CHECK(base == U'e');
    REQUIRE(marks.size() == 2);
    CHECK(marks[0] == kCombiningDotBelow);
    CHECK(marks[1] == kCombiningAcute);
  }

  auto [base_x, marks_x] = canonical_decompose("x");
  CHECK(base_x == U'x');
  CHECK(marks_x.empty());
}

TEST_CASE("canonical_decompose rejects non-graphemes") {
  CHECK_THROWS_AS(canonical_decompose(""), NotSingleGrapheme);
  CHECK_THROWS_AS(canonical_decompose("ab"), NotSingleGrapheme);
  CHECK_THROWS_AS(canonical_decompose("́a"), NotSingleGrapheme);
  CHECK_THROWS_AS(canonical_decompose("áb"), NotSingleGrapheme);
}

TEST_CASE("recomposition reproduces canonical equivalence") {
  for (const char* input : {"á", "ẹ́", "é", "ṣ", "x"}) {
    auto [base, marks] = canonical_decompose(input);
    std::u32string rebuilt{base};
    rebuilt.append(marks.begin(), marks.end());
    CHECK(to_nfc(rebuilt) == to_nfc(utf8_decode(input)));
  }
}

TEST_CASE("letter table covers the Yoruba orthography in both cases") {
  struct Entry {
    const char* letter;
    Codepoint base;
    Codepoint mark;
  };
  const Entry entries[] = {
      {"á", U'a', kCombiningAcute},   {"à", U'a', kCombiningGrave},
      {"ā", U'a', kCombiningMacron},  {"é", U'e', kCombiningAcute},
      {"è", U'e', kCombiningGrave},   {"í", U'i', kCombiningAcute},
      {"ì", U'i', kCombiningGrave},   {"ó", U'o', kCombiningAcute},
      {"ò", U'o', kCombiningGrave},   {"ú", U'u', kCombiningAcute},
      {"ù", U'u', kCombiningGrave},   {"ẹ", U'e', kCombiningDotBelow},
      {"ọ", U'o', kCombiningDotBelow}, {"ṣ", U's', kCombiningDotBelow},
      {"ń", U'n', kCombiningAcute},   {"ǹ", U'n', kCombiningGrave},
      {"ḿ", U'm', kCombiningAcute},   {"Á", U'A', kCombiningAcute},
      {"Ẹ", U'E', kCombiningDotBelow}, {"Ọ", U'O', kCombiningDotBelow},
      {"Ṣ", U'S', kCombiningDotBelow}, {"Ǹ", U'N', kCombiningGrave},
  };
  for (const Entry& entry : entries) {
    const Codepoint cp = utf8_decode(entry.letter)[0];
    const auto decomposed = decompose_letter(cp);
    REQUIRE(decomposed.has_value());
    CHECK(decomposed->base == entry.base);  // case preserved
    CHECK(decomposed->mark == entry.mark);
    const auto recomposed = compose_letter(entry.base, entry.mark);
    REQUIRE(recomposed.has_value());
    CHECK(*recomposed == cp);  // exactly one entry per letter
  }
  CHECK(!decompose_letter(U'x').has_value());
  CHECK(!decompose_letter(0x00FC).has_value());  // ü: diaeresis is outside the classes
}

TEST_CASE("markup: wiki links keep visible text") {
  CHECK(strip_markup("[[ultraviolet]]") == "ultraviolet");
  CHECK(strip_markup("[[hydrocarbon|haidrokarbon]]") == "haidrokarbon");
  CHECK(strip_markup("plain text") == "plain text");
}

TEST_CASE("markup: tags removed, unbalanced brackets kept") {
  CHECK(strip_markup("a <b>bold</b> c") == "a bold c");
  CHECK(strip_markup("x < y") == "x < y");
  CHECK(strip_markup("[[open") == "[[open");
  CHECK(strip_markup("a ]] b") == "a ]] b");
  CHECK(strip_markup("<ref name=\"x\">cite</ref> body") == "cite body");
}

TEST_CASE("markup inside normalize_text honors the policy flag") {
  NormalizationPolicy with_markup{true, true, true};
  CHECK(normalize_text("dojuko imọle [[ultraviolet]] lati", with_markup) ==
        "dojuko imole ultraviolet lati");
  CHECK(normalize_text("[[a|b]]", kFull) == "[[a|b]]");
}

TEST_CASE("utf8 round trip over the repertoire") {
  Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    const std::string text = random_text(rng, rng.below(2) == 0, 1 + rng.below(40));
    CHECK(utf8_encode(utf8_decode(text)) == text);
  }
}

}  // TEST_SUITE
