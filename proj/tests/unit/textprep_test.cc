#include "senti/textprep.h"

#include <gtest/gtest.h>

#include <string>

#include "senti/error.h"
#include "senti/keyed_rng.h"
#include "senti/unicode.h"
#include "test_support.h"

namespace senti {
namespace {

using testing::kNeg;
using testing::kPos;
using testing::make_split;

TEST(ReplaceUrlsUsersTest, TagsMentionsAndLinks) {
  TagCounts counts;
  EXPECT_EQ(replace_urls_users("@rafi দেখুন https://t.co/abc", &counts),
            "USER দেখুন URL");
  EXPECT_EQ(counts.urls, 1u);
  EXPECT_EQ(counts.users, 1u);
}

TEST(ReplaceUrlsUsersTest, PlainTextUnchanged) {
  EXPECT_EQ(replace_urls_users("no links here"), "no links here");
}

TEST(ReplaceUrlsUsersTest, AlreadyTaggedUnchanged) {
  EXPECT_EQ(replace_urls_users("URL USER"), "URL USER");
}

TEST(ReplaceUrlsUsersTest, WwwAndEmailLikeText) {
  EXPECT_EQ(replace_urls_users("see www.example.com now"), "see URL now");
  // An @ inside a word is not a mention.
  EXPECT_EQ(replace_urls_users("mail me at a@b"), "mail me at a@b");
}

// Idempotence oracle on random strings built from URL/mention fragments.
TEST(ReplaceUrlsUsersTest, IdempotentOnRandomInputs) {
  const std::vector<std::string> parts = {
      "@", "@@", "user", "http", "://", "www.", "x.com", " ", "\t", "URL",
      "USER", "ভালো", "/", "a", "_", "."};
  KeyedRng rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string s;
    const std::size_t n = rng.below(12);
    for (std::size_t i = 0; i < n; ++i) s += parts[rng.below(parts.size())];
    const std::string once = replace_urls_users(s);
    EXPECT_EQ(replace_urls_users(once), once) << "input: " << s;
  }
}

TEST(NormalizeTest, IdentityAndNfc) {
  const auto& reg = NormalizerRegistry::global();
  EXPECT_EQ(normalize("abc", reg.get("identity")), "abc");
  EXPECT_EQ(normalize("cafe\xCC\x81", reg.get("nfc")), "caf\xC3\xA9");
}

TEST(NormalizeTest, CustomNormalizerPlugsIn) {
  Normalizer upper = [](std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
  };
  EXPECT_EQ(normalize("ab", upper), "AB");
  NormalizerRegistry::global().add("test-upper", upper);
  EXPECT_TRUE(NormalizerRegistry::global().contains("test-upper"));
  EXPECT_EQ(normalize("ab", NormalizerRegistry::global().get("test-upper")), "AB");
}

TEST(NormalizeTest, UnknownNameThrows) {
  EXPECT_THROW(NormalizerRegistry::global().get("nope"), ConfigError);
}

TEST(NormalizeTest, FailingNormalizerWrapped) {
  Normalizer bad = [](std::string_view) -> std::string {
    throw std::runtime_error("boom");
  };
  EXPECT_THROW(normalize("x", bad), NormalizationError);
  EXPECT_THROW(normalize("ab\xff", NormalizerRegistry::global().get("nfc")),
               NormalizationError);
}

TEST(TokenizerTest, EncodeMarksSpecials) {
  HashTokenizer tok(1000);
  const TokenSequence seq = encode_truncate("এক দুই তিন চার পাঁচ", tok, 128);
  ASSERT_EQ(seq.size(), 7u);
  EXPECT_TRUE(seq.valid());
  EXPECT_LE(seq.size(), 128u);
  EXPECT_TRUE(seq.special_mask.front());
  EXPECT_TRUE(seq.special_mask.back());
  EXPECT_EQ(seq.tokens.front(), tok.bos_id());
  EXPECT_EQ(seq.tokens.back(), tok.eos_id());
  EXPECT_EQ(seq.content_count(), 5u);
  for (std::size_t i = 1; i + 1 < seq.size(); ++i) {
    EXPECT_GE(seq.tokens[i], HashTokenizer::kFirstContentId);
    EXPECT_LT(seq.tokens[i], 1000);
  }
}

TEST(TokenizerTest, LongTextTruncatedToMaxLength) {
  HashTokenizer tok(1000);
  std::string text;
  for (int i = 0; i < 500; ++i) text += "w" + std::to_string(i) + " ";
  const TokenSequence seq = encode_truncate(text, tok, 128);
  EXPECT_EQ(seq.size(), 128u);
  EXPECT_TRUE(seq.valid());
  // Head is kept.
  EXPECT_EQ(seq.tokens[1], tok.token_id("w0"));
  EXPECT_EQ(seq.tokens[126], tok.token_id("w125"));
}

TEST(TokenizerTest, EmptyTextThrows) {
  HashTokenizer tok(1000);
  EXPECT_THROW(encode_truncate("", tok, 128), EmptyTextError);
  EXPECT_THROW(encode_truncate("   ", tok, 128), EmptyTextError);
  EXPECT_THROW(encode_truncate("x", tok, 2), ConfigError);
}

TEST(TokenizerTest, DeterministicIds) {
  HashTokenizer a(4096), b(4096);
  EXPECT_EQ(a.content_ids("ভালো খবর"), b.content_ids("ভালো খবর"));
  EXPECT_THROW(HashTokenizer(4), ConfigError);
  EXPECT_THROW(make_tokenizer("bpe", 100), ConfigError);
}

TEST(PreprocessSplitTest, TagsThenNormalizes) {
  const auto split = make_split({{"a", "@x cafe\xCC\x81 https://y.z", kPos}});
  const auto r = preprocess_split(split, NormalizerRegistry::global().get("nfc"), true);
  ASSERT_EQ(r.split.size(), 1u);
  EXPECT_EQ(r.split.examples[0].text, "USER caf\xC3\xA9 URL");
  EXPECT_EQ(r.stats.url_replacements, 1u);
  EXPECT_EQ(r.stats.user_replacements, 1u);
}

TEST(PreprocessSplitTest, CountsDuplicates) {
  const auto split = make_split(
      {{"a", "x", kPos}, {"b", "x", kPos}, {"c", "x", kPos}, {"d", "y", kNeg}});
  const auto r = preprocess_split(split, NormalizerRegistry::global().get("nfc"), true);
  EXPECT_EQ(r.stats.rows_in, 4u);
  EXPECT_EQ(r.stats.rows_out, 2u);
  EXPECT_EQ(r.stats.duplicates_removed, 2u);
  const auto kept = preprocess_split(split, NormalizerRegistry::global().get("nfc"), false);
  EXPECT_EQ(kept.split.size(), 4u);
}

TEST(PreprocessSplitTest, Deterministic) {
  const auto split = make_split({{"a", "@u ভালো https://q", kPos}, {"b", "খারাপ", kNeg}});
  const auto norm = NormalizerRegistry::global().get("nfc");
  EXPECT_EQ(preprocess_split(split, norm, true).split,
            preprocess_split(split, norm, true).split);
}

TEST(PreprocessSplitTest, TextThatBecomesEmptyThrows) {
  Normalizer blank = [](std::string_view) { return std::string(); };
  const auto split = make_split({{"a", "x", kPos}});
  EXPECT_THROW(preprocess_split(split, blank, true), EmptyTextError);
}

TEST(UnicodeTest, Helpers) {
  EXPECT_TRUE(unicode::is_valid_utf8("ভালো"));
  EXPECT_FALSE(unicode::is_valid_utf8("\xc3("));
  EXPECT_EQ(unicode::trim("\xe2\x80\x83 ab \n"), "ab");
  EXPECT_EQ(unicode::case_fold("LoVe"), "love");
}

}  // namespace
}  // namespace senti
