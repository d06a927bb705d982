#include <gtest/gtest.h>

#include <random>

#include "agora/errors.hpp"
#include "agora/tokens.hpp"
#include "test_support.hpp"

namespace agora {
namespace {

TEST(CountTokens, WhitespaceRuns) {
  EXPECT_EQ(count_tokens("a b  c", TokenScheme::kWhitespace), 3);
  EXPECT_EQ(count_tokens("", TokenScheme::kWhitespace), 0);
  EXPECT_EQ(count_tokens(" \t\n ", TokenScheme::kWhitespace), 0);
  EXPECT_EQ(count_tokens("\nPREDICTION: home\r\n", TokenScheme::kWhitespace), 2);
}

TEST(CountTokens, CharsDivFourCountsScalars) {
  EXPECT_EQ(count_tokens("abcdefgh", TokenScheme::kCharsDiv4), 2);
  EXPECT_EQ(count_tokens("abcdefghi", TokenScheme::kCharsDiv4), 3);
  EXPECT_EQ(count_tokens("", TokenScheme::kCharsDiv4), 0);
  // Four two-byte scalars: one token, not two.
  EXPECT_EQ(count_tokens("\xC3\xA9\xC3\xA9\xC3\xA9\xC3\xA9", TokenScheme::kCharsDiv4), 1);
}

TEST(CountTokens, ProviderReportedIsNotLocal) {
  EXPECT_THROW(count_tokens("x", TokenScheme::kProviderReported), ParamError);
}

TEST(CountTokens, WhitespaceMatchesStreamOracleOnRandomText) {
  std::mt19937_64 rng(17);
  const std::string alphabet = "ab \t\n\r\v\fXY.:";
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    const auto len = rng() % 60;
    for (std::size_t i = 0; i < len; ++i) text += alphabet[rng() % alphabet.size()];
    EXPECT_EQ(count_tokens(text, TokenScheme::kWhitespace), testing::whitespace_oracle(text))
        << "text: " << text;
  }
}

TEST(TokenSchemeNames, RoundTrip) {
  for (auto s : {TokenScheme::kProviderReported, TokenScheme::kWhitespace, TokenScheme::kCharsDiv4}) {
    EXPECT_EQ(parse_token_scheme(to_string(s)), s);
  }
  EXPECT_THROW(parse_token_scheme("bpe"), ParamError);
}

}  // namespace
}  // namespace agora
