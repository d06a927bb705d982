#include "agora/tokens.hpp"

#include "agora/errors.hpp"

namespace agora {

namespace {

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

}  // namespace

std::int64_t count_tokens(std::string_view text, TokenScheme scheme) {
  switch (scheme) {
    case TokenScheme::kWhitespace: {
      std::int64_t runs = 0;
      bool in_run = false;
      for (unsigned char c : text) {
        if (is_space(c)) {
          in_run = false;
        } else if (!in_run) {
          in_run = true;
          ++runs;
        }
      }
      return runs;
    }
    case TokenScheme::kCharsDiv4: {
      std::int64_t scalars = 0;
      for (unsigned char c : text) {
        if ((c & 0xC0) != 0x80) ++scalars;  // skip UTF-8 continuation bytes
      }
      return (scalars + 3) / 4;
    }
    case TokenScheme::kProviderReported:
      break;
  }
  throw ParamError("provider_reported tokens cannot be counted locally");
}

std::string_view to_string(TokenScheme scheme) {
  switch (scheme) {
    case TokenScheme::kProviderReported:
      return "provider_reported";
    case TokenScheme::kWhitespace:
      return "whitespace";
    case TokenScheme::kCharsDiv4:
      return "chars_div_4";
  }
  return "unknown";
}

TokenScheme parse_token_scheme(std::string_view name) {
  if (name == "provider_reported") return TokenScheme::kProviderReported;
  if (name == "whitespace") return TokenScheme::kWhitespace;
  if (name == "chars_div_4") return TokenScheme::kCharsDiv4;
  throw ParamError("unknown token scheme '" + std::string(name) + "'");
}

}  // namespace agora
