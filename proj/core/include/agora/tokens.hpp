#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace agora {

enum class TokenScheme : std::uint8_t {
  kProviderReported,  // usage fields from an HTTP backend
  kWhitespace,        // maximal non-whitespace runs
  kCharsDiv4,         // ceil(unicode scalars / 4)
};

/// Counts tokens under a local scheme. kProviderReported cannot be computed
/// locally and throws ParamError.
std::int64_t count_tokens(std::string_view text, TokenScheme scheme);

std::string_view to_string(TokenScheme scheme);
TokenScheme parse_token_scheme(std::string_view name);

}  // namespace agora
