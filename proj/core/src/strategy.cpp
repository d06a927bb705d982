#include "agora/strategy.hpp"

#include <array>
#include <functional>

#include "agora/errors.hpp"

namespace agora {

namespace {

using G = Governance;
using P = Participation;
using I = InteractionPattern;
using C = ContextStrategy;

struct Rule {
  std::string_view name;
  std::function<bool(const Strategy&)> applies;
  std::function<bool(const Strategy&)> holds;
};

bool g1p1(const Strategy& s) { return s.governance == G::kDecentralized && s.participation == P::kFull; }
bool g1p2(const Strategy& s) {
  return s.governance == G::kDecentralized && s.participation == P::kSelective;
}
bool g2p3(const Strategy& s) {
  return s.governance == G::kCentralized && s.participation == P::kInstructorDecided;
}

const std::vector<Rule>& rules() {
  static const std::vector<Rule> table = {
      {"P1-requires-G1", [](const Strategy& s) { return s.participation == P::kFull; },
       [](const Strategy& s) { return s.governance == G::kDecentralized; }},
      {"P2-requires-G1", [](const Strategy& s) { return s.participation == P::kSelective; },
       [](const Strategy& s) { return s.governance == G::kDecentralized; }},
      {"P3-requires-G2", [](const Strategy& s) { return s.participation == P::kInstructorDecided; },
       [](const Strategy& s) { return s.governance == G::kCentralized; }},
      {"I1-requires-G1-P1-or-G2-P3",
       [](const Strategy& s) { return s.interaction == I::kSimultaneous; },
       [](const Strategy& s) { return g1p1(s) || g2p3(s); }},
      {"I2-requires-G1-P1-or-G2-P3",
       [](const Strategy& s) { return s.interaction == I::kOrderedSequential; },
       [](const Strategy& s) { return g1p1(s) || g2p3(s); }},
      {"I3-requires-G1-P1", [](const Strategy& s) { return s.interaction == I::kRandomSequential; },
       g1p1},
      {"I4-requires-G1-P2",
       [](const Strategy& s) { return s.interaction == I::kSelectivePointToPoint; }, g1p2},
      {"C1-requires-G1-P1", [](const Strategy& s) { return s.context == C::kFullLastRoundLog; },
       g1p1},
      {"C2-requires-G1", [](const Strategy& s) { return s.context == C::kSelfSummarized; },
       [](const Strategy& s) { return s.governance == G::kDecentralized; }},
      {"C3-requires-G2-P3", [](const Strategy& s) { return s.context == C::kInstructorSummary; },
       g2p3},
  };
  return table;
}

struct Dimension {
  char letter;
  int max_digit;
};

constexpr std::array<Dimension, 4> kDimensions = {{{'G', 2}, {'P', 3}, {'I', 4}, {'C', 3}}};

}  // namespace

Strategy parse_strategy(std::string_view text) {
  if (text.empty()) throw SyntaxError(0, "empty strategy string");

  std::array<int, 4> digits{};
  std::size_t pos = 0;
  for (std::size_t d = 0; d < kDimensions.size(); ++d) {
    if (d > 0) {
      if (pos >= text.size() || text[pos] != '-') throw SyntaxError(pos, "expected '-'");
      ++pos;
    }
    if (pos >= text.size() || text[pos] != kDimensions[d].letter) {
      throw SyntaxError(pos, std::string("expected '") + kDimensions[d].letter + "'");
    }
    ++pos;
    if (pos >= text.size() || text[pos] < '0' || text[pos] > '9') {
      throw SyntaxError(pos, "expected a digit");
    }
    const int digit = text[pos] - '0';
    if (digit < 1 || digit > kDimensions[d].max_digit) {
      throw OutOfRangeError(std::string(1, kDimensions[d].letter) + std::to_string(digit) +
                            " is outside " + kDimensions[d].letter + "1.." +
                            kDimensions[d].letter + std::to_string(kDimensions[d].max_digit));
    }
    digits[d] = digit;
    ++pos;
  }
  if (pos != text.size()) throw SyntaxError(pos, "trailing characters");

  return Strategy{static_cast<Governance>(digits[0]), static_cast<Participation>(digits[1]),
                  static_cast<InteractionPattern>(digits[2]),
                  static_cast<ContextStrategy>(digits[3])};
}

std::string format_strategy(const Strategy& s) {
  std::string out = "G0-P0-I0-C0";
  out[1] = static_cast<char>('0' + static_cast<int>(s.governance));
  out[4] = static_cast<char>('0' + static_cast<int>(s.participation));
  out[7] = static_cast<char>('0' + static_cast<int>(s.interaction));
  out[10] = static_cast<char>('0' + static_cast<int>(s.context));
  return out;
}

Validation validate_strategy(const Strategy& strategy) {
  Validation v;
  for (const auto& rule : rules()) {
    if (rule.applies(strategy) && !rule.holds(strategy)) v.violations.emplace_back(rule.name);
  }
  return v;
}

std::vector<Strategy> lattice() {
  std::vector<Strategy> out;
  out.reserve(72);
  for (int g = 1; g <= 2; ++g)
    for (int p = 1; p <= 3; ++p)
      for (int i = 1; i <= 4; ++i)
        for (int c = 1; c <= 3; ++c)
          out.push_back({static_cast<Governance>(g), static_cast<Participation>(p),
                         static_cast<InteractionPattern>(i), static_cast<ContextStrategy>(c)});
  return out;
}

std::vector<std::string> enumerate_valid_strategies() {
  // Canonical order groups by governance, participation and context, then interaction.
  std::vector<std::string> out;
  for (int g = 1; g <= 2; ++g)
    for (int p = 1; p <= 3; ++p)
      for (int c = 1; c <= 3; ++c)
        for (int i = 1; i <= 4; ++i) {
          const Strategy s{static_cast<Governance>(g), static_cast<Participation>(p),
                           static_cast<InteractionPattern>(i), static_cast<ContextStrategy>(c)};
          if (validate_strategy(s).valid()) out.push_back(format_strategy(s));
        }
  return out;
}

StrategyConfig make_strategy_config(std::string_view text, int max_rounds, std::uint64_t seed) {
  const Strategy s = parse_strategy(text);
  auto v = validate_strategy(s);
  if (!v.valid()) throw ConstraintViolation(std::move(v.violations));
  if (max_rounds < 1) throw ParamError("max_rounds must be >= 1");
  return StrategyConfig{s, max_rounds, seed};
}

}  // namespace agora
