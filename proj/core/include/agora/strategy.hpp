#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace agora {

enum class Governance : std::uint8_t {
  kDecentralized = 1,  // G1
  kCentralized = 2,    // G2
};

enum class Participation : std::uint8_t {
  kFull = 1,               // P1
  kSelective = 2,          // P2
  kInstructorDecided = 3,  // P3
};

enum class InteractionPattern : std::uint8_t {
  kSimultaneous = 1,           // I1
  kOrderedSequential = 2,      // I2
  kRandomSequential = 3,       // I3
  kSelectivePointToPoint = 4,  // I4
};

enum class ContextStrategy : std::uint8_t {
  kFullLastRoundLog = 1,   // C1
  kSelfSummarized = 2,     // C2
  kInstructorSummary = 3,  // C3
};

/// One point of the governance x participation x interaction x context lattice.
struct Strategy {
  Governance governance = Governance::kDecentralized;
  Participation participation = Participation::kFull;
  InteractionPattern interaction = InteractionPattern::kSimultaneous;
  ContextStrategy context = ContextStrategy::kFullLastRoundLog;

  friend bool operator==(const Strategy&, const Strategy&) = default;
};

inline constexpr int kDefaultMaxRounds = 10;

/// A strategy plus the run controls needed to reproduce a discussion.
struct StrategyConfig {
  Strategy strategy;
  int max_rounds = kDefaultMaxRounds;
  std::uint64_t seed = 0;
};

/// Parses `G<d>-P<d>-I<d>-C<d>`. Does not check cross-constraints.
/// Throws SyntaxError (with byte offset) or OutOfRangeError.
Strategy parse_strategy(std::string_view text);

std::string format_strategy(const Strategy& strategy);

struct Validation {
  std::vector<std::string> violations;  // rule names, in rule-table order

  bool valid() const noexcept { return violations.empty(); }
};

Validation validate_strategy(const Strategy& strategy);

/// The nine legal strategies in canonical report order.
std::vector<std::string> enumerate_valid_strategies();

/// All 72 lattice points, G-major then P, I, C.
std::vector<Strategy> lattice();

/// parse + validate + run controls. Throws ConstraintViolation when invalid.
StrategyConfig make_strategy_config(std::string_view text, int max_rounds = kDefaultMaxRounds,
                                    std::uint64_t seed = 0);

inline bool is_centralized(const Strategy& s) { return s.governance == Governance::kCentralized; }
inline bool is_sequential(const Strategy& s) {
  return s.interaction != InteractionPattern::kSimultaneous;
}

}  // namespace agora
