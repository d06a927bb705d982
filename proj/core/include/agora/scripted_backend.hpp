#pragma once

// Deterministic stand-ins for LLM agents. A scripted reply is a pure function
// of (view, round, config): agents read evidence markers from their own
// segment and peers' `PREDICTION:` lines from the rendered history.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agora/agent.hpp"

namespace agora {

enum class Persuasion {
  kAdoptMajoritySeen,   // switch to the modal label among visible latest predictions
  kAdoptFirstInformed,  // switch to the label of the first informed speaker seen
  kNever,
};

std::string_view to_string(Persuasion persuasion);
Persuasion parse_persuasion(std::string_view name);

struct SummarizerRule {
  enum class Kind { kIdentityConcat, kTruncateChars };
  Kind kind = Kind::kIdentityConcat;
  std::size_t max_chars = 0;  // kTruncateChars only

  static SummarizerRule identity() { return {}; }
  static SummarizerRule truncate(std::size_t n) { return {Kind::kTruncateChars, n}; }

  std::string apply(std::string_view material) const;
};

/// "identity_concat" or "truncate_to_n_chars(N)" (also accepts "truncate:N").
SummarizerRule parse_summarizer(std::string_view text);
std::string to_string(const SummarizerRule& rule);

struct ScriptedAgentConfig {
  std::optional<std::string> initial_label;  // unset: read from the agent's segment markers
  int stubbornness = 0;                      // rounds <= stubbornness never change belief
  Persuasion persuasion = Persuasion::kAdoptMajoritySeen;
  std::optional<bool> is_informed;  // unset: informed iff the segment carries a verdict
  SummarizerRule summarizer;
  std::vector<std::string> fixed_addressees;  // I4 turns address exactly these when set
  TokenScheme scheme = TokenScheme::kWhitespace;
};

class ScriptedAgent final : public Backend {
 public:
  explicit ScriptedAgent(ScriptedAgentConfig config,
                         const PromptTemplates& templates = PromptTemplates::defaults());

  RawReply complete(const TurnRequest& request) override;
  TokenScheme token_scheme() const override { return config_.scheme; }
  const ScriptedAgentConfig& config() const { return config_; }

 private:
  ScriptedAgentConfig config_;
  PromptTemplates templates_;
};

enum class ControlRule {
  kSettleOnEvidence,  // finalize on an informed speaker's label, or on unanimity
  kAlwaysContinue,
};

std::string_view to_string(ControlRule rule);
ControlRule parse_control_rule(std::string_view name);

struct ScriptedInstructorConfig {
  ControlRule control = ControlRule::kSettleOnEvidence;
  SummarizerRule summarizer;
  TokenScheme scheme = TokenScheme::kWhitespace;
};

class ScriptedInstructor final : public Backend {
 public:
  explicit ScriptedInstructor(ScriptedInstructorConfig config,
                              const PromptTemplates& templates = PromptTemplates::defaults());

  RawReply complete(const TurnRequest& request) override;
  TokenScheme token_scheme() const override { return config_.scheme; }

 private:
  ScriptedInstructorConfig config_;
  PromptTemplates templates_;
};

/// One rendered history entry, as parsed back out of a visible_history.
struct HistoryEntry {
  int round_index = 0;
  std::string speaker;
  std::string content;
};

std::vector<HistoryEntry> parse_history(std::string_view history);

/// Marker scripted agents put in their content to flag verdict-bearing evidence.
inline constexpr std::string_view kInformedTag = "(informed)";

}  // namespace agora
