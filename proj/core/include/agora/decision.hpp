#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agora/agent.hpp"
#include "agora/transcript.hpp"

namespace agora {

struct DiscussionState;

struct BoardEntry {
  std::string label;
  int round_index = 0;  // round of the most recent prediction
};

/// Each discussion agent's most recent prediction. Stale entries persist so
/// agents who stay silent under P2/I4 still count.
struct PredictionBoard {
  std::map<std::string, BoardEntry, std::less<>> entries;

  void record(const std::string& agent_id, const std::string& label, int round_index) {
    entries[agent_id] = BoardEntry{label, round_index};
  }
};

/// Label iff every roster agent has an entry and all entries agree.
std::optional<std::string> detect_consensus(const PredictionBoard& board,
                                            const std::vector<std::string>& roster);

enum class TieRule {
  kLowestRosterIndex,  // tied label whose lowest-indexed predicting agent comes first
  kLabelOrder,         // tied label that sorts first lexicographically
};

/// Modal label among roster agents holding a prediction (others abstain).
/// Throws NoPredictions when nobody on the roster has predicted.
std::string majority_vote(const PredictionBoard& board, const std::vector<std::string>& roster,
                          TieRule tie_rule = TieRule::kLowestRosterIndex);

struct InstructorRuling {
  bool terminate = false;
  std::string final_label;  // set when terminate

  static InstructorRuling proceed() { return {}; }
  static InstructorRuling finish(std::string label) { return {true, std::move(label)}; }
  friend bool operator==(const InstructorRuling&, const InstructorRuling&) = default;
};

struct RulingResult {
  InstructorRuling ruling;
  std::vector<Message> messages;  // control call, plus the forced-decision call if any
};

/// Asks the instructor to CONTINUE or FINAL:<label> from the full history.
/// At the round cap a CONTINUE triggers a second, forced-decision query.
RulingResult instructor_rule(const DiscussionState& state, Backend& backend);

}  // namespace agora
