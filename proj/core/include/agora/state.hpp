#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agora/agent.hpp"
#include "agora/decision.hpp"
#include "agora/strategy.hpp"
#include "agora/task.hpp"
#include "agora/transcript.hpp"

namespace agora {

struct SelfSummary {
  std::string latest;  // covers rounds 1..r after round r
  std::string prior;   // the value `latest` had before its last replacement
};

struct SummaryState {
  std::map<std::string, SelfSummary, std::less<>> per_agent;  // C2 only
  std::optional<std::string> instructor_summary;              // C3 only
};

/// Mutable state of one discussion. Owned and mutated by a single engine thread.
struct DiscussionState {
  const TaskInstance* task = nullptr;
  StrategyConfig config;
  std::vector<AgentSpec> discussion_agents;  // roster order
  std::optional<AgentSpec> instructor;
  std::map<std::string, const Segment*, std::less<>> segments;  // agent id -> its segment
  Transcript transcript;
  SummaryState summaries;
  PredictionBoard board;
  int empty_round_streak = 0;

  /// Index of the round being executed (the last round in the transcript).
  int current_round() const { return static_cast<int>(transcript.rounds.size()); }
  std::vector<std::string> discussion_ids() const;
  bool is_instructor(std::string_view agent_id) const {
    return instructor && instructor->id == agent_id;
  }
  const AgentSpec& agent(std::string_view agent_id) const;
  std::vector<Message>& open_round() { return transcript.rounds.back(); }
};

/// Validates the roster against task and strategy and initialises state.
/// Throws ParamError on a roster that cannot run the strategy.
DiscussionState make_state(const TaskInstance& task, const StrategyConfig& config,
                           const std::vector<AgentSpec>& roster);

}  // namespace agora
