#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "agora/agent.hpp"
#include "agora/decision.hpp"
#include "agora/rng.hpp"
#include "agora/state.hpp"
#include "agora/strategy.hpp"
#include "agora/task.hpp"
#include "agora/transcript.hpp"

namespace agora {

using BackendBindings = std::map<std::string, std::shared_ptr<Backend>, std::less<>>;

struct RoundPlan {
  std::vector<std::string> speakers;
  bool concurrent = false;  // I1: every view is a pre-round snapshot
};

struct EngineOptions {
  bool parallel_fanout = false;  // run I1 backend calls concurrently
  TieRule tie_rule = TieRule::kLowestRosterIndex;
};

struct DiscussionResult {
  Transcript transcript;
  Outcome outcome;
};

/// Round-based discussion state machine. Each round: plan speakers, execute
/// their turns, refresh summaries, then check termination. Holds no per-run
/// state, so one engine may drive many discussions concurrently.
class DiscussionEngine {
 public:
  explicit DiscussionEngine(BackendBindings bindings, EngineOptions options = {});

  /// Throws ConstraintViolation / ParamError before the first round, and
  /// BackendError / ProtocolError (carrying the partial transcript) during it.
  DiscussionResult run(const TaskInstance& task, const StrategyConfig& config,
                       const std::vector<AgentSpec>& roster) const;

  /// Speakers for the open round. P2 intent and P3 plan calls are appended to
  /// the open round as messages.
  RoundPlan plan_round(DiscussionState& state, Rng& rng) const;

  /// Runs the plan's discussion turns, appends them to the open round and the
  /// prediction board, and returns them.
  std::vector<Message> execute_round(DiscussionState& state, const RoundPlan& plan) const;

  Backend& backend_for(const AgentSpec& agent) const;
  std::string token_scheme_label(const std::vector<AgentSpec>& roster) const;

 private:
  BackendBindings bindings_;
  EngineOptions options_;
};

DiscussionResult run_discussion(const TaskInstance& task, const StrategyConfig& config,
                                const std::vector<AgentSpec>& roster,
                                const BackendBindings& bindings, EngineOptions options = {});

/// Agents a1..aN bound to `discussion_backend`, one per task segment in order,
/// plus an `instructor` bound to `instructor_backend` under centralized governance.
std::vector<AgentSpec> default_roster(const TaskInstance& task, const Strategy& strategy,
                                      const std::string& discussion_backend,
                                      const std::string& instructor_backend = "instructor");

}  // namespace agora
