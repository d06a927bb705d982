#include "agora/decision.hpp"

#include <limits>

#include "agora/context.hpp"
#include "agora/errors.hpp"
#include "agora/state.hpp"

namespace agora {

std::optional<std::string> detect_consensus(const PredictionBoard& board,
                                            const std::vector<std::string>& roster) {
  if (roster.empty()) return std::nullopt;
  const std::string* agreed = nullptr;
  for (const auto& id : roster) {
    const auto it = board.entries.find(id);
    if (it == board.entries.end()) return std::nullopt;
    if (agreed && *agreed != it->second.label) return std::nullopt;
    agreed = &it->second.label;
  }
  return *agreed;
}

std::string majority_vote(const PredictionBoard& board, const std::vector<std::string>& roster,
                          TieRule tie_rule) {
  struct Tally {
    int count = 0;
    std::size_t first_index = std::numeric_limits<std::size_t>::max();
  };
  std::map<std::string, Tally, std::less<>> tallies;
  for (std::size_t i = 0; i < roster.size(); ++i) {
    const auto it = board.entries.find(roster[i]);
    if (it == board.entries.end()) continue;
    auto& t = tallies[it->second.label];
    ++t.count;
    t.first_index = std::min(t.first_index, i);
  }
  if (tallies.empty()) throw NoPredictions("no roster agent holds a prediction");

  const std::string* winner = nullptr;
  const Tally* best = nullptr;
  for (const auto& [label, tally] : tallies) {  // std::map iterates labels in lexicographic order
    if (!best || tally.count > best->count ||
        (tally.count == best->count && tie_rule == TieRule::kLowestRosterIndex &&
         tally.first_index < best->first_index)) {
      winner = &label;
      best = &tally;
    }
  }
  return *winner;
}

RulingResult instructor_rule(const DiscussionState& state, Backend& backend) {
  if (!state.instructor) throw ParamError("instructor ruling requires centralized governance");
  const std::string& id = state.instructor->id;
  const auto& labels = state.task->label_set;

  auto control_message = [&](const AgentReply& reply) {
    Message m;
    m.round_index = state.current_round();
    m.speaker = id;
    m.content = reply.content;
    m.input_tokens = reply.input_tokens;
    m.output_tokens = reply.output_tokens;
    m.purpose = Purpose::kInstructorControl;
    return m;
  };

  RulingResult result;
  const AgentReply reply = respond(
      backend, make_request(state, id, TurnKind::kControl,
                            build_view(id, state, control_instruction(labels))));
  result.messages.push_back(control_message(reply));
  if (reply.control->finalize) {
    result.messages.back().prediction = reply.control->label;
    result.ruling = InstructorRuling::finish(reply.control->label);
    return result;
  }
  if (state.current_round() < state.config.max_rounds) {
    result.ruling = InstructorRuling::proceed();
    return result;
  }

  const AgentReply forced = respond(
      backend,
      make_request(state, id, TurnKind::kFinal, build_view(id, state, final_instruction(labels))));
  result.messages.push_back(control_message(forced));
  result.messages.back().prediction = forced.prediction;
  result.ruling = InstructorRuling::finish(*forced.prediction);
  return result;
}

}  // namespace agora
