#include "agora/context.hpp"

#include "agora/errors.hpp"
#include "agora/prompt.hpp"

namespace agora {

namespace {

void append_block(std::string& out, std::string_view block) {
  if (block.empty()) return;
  if (!out.empty()) out += '\n';
  out += block;
}

const std::vector<Message>* round_at(const DiscussionState& state, int round_index) {
  if (round_index < 1 || round_index > state.current_round()) return nullptr;
  return &state.transcript.rounds[static_cast<std::size_t>(round_index - 1)];
}

Message summary_message(const DiscussionState& state, std::string_view speaker,
                        const AgentReply& reply, Purpose purpose) {
  Message m;
  m.round_index = state.current_round();
  m.speaker = std::string(speaker);
  m.content = reply.content;
  m.input_tokens = reply.input_tokens;
  m.output_tokens = reply.output_tokens;
  m.purpose = purpose;
  return m;
}

}  // namespace

bool is_visible_to(const Message& message, std::string_view viewer, const DiscussionState& state) {
  if (message.purpose != Purpose::kDiscussion) return false;
  return state.is_instructor(viewer) || message.speaker == viewer ||
         message.addressees.includes(viewer);
}

std::string render_round_log(const DiscussionState& state, int round_index,
                             std::string_view viewer) {
  std::string out;
  if (const auto* round = round_at(state, round_index)) {
    for (const auto& m : *round) {
      if (is_visible_to(m, viewer, state)) append_block(out, render_message(m));
    }
  }
  return out;
}

std::string render_full_history(const DiscussionState& state) {
  std::string out;
  for (const auto& round : state.transcript.rounds) {
    for (const auto& m : round) {
      if (m.purpose == Purpose::kDiscussion) append_block(out, render_message(m));
    }
  }
  return out;
}

AgentView build_view(std::string_view agent_id, const DiscussionState& state,
                     std::string turn_instruction) {
  AgentView view;
  view.task_statement = task_statement(*state.task);
  view.turn_instruction = std::move(turn_instruction);

  if (state.is_instructor(agent_id)) {
    view.role_preamble = instructor_preamble(state.discussion_ids());
    view.visible_history = render_full_history(state);
    return view;
  }

  const auto seg = state.segments.find(agent_id);
  if (seg == state.segments.end()) {
    throw ParamError("agent '" + std::string(agent_id) + "' is not on the discussion roster");
  }
  view.role_preamble = discussion_preamble(*seg->second);

  const int round = state.current_round();
  std::string history;
  switch (state.config.strategy.context) {
    case ContextStrategy::kFullLastRoundLog:
      history = render_round_log(state, round - 1, agent_id);
      break;
    case ContextStrategy::kSelfSummarized: {
      if (auto it = state.summaries.per_agent.find(agent_id); it != state.summaries.per_agent.end()) {
        history = it->second.prior;
      }
      append_block(history, render_round_log(state, round - 1, agent_id));
      break;
    }
    case ContextStrategy::kInstructorSummary:
      history = state.summaries.instructor_summary.value_or(std::string());
      break;
  }
  if (is_sequential(state.config.strategy)) {
    append_block(history, render_round_log(state, round, agent_id));
  }
  view.visible_history = std::move(history);
  return view;
}

TurnRequest make_request(const DiscussionState& state, std::string_view agent_id, TurnKind kind,
                         AgentView view) {
  TurnRequest req;
  req.agent_id = std::string(agent_id);
  req.agent_kind = state.is_instructor(agent_id) ? AgentKind::kInstructor : AgentKind::kDiscussion;
  req.kind = kind;
  req.view = std::move(view);
  req.round_index = state.current_round();
  req.seed = state.config.seed;
  req.label_set = state.task->label_set;
  for (const auto& id : state.discussion_ids()) {
    if (id != agent_id) req.peers.push_back(id);
  }
  if (req.agent_kind == AgentKind::kInstructor) req.peers = state.discussion_ids();
  req.point_to_point = kind == TurnKind::kDiscussion &&
                       state.config.strategy.interaction == InteractionPattern::kSelectivePointToPoint;
  return req;
}

Message update_self_summary(std::string_view agent_id, DiscussionState& state, Backend& backend) {
  if (state.current_round() < 1) throw ParamError("no completed round to summarize");
  auto& slot = state.summaries.per_agent[std::string(agent_id)];

  AgentView view = build_view(agent_id, state, self_summary_instruction());
  std::string material = slot.latest;
  append_block(material, render_round_log(state, state.current_round(), agent_id));
  view.visible_history = std::move(material);

  const AgentReply reply =
      respond(backend, make_request(state, agent_id, TurnKind::kSummary, std::move(view)));
  slot.prior = std::move(slot.latest);
  slot.latest = reply.content;
  return summary_message(state, agent_id, reply, Purpose::kSelfSummary);
}

Message update_instructor_summary(DiscussionState& state, Backend& backend) {
  if (!state.instructor) throw ParamError("instructor summary requires an instructor");
  if (state.current_round() < 1) throw ParamError("no completed round to summarize");
  const std::string& id = state.instructor->id;

  AgentView view = build_view(id, state, instructor_summary_instruction());
  std::string material = state.summaries.instructor_summary.value_or(std::string());
  append_block(material, render_round_log(state, state.current_round(), id));
  view.visible_history = std::move(material);

  const AgentReply reply = respond(backend, make_request(state, id, TurnKind::kSummary, std::move(view)));
  state.summaries.instructor_summary = reply.content;
  return summary_message(state, id, reply, Purpose::kInstructorSummary);
}

}  // namespace agora
