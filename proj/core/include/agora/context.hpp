#pragma once

#include <string>
#include <string_view>

#include "agora/agent.hpp"
#include "agora/state.hpp"

namespace agora {

/// True when `viewer` may see `message` as dialogue: discussion purpose, and
/// either broadcast, addressed to the viewer, spoken by the viewer, or the
/// viewer is the instructor.
bool is_visible_to(const Message& message, std::string_view viewer, const DiscussionState& state);

/// Rendering of round `round_index`'s discussion messages visible to `viewer`.
std::string render_round_log(const DiscussionState& state, int round_index,
                             std::string_view viewer);

/// Every discussion message so far, unfiltered (instructor control view).
std::string render_full_history(const DiscussionState& state);

/// The agent's view for its next turn under the strategy's context rule.
/// Discussion agents: C1 previous round log, C2 prior self summary plus the
/// previous round log, C3 the instructor summary; sequential patterns add the
/// current round's earlier messages. The instructor sees the full history.
AgentView build_view(std::string_view agent_id, const DiscussionState& state,
                     std::string turn_instruction);

/// Request scaffold carrying labels, peers and round/seed for `agent_id`.
TurnRequest make_request(const DiscussionState& state, std::string_view agent_id, TurnKind kind,
                         AgentView view);

/// C2: summarizes (stored summary + the just-completed round's log) for one
/// agent and replaces its stored summary. Returns the self_summary message.
Message update_self_summary(std::string_view agent_id, DiscussionState& state, Backend& backend);

/// C3: the instructor summarizes (stored summary + the just-completed round's
/// full log); the result replaces the shared summary.
Message update_instructor_summary(DiscussionState& state, Backend& backend);

}  // namespace agora
