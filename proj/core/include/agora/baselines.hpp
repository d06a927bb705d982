#pragma once

#include <vector>

#include "agora/agent.hpp"
#include "agora/decision.hpp"
#include "agora/metrics.hpp"
#include "agora/task.hpp"
#include "agora/transcript.hpp"

namespace agora {

/// One agent, one call, every segment concatenated in schema order. The
/// transcript is a single round holding that call.
Transcript transcript_agent_all(const TaskInstance& task, Backend& backend, std::uint64_t seed = 0);

/// One independent call per segment (agents a1..aN), combined by majority
/// vote. `backends` holds one entry per segment, or a single shared entry.
/// Reported as one round; `RunRecord::turns` carries the call count.
Transcript transcript_mv(const TaskInstance& task, const std::vector<Backend*>& backends,
                         std::uint64_t seed = 0, TieRule tie_rule = TieRule::kLowestRosterIndex);

RunRecord baseline_agent_all(const TaskInstance& task, Backend& backend, std::uint64_t seed = 0);
RunRecord baseline_mv(const TaskInstance& task, const std::vector<Backend*>& backends,
                      std::uint64_t seed = 0, TieRule tie_rule = TieRule::kLowestRosterIndex);

std::vector<RunRecord> baseline_agent_all(const std::vector<TaskInstance>& tasks, Backend& backend,
                                          std::uint64_t seed = 0);
std::vector<RunRecord> baseline_mv(const std::vector<TaskInstance>& tasks,
                                   const std::vector<Backend*>& backends, std::uint64_t seed = 0);

}  // namespace agora
