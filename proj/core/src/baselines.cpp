#include "agora/baselines.hpp"

#include "agora/errors.hpp"
#include "agora/prompt.hpp"

namespace agora {

namespace {

Transcript header(const TaskInstance& task, std::string_view name, std::uint64_t seed,
                  const Backend& backend) {
  Transcript t;
  t.task_id = task.id;
  t.scenario = std::string(to_string(task.scenario));
  t.strategy = std::string(name);
  t.seed = seed;
  t.max_rounds = 1;
  t.gold_label = task.gold_label;
  t.token_scheme = std::string(to_string(backend.token_scheme()));
  t.rounds.emplace_back();
  return t;
}

Message single_call(Backend& backend, const std::string& agent_id, const TaskInstance& task,
                    std::string preamble, std::uint64_t seed) {
  TurnRequest req;
  req.agent_id = agent_id;
  req.kind = TurnKind::kFinal;
  req.view = AgentView{std::move(preamble), task_statement(task), "",
                       final_instruction(task.label_set)};
  req.round_index = 1;
  req.seed = seed;
  req.label_set = task.label_set;
  const AgentReply reply = respond(backend, req);

  Message m;
  m.round_index = 1;
  m.speaker = agent_id;
  m.content = reply.content;
  m.prediction = reply.prediction;
  m.input_tokens = reply.input_tokens;
  m.output_tokens = reply.output_tokens;
  m.purpose = Purpose::kDiscussion;
  return m;
}

}  // namespace

Transcript transcript_agent_all(const TaskInstance& task, Backend& backend, std::uint64_t seed) {
  Transcript t = header(task, kAgentAllName, seed, backend);
  try {
    Message m = single_call(backend, "agent_all", task, combined_preamble(task.segments), seed);
    const std::string label = *m.prediction;
    t.rounds[0].push_back(std::move(m));
    t.outcome = Outcome{label, 1, Termination::kConsensus};
  } catch (RunError& e) {
    e.attach_partial(t);
    throw;
  }
  return t;
}

Transcript transcript_mv(const TaskInstance& task, const std::vector<Backend*>& backends,
                         std::uint64_t seed, TieRule tie_rule) {
  if (backends.empty() || (backends.size() != 1 && backends.size() != task.segments.size())) {
    throw ParamError("MV needs one backend per segment or a single shared backend");
  }
  Transcript t = header(task, kMajorityVoteName, seed, *backends.front());
  try {
    PredictionBoard board;
    std::vector<std::string> roster;
    for (std::size_t i = 0; i < task.segments.size(); ++i) {
      Backend& backend = *backends[backends.size() == 1 ? 0 : i];
      const std::string id = "a" + std::to_string(i + 1);
      roster.push_back(id);
      Message m = single_call(backend, id, task, discussion_preamble(task.segments[i]), seed);
      board.record(id, *m.prediction, 1);
      t.rounds[0].push_back(std::move(m));
    }
    t.outcome = Outcome{majority_vote(board, roster, tie_rule), 1, Termination::kForcedMajorityVote};
  } catch (RunError& e) {
    e.attach_partial(t);
    throw;
  }
  return t;
}

RunRecord baseline_agent_all(const TaskInstance& task, Backend& backend, std::uint64_t seed) {
  return record_from_transcript(transcript_agent_all(task, backend, seed));
}

RunRecord baseline_mv(const TaskInstance& task, const std::vector<Backend*>& backends,
                      std::uint64_t seed, TieRule tie_rule) {
  return record_from_transcript(transcript_mv(task, backends, seed, tie_rule));
}

std::vector<RunRecord> baseline_agent_all(const std::vector<TaskInstance>& tasks, Backend& backend,
                                          std::uint64_t seed) {
  std::vector<RunRecord> out;
  for (const auto& task : tasks) out.push_back(baseline_agent_all(task, backend, seed));
  return out;
}

std::vector<RunRecord> baseline_mv(const std::vector<TaskInstance>& tasks,
                                   const std::vector<Backend*>& backends, std::uint64_t seed) {
  std::vector<RunRecord> out;
  for (const auto& task : tasks) out.push_back(baseline_mv(task, backends, seed));
  return out;
}

}  // namespace agora
