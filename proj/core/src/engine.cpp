#include "agora/engine.hpp"

#include <algorithm>
#include <future>
#include <set>

#include "agora/context.hpp"
#include "agora/errors.hpp"
#include "agora/prompt.hpp"

namespace agora {

std::vector<std::string> DiscussionState::discussion_ids() const {
  std::vector<std::string> ids;
  ids.reserve(discussion_agents.size());
  for (const auto& a : discussion_agents) ids.push_back(a.id);
  return ids;
}

const AgentSpec& DiscussionState::agent(std::string_view agent_id) const {
  if (instructor && instructor->id == agent_id) return *instructor;
  for (const auto& a : discussion_agents) {
    if (a.id == agent_id) return a;
  }
  throw ParamError("unknown agent '" + std::string(agent_id) + "'");
}

DiscussionState make_state(const TaskInstance& task, const StrategyConfig& config,
                           const std::vector<AgentSpec>& roster) {
  DiscussionState state;
  state.task = &task;
  state.config = config;

  std::set<std::string> ids;
  for (const auto& a : roster) {
    if (a.id.empty()) throw ParamError("agent ids must be non-empty");
    if (!ids.insert(a.id).second) throw ParamError("duplicate agent id '" + a.id + "'");
    if (a.kind == AgentKind::kInstructor) {
      if (state.instructor) throw ParamError("at most one instructor agent is allowed");
      if (a.segment_ref) throw ParamError("the instructor holds no segment");
      state.instructor = a;
    } else {
      state.discussion_agents.push_back(a);
    }
  }

  if (is_centralized(config.strategy) && !state.instructor) {
    throw ParamError("centralized governance requires an instructor agent");
  }
  if (!is_centralized(config.strategy) && state.instructor) {
    throw ParamError("decentralized governance runs without an instructor");
  }
  if (state.discussion_agents.size() != task.segments.size()) {
    throw ParamError("task '" + task.id + "' has " + std::to_string(task.segments.size()) +
                     " segments but the roster has " +
                     std::to_string(state.discussion_agents.size()) + " discussion agents");
  }

  std::set<std::string> used;
  for (std::size_t i = 0; i < state.discussion_agents.size(); ++i) {
    const auto& a = state.discussion_agents[i];
    const Segment* seg = a.segment_ref ? task.find_segment(*a.segment_ref) : &task.segments[i];
    if (!seg) throw ParamError("agent '" + a.id + "' refers to unknown segment '" + *a.segment_ref + "'");
    if (!used.insert(seg->name).second) {
      throw ParamError("segment '" + seg->name + "' is assigned to more than one agent");
    }
    state.segments[a.id] = seg;
  }

  state.transcript.task_id = task.id;
  state.transcript.scenario = std::string(to_string(task.scenario));
  state.transcript.strategy = format_strategy(config.strategy);
  state.transcript.seed = config.seed;
  state.transcript.max_rounds = config.max_rounds;
  state.transcript.gold_label = task.gold_label;
  return state;
}

DiscussionEngine::DiscussionEngine(BackendBindings bindings, EngineOptions options)
    : bindings_(std::move(bindings)), options_(options) {}

Backend& DiscussionEngine::backend_for(const AgentSpec& agent) const {
  const auto it = bindings_.find(agent.backend);
  if (it == bindings_.end() || !it->second) {
    throw ParamError("agent '" + agent.id + "' is bound to unknown backend '" + agent.backend + "'");
  }
  return *it->second;
}

std::string DiscussionEngine::token_scheme_label(const std::vector<AgentSpec>& roster) const {
  std::set<std::string> schemes;
  for (const auto& a : roster) schemes.emplace(to_string(backend_for(a).token_scheme()));
  std::string out;
  for (const auto& s : schemes) {
    if (!out.empty()) out += '+';
    out += s;
  }
  return out;
}

RoundPlan DiscussionEngine::plan_round(DiscussionState& state, Rng& rng) const {
  const Strategy& s = state.config.strategy;
  RoundPlan plan;
  plan.concurrent = s.interaction == InteractionPattern::kSimultaneous;

  switch (s.participation) {
    case Participation::kFull:
      plan.speakers = state.discussion_ids();
      if (s.interaction == InteractionPattern::kRandomSequential) fisher_yates(plan.speakers, rng);
      break;

    case Participation::kSelective:
      for (const auto& agent : state.discussion_agents) {
        const AgentReply reply = respond(
            backend_for(agent),
            make_request(state, agent.id, TurnKind::kIntent,
                         build_view(agent.id, state, intent_instruction())));
        Message m;
        m.round_index = state.current_round();
        m.speaker = agent.id;
        m.content = reply.content;
        m.input_tokens = reply.input_tokens;
        m.output_tokens = reply.output_tokens;
        m.purpose = Purpose::kSpeakIntent;
        state.open_round().push_back(std::move(m));
        if (*reply.wants_to_speak) plan.speakers.push_back(agent.id);
      }
      break;

    case Participation::kInstructorDecided: {
      const AgentSpec& instructor = *state.instructor;
      const AgentReply reply = respond(
          backend_for(instructor),
          make_request(state, instructor.id, TurnKind::kPlan,
                       build_view(instructor.id, state, plan_instruction(state.discussion_ids()))));
      Message m;
      m.round_index = state.current_round();
      m.speaker = instructor.id;
      m.content = reply.content;
      m.input_tokens = reply.input_tokens;
      m.output_tokens = reply.output_tokens;
      m.purpose = Purpose::kInstructorControl;
      state.open_round().push_back(std::move(m));
      plan.speakers = *reply.speakers;
      break;
    }
  }

  if (plan.concurrent) {
    // Concurrent replies merge in roster order regardless of who picked the speakers.
    const auto ids = state.discussion_ids();
    std::stable_sort(plan.speakers.begin(), plan.speakers.end(),
                     [&](const std::string& a, const std::string& b) {
                       return std::find(ids.begin(), ids.end(), a) <
                              std::find(ids.begin(), ids.end(), b);
                     });
  }
  return plan;
}

std::vector<Message> DiscussionEngine::execute_round(DiscussionState& state,
                                                     const RoundPlan& plan) const {
  const Strategy& s = state.config.strategy;
  const auto instruction = [&](const std::string& id) {
    if (s.interaction == InteractionPattern::kSelectivePointToPoint) {
      auto peers = state.discussion_ids();
      peers.erase(std::remove(peers.begin(), peers.end(), id), peers.end());
      return point_to_point_instruction(state.task->label_set, peers);
    }
    return discussion_instruction(state.task->label_set);
  };
  const auto to_message = [&](const std::string& id, const AgentReply& reply) {
    Message m;
    m.round_index = state.current_round();
    m.speaker = id;
    m.addressees = reply.addressees.value_or(Addressees::everyone());
    m.content = reply.content;
    m.prediction = reply.prediction;
    m.input_tokens = reply.input_tokens;
    m.output_tokens = reply.output_tokens;
    m.purpose = Purpose::kDiscussion;
    return m;
  };

  std::vector<Message> produced;
  if (plan.concurrent) {
    std::vector<TurnRequest> requests;
    for (const auto& id : plan.speakers) {
      requests.push_back(
          make_request(state, id, TurnKind::kDiscussion, build_view(id, state, instruction(id))));
    }
    std::vector<AgentReply> replies;
    if (options_.parallel_fanout && requests.size() > 1) {
      std::vector<std::future<AgentReply>> futures;
      for (const auto& req : requests) {
        Backend* backend = &backend_for(state.agent(req.agent_id));
        futures.push_back(
            std::async(std::launch::async, [backend, &req] { return respond(*backend, req); }));
      }
      for (auto& f : futures) replies.push_back(f.get());
    } else {
      for (const auto& req : requests) {
        replies.push_back(respond(backend_for(state.agent(req.agent_id)), req));
      }
    }
    for (std::size_t i = 0; i < replies.size(); ++i) {
      produced.push_back(to_message(plan.speakers[i], replies[i]));
    }
    for (const auto& m : produced) {
      state.open_round().push_back(m);
      state.board.record(m.speaker, *m.prediction, m.round_index);
    }
  } else {
    for (const auto& id : plan.speakers) {
      const AgentReply reply =
          respond(backend_for(state.agent(id)),
                  make_request(state, id, TurnKind::kDiscussion, build_view(id, state, instruction(id))));
      Message m = to_message(id, reply);
      state.open_round().push_back(m);
      state.board.record(m.speaker, *m.prediction, m.round_index);
      produced.push_back(std::move(m));
    }
  }
  return produced;
}

DiscussionResult DiscussionEngine::run(const TaskInstance& task, const StrategyConfig& config,
                                       const std::vector<AgentSpec>& roster) const {
  if (auto v = validate_strategy(config.strategy); !v.valid()) {
    throw ConstraintViolation(std::move(v.violations));
  }
  if (config.max_rounds < 1) throw ParamError("max_rounds must be >= 1");

  DiscussionState state = make_state(task, config, roster);
  state.transcript.token_scheme = token_scheme_label(roster);
  const Strategy& s = config.strategy;
  const auto ids = state.discussion_ids();
  Rng rng(config.seed);

  std::optional<Outcome> outcome;
  try {
    for (int round = 1; round <= config.max_rounds && !outcome; ++round) {
      state.transcript.rounds.emplace_back();
      const RoundPlan plan = plan_round(state, rng);
      execute_round(state, plan);
      state.empty_round_streak = plan.speakers.empty() ? state.empty_round_streak + 1 : 0;

      if (s.context == ContextStrategy::kSelfSummarized) {
        for (const auto& agent : state.discussion_agents) {
          Message m = update_self_summary(agent.id, state, backend_for(agent));
          state.open_round().push_back(std::move(m));
        }
      } else if (s.context == ContextStrategy::kInstructorSummary) {
        Message m = update_instructor_summary(state, backend_for(*state.instructor));
        state.open_round().push_back(std::move(m));
      }

      if (is_centralized(s)) {
        RulingResult r = instructor_rule(state, backend_for(*state.instructor));
        for (auto& m : r.messages) state.open_round().push_back(std::move(m));
        if (r.ruling.terminate) {
          outcome = Outcome{r.ruling.final_label, round, Termination::kInstructorDecision};
        }
      } else if (auto label = detect_consensus(state.board, ids)) {
        outcome = Outcome{*label, round, Termination::kConsensus};
      } else if (round == config.max_rounds || state.empty_round_streak >= 2) {
        if (state.board.entries.empty()) {
          throw ProtocolError("no agent volunteered a prediction before the discussion stalled");
        }
        outcome = Outcome{majority_vote(state.board, ids, options_.tie_rule), round,
                          Termination::kForcedMajorityVote};
      }
    }
  } catch (RunError& e) {
    e.attach_partial(state.transcript);
    throw;
  }

  state.transcript.outcome = outcome;
  return DiscussionResult{std::move(state.transcript), *outcome};
}

DiscussionResult run_discussion(const TaskInstance& task, const StrategyConfig& config,
                                const std::vector<AgentSpec>& roster,
                                const BackendBindings& bindings, EngineOptions options) {
  return DiscussionEngine(bindings, options).run(task, config, roster);
}

std::vector<AgentSpec> default_roster(const TaskInstance& task, const Strategy& strategy,
                                      const std::string& discussion_backend,
                                      const std::string& instructor_backend) {
  std::vector<AgentSpec> roster;
  for (std::size_t i = 0; i < task.segments.size(); ++i) {
    roster.push_back(AgentSpec{"a" + std::to_string(i + 1), AgentKind::kDiscussion,
                               task.segments[i].name, discussion_backend});
  }
  if (is_centralized(strategy)) {
    roster.push_back(AgentSpec{"instructor", AgentKind::kInstructor, std::nullopt,
                               instructor_backend});
  }
  return roster;
}

}  // namespace agora
