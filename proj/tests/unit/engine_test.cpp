#include <gtest/gtest.h>

#include "agora/engine.hpp"
#include "agora/errors.hpp"
#include "protocol_checks.hpp"
#include "test_support.hpp"

namespace agora {
namespace {

using testing::FnBackend;

int discussion_messages(const Transcript& t) {
  int n = 0;
  for (const auto& round : t.rounds)
    for (const auto& m : round) n += m.purpose == Purpose::kDiscussion;
  return n;
}

class EngineTest : public ::testing::Test {
 protected:
  void SetUp() override { tasks_ = generate_ses(testing::ses_params(8, 21)); }

  Transcript run(const TaskInstance& task, const std::string& strategy, const BackendBindings& b,
                 int max_rounds = 10, std::uint64_t seed = 1, EngineOptions opts = {}) {
    const auto cfg = make_strategy_config(strategy, max_rounds, seed);
    return DiscussionEngine(b, opts).run(task, cfg, default_roster(task, cfg.strategy, "discussion")).transcript;
  }

  std::vector<TaskInstance> tasks_;
};

TEST_F(EngineTest, DecentralizedConsensusInRoundTwo) {
  const auto b = testing::scripted_bindings(testing::persuadable_agent());
  for (const auto& task : tasks_) {
    const auto t = run(task, "G1-P1-I1-C1", b);
    ASSERT_TRUE(t.outcome);
    EXPECT_EQ(t.outcome->termination, Termination::kConsensus);
    EXPECT_EQ(t.outcome->rounds_used, 2);
    EXPECT_EQ(t.outcome->final_label, task.gold_label);
    EXPECT_EQ(discussion_messages(t), 12);
  }
}

TEST_F(EngineTest, CentralizedSettlesInRoundOne) {
  const auto b = testing::scripted_bindings(testing::persuadable_agent());
  for (const std::string s : {"G2-P3-I1-C3", "G2-P3-I2-C3"}) {
    const auto t = run(tasks_[0], s, b);
    EXPECT_EQ(t.outcome->termination, Termination::kInstructorDecision);
    EXPECT_EQ(t.outcome->rounds_used, 1);
    EXPECT_EQ(t.outcome->final_label, tasks_[0].gold_label);
    // plan, six turns, summary, control
    EXPECT_EQ(t.rounds[0].size(), 9u);
  }
}

TEST_F(EngineTest, ForcedMajorityVoteAtRoundCap) {
  ScriptedAgentConfig stubborn;
  stubborn.persuasion = Persuasion::kNever;
  const auto t = run(tasks_[0], "G1-P1-I2-C1", testing::scripted_bindings(stubborn), 3);
  EXPECT_EQ(t.outcome->termination, Termination::kForcedMajorityVote);
  EXPECT_EQ(t.outcome->rounds_used, 3);
}

TEST_F(EngineTest, InstructorForcedFinalAtCap) {
  ScriptedInstructorConfig waiting;
  waiting.control = ControlRule::kAlwaysContinue;
  const auto t = run(tasks_[0], "G2-P3-I1-C3", testing::scripted_bindings({}, waiting), 2);
  EXPECT_EQ(t.outcome->termination, Termination::kInstructorDecision);
  EXPECT_EQ(t.outcome->rounds_used, 2);
  const auto& last = t.rounds.back().back();
  EXPECT_EQ(last.purpose, Purpose::kInstructorControl);
  EXPECT_TRUE(last.prediction.has_value());
}

TEST_F(EngineTest, DeterministicAndParallelFanoutAgnostic) {
  const auto b = testing::scripted_bindings(testing::persuadable_agent());
  for (const auto& s : enumerate_valid_strategies()) {
    const auto a = transcript_to_json(run(tasks_[1], s, b, 10, 5));
    EXPECT_EQ(a, transcript_to_json(run(tasks_[1], s, b, 10, 5))) << s;
    EXPECT_EQ(a, transcript_to_json(run(tasks_[1], s, b, 10, 5, EngineOptions{true, {}}))) << s;
  }
}

TEST_F(EngineTest, RandomSequentialOrderDependsOnSeed) {
  const auto b = testing::scripted_bindings(testing::persuadable_agent());
  std::set<std::vector<std::string>> orders;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto t = run(tasks_[0], "G1-P1-I3-C1", b, 10, seed);
    std::vector<std::string> order;
    for (const auto& m : t.rounds[0]) order.push_back(m.speaker);
    orders.insert(order);
  }
  EXPECT_GT(orders.size(), 1u);
}

TEST_F(EngineTest, SelectiveParticipationLogsIntents) {
  const auto b = testing::scripted_bindings(testing::persuadable_agent());
  const auto t = run(tasks_[0], "G1-P2-I4-C2", b);
  int intents = 0;
  for (const auto& m : t.rounds[0]) intents += m.purpose == Purpose::kSpeakIntent;
  EXPECT_EQ(intents, 6);
}

TEST_F(EngineTest, TwoSilentRoundsEndTheDiscussion) {
  BackendBindings b;
  b.emplace("discussion", std::make_shared<FnBackend>([](const TurnRequest& r) {
              if (r.kind == TurnKind::kIntent) return RawReply{"SPEAK: no", 1, 2};
              return RawReply{"summary", 1, 1};
            }));
  const auto cfg = make_strategy_config("G1-P2-I4-C2", 10, 1);
  try {
    DiscussionEngine(b).run(tasks_[0], cfg, default_roster(tasks_[0], cfg.strategy, "discussion"));
    ADD_FAILURE() << "expected ProtocolError";
  } catch (const ProtocolError& e) {
    ASSERT_NE(e.partial_transcript(), nullptr);
    EXPECT_EQ(e.partial_transcript()->rounds.size(), 2u);
  }
}

TEST_F(EngineTest, BackendFailureCarriesPartialTranscript) {
  auto inner = std::make_shared<ScriptedAgent>(testing::persuadable_agent());
  BackendBindings b;
  b.emplace("discussion", std::make_shared<FnBackend>([inner](const TurnRequest& r) {
              if (r.round_index == 2) throw BackendError("endpoint down");
              return inner->complete(r);
            }));
  const auto cfg = make_strategy_config("G1-P1-I2-C1", 10, 1);
  try {
    DiscussionEngine(b).run(tasks_[0], cfg, default_roster(tasks_[0], cfg.strategy, "discussion"));
    ADD_FAILURE() << "expected BackendError";
  } catch (const BackendError& e) {
    ASSERT_NE(e.partial_transcript(), nullptr);
    EXPECT_FALSE(e.partial_transcript()->outcome.has_value());
    EXPECT_EQ(e.partial_transcript()->rounds[0].size(), 6u);
  }
}

TEST_F(EngineTest, RosterAndConfigValidation) {
  const auto b = testing::scripted_bindings();
  const auto& task = tasks_[0];
  const auto g2 = make_strategy_config("G2-P3-I1-C3");
  const auto g1 = make_strategy_config("G1-P1-I1-C1");
  DiscussionEngine engine(b);
  EXPECT_THROW(engine.run(task, g2, default_roster(task, g1.strategy, "discussion")), ParamError);
  EXPECT_THROW(engine.run(task, g1, default_roster(task, g2.strategy, "discussion")), ParamError);
  auto short_roster = default_roster(task, g1.strategy, "discussion");
  short_roster.pop_back();
  EXPECT_THROW(engine.run(task, g1, short_roster), ParamError);
  StrategyConfig invalid{parse_strategy("G1-P3-I1-C1"), 10, 0};
  EXPECT_THROW(engine.run(task, invalid, default_roster(task, g1.strategy, "discussion")),
               ConstraintViolation);
  auto unbound = default_roster(task, g1.strategy, "nowhere");
  EXPECT_THROW(engine.run(task, g1, unbound), ParamError);
}

TEST_F(EngineTest, SegmentRefsOverrideOrder) {
  auto roster = default_roster(tasks_[0], parse_strategy("G1-P1-I1-C1"), "discussion");
  std::reverse(roster.begin(), roster.end());
  for (std::size_t i = 0; i < roster.size(); ++i) roster[i].segment_ref = tasks_[0].segments[i].name;
  const auto state = make_state(tasks_[0], make_strategy_config("G1-P1-I1-C1"), roster);
  EXPECT_EQ(state.segments.at(roster[0].id)->name, tasks_[0].segments[0].name);
}

// Protocol invariants across all strategies and many seeded configurations.
class ProtocolProperties : public ::testing::TestWithParam<std::string> {};

TEST_P(ProtocolProperties, HoldAcrossSeededRuns) {
  const auto ses = generate_ses(testing::ses_params(6, 99));
  const auto dei = generate_dei(testing::dei_params(6, 99));
  int addressed = 0;  // messages sent to a strict subset, so the I4 check is not vacuous
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto& task = seed % 2 ? ses[seed % ses.size()] : dei[seed % dei.size()];
    const auto run = testing::probed_run(task, GetParam(), seed, 1 + static_cast<int>(seed % 6));
    for (const auto& check : {testing::check_termination, testing::check_full_participation,
                              testing::check_snapshot_views, testing::check_point_to_point,
                              testing::check_governance, testing::check_conservation}) {
      const auto violations = check(run);
      EXPECT_TRUE(violations.empty()) << "seed " << seed << ": " << violations.front();
    }
    for (const auto& round : run.transcript.rounds)
      for (const auto& m : round) addressed += !m.addressees.is_all();
  }
  if (parse_strategy(GetParam()).interaction == InteractionPattern::kSelectivePointToPoint) {
    EXPECT_GT(addressed, 0);
  }
}

INSTANTIATE_TEST_SUITE_P(AllStrategies, ProtocolProperties,
                         ::testing::ValuesIn(enumerate_valid_strategies()),
                         [](const auto& info) {
                           std::string name = info.param;
                           std::replace(name.begin(), name.end(), '-', '_');
                           return name;
                         });

}  // namespace
}  // namespace agora
