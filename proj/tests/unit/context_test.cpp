#include <gtest/gtest.h>

#include "agora/context.hpp"
#include "agora/engine.hpp"
#include "agora/errors.hpp"
#include "test_support.hpp"

namespace agora {
namespace {

class ContextTest : public ::testing::Test {
 protected:
  void SetUp() override { task_ = generate_ses(testing::ses_params(1, 9)).front(); }

  DiscussionState state_for(const std::string& strategy) {
    const auto cfg = make_strategy_config(strategy, 5, 1);
    return make_state(task_, cfg, default_roster(task_, cfg.strategy, "discussion"));
  }

  static Message say(int round, const std::string& speaker, const std::string& text,
                     Addressees to = Addressees::everyone()) {
    Message m;
    m.round_index = round;
    m.speaker = speaker;
    m.addressees = std::move(to);
    m.content = text + " PREDICTION: neutral";
    m.prediction = "neutral";
    return m;
  }

  TaskInstance task_;
};

TEST_F(ContextTest, RoundOneShowsOnlyOwnSegmentAndTask) {
  auto s = state_for("G1-P1-I1-C1");
  s.transcript.rounds.emplace_back();
  const auto v = build_view("a2", s, "go");
  EXPECT_EQ(v.visible_history, "");
  EXPECT_NE(v.role_preamble.find(task_.segments[1].text), std::string::npos);
  EXPECT_EQ(v.role_preamble.find(task_.segments[0].text), std::string::npos);
  EXPECT_NE(v.task_statement.find(task_.question), std::string::npos);
}

TEST_F(ContextTest, FullLastRoundLogExcludesOlderRounds) {
  auto s = state_for("G1-P1-I1-C1");
  s.transcript.rounds = {{say(1, "a1", "OLD")}, {say(2, "a1", "RECENT")}, {}};
  const auto v = build_view("a2", s, "go");
  EXPECT_EQ(v.visible_history.find("OLD"), std::string::npos);
  EXPECT_NE(v.visible_history.find("RECENT"), std::string::npos);
}

TEST_F(ContextTest, SequentialPatternsSeeEarlierSpeakersThisRound) {
  auto simultaneous = state_for("G1-P1-I1-C1");
  simultaneous.transcript.rounds = {{say(1, "a1", "EARLIER")}};
  EXPECT_EQ(build_view("a2", simultaneous, "go").visible_history.find("EARLIER"), std::string::npos);

  auto ordered = state_for("G1-P1-I2-C1");
  ordered.transcript.rounds = {{say(1, "a1", "EARLIER")}};
  EXPECT_NE(build_view("a2", ordered, "go").visible_history.find("EARLIER"), std::string::npos);
}

TEST_F(ContextTest, PointToPointHidesMessagesFromNonAddressees) {
  auto s = state_for("G1-P2-I4-C2");
  s.transcript.rounds = {{say(1, "a1", "SECRET", Addressees{{"a3"}})}, {}};
  EXPECT_NE(build_view("a3", s, "go").visible_history.find("SECRET"), std::string::npos);
  EXPECT_NE(build_view("a1", s, "go").visible_history.find("SECRET"), std::string::npos);
  EXPECT_EQ(build_view("a2", s, "go").visible_history.find("SECRET"), std::string::npos);
}

TEST_F(ContextTest, NonDiscussionPurposesAreNotDialogue) {
  auto s = state_for("G1-P1-I1-C1");
  Message intent = say(1, "a1", "INTENT");
  intent.purpose = Purpose::kSpeakIntent;
  s.transcript.rounds = {{intent}, {}};
  EXPECT_EQ(build_view("a2", s, "go").visible_history.find("INTENT"), std::string::npos);
}

TEST_F(ContextTest, SelfSummaryUsesPriorGenerationPlusLastRound) {
  auto s = state_for("G1-P1-I1-C2");
  testing::QueueBackend backend({{"SUM1", 1, 1}, {"SUM2", 1, 1}});
  s.transcript.rounds = {{say(1, "a1", "R1")}};
  update_self_summary("a1", s, backend);
  EXPECT_EQ(s.summaries.per_agent["a1"].latest, "SUM1");
  // Round 2's view: no prior summary yet, round-1 log.
  s.transcript.rounds.push_back({});
  auto v = build_view("a1", s, "go");
  EXPECT_EQ(v.visible_history.find("SUM1"), std::string::npos);
  EXPECT_NE(v.visible_history.find("R1"), std::string::npos);

  s.open_round().push_back(say(2, "a1", "R2"));
  update_self_summary("a1", s, backend);
  EXPECT_NE(backend.requests[1].view.visible_history.find("SUM1"), std::string::npos);
  EXPECT_NE(backend.requests[1].view.visible_history.find("R2"), std::string::npos);
  // Round 3's view: summary through round 1, then the round-2 log.
  s.transcript.rounds.push_back({});
  v = build_view("a1", s, "go");
  EXPECT_EQ(v.visible_history.rfind("SUM1", 0), 0u);
  EXPECT_NE(v.visible_history.find("R2"), std::string::npos);
  EXPECT_EQ(v.visible_history.find("R1"), std::string::npos);
  EXPECT_EQ(v.visible_history.find("SUM2"), std::string::npos);
}

TEST_F(ContextTest, InstructorSummaryReplacesLogForDiscussionAgents) {
  auto s = state_for("G2-P3-I1-C3");
  testing::QueueBackend backend({{"SHARED", 1, 1}});
  s.transcript.rounds = {{say(1, "a1", "R1")}};
  update_instructor_summary(s, backend);
  s.transcript.rounds.push_back({});
  const auto v = build_view("a2", s, "go");
  EXPECT_EQ(v.visible_history, "SHARED");
  // The instructor itself always sees the full dialogue.
  EXPECT_NE(build_view("instructor", s, "go").visible_history.find("R1"), std::string::npos);
}

TEST_F(ContextTest, RequestPeersAndPointToPointFlag) {
  auto s = state_for("G1-P2-I4-C2");
  s.transcript.rounds.emplace_back();
  const auto req = make_request(s, "a2", TurnKind::kDiscussion, build_view("a2", s, "go"));
  EXPECT_TRUE(req.point_to_point);
  EXPECT_EQ(std::count(req.peers.begin(), req.peers.end(), "a2"), 0);
  EXPECT_EQ(req.peers.size(), task_.segments.size() - 1);
  EXPECT_FALSE(make_request(s, "a2", TurnKind::kIntent, {}).point_to_point);
}

TEST_F(ContextTest, UnknownAgentIsRejected) {
  auto s = state_for("G1-P1-I1-C1");
  s.transcript.rounds.emplace_back();
  EXPECT_THROW(build_view("zz", s, "go"), ParamError);
}

}  // namespace
}  // namespace agora
