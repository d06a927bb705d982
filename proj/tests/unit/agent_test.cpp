#include <gtest/gtest.h>

#include <fstream>

#include "agora/agent.hpp"
#include "agora/errors.hpp"
#include "agora/scripted_backend.hpp"
#include "agora/task.hpp"
#include "test_support.hpp"

namespace agora {
namespace {

using testing::QueueBackend;

TurnRequest request(TurnKind kind, const std::vector<std::string>& labels = pddp_labels()) {
  TurnRequest r;
  r.agent_id = "a1";
  r.kind = kind;
  r.label_set = labels;
  r.peers = {"a2", "a3"};
  r.view.turn_instruction = "answer";
  return r;
}

TEST(ExtractPrediction, LastMarkerWins) {
  EXPECT_EQ(extract_prediction("therefore PREDICTION: home", pddp_labels()), "home");
  EXPECT_EQ(extract_prediction("PREDICTION: expired\nlater\nPREDICTION: home", pddp_labels()),
            "home");
  EXPECT_EQ(extract_prediction("no marker here", pddp_labels()), std::nullopt);
}

TEST(ExtractPrediction, CanonicalizesEveryDisposition) {
  // Each label in upper, title and mixed case maps back to its canonical form.
  for (const auto& label : pddp_labels()) {
    std::string upper = label, title = label;
    for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    bool start = true;
    for (auto& c : title) {
      if (start) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      start = c == ' ';
    }
    EXPECT_EQ(extract_prediction("PREDICTION: " + upper, pddp_labels()), label);
    EXPECT_EQ(extract_prediction("prediction: " + title + ".", pddp_labels()), label);
  }
  EXPECT_EQ(extract_prediction("PREDICTION: Home with Service", pddp_labels()), "home with service");
}

TEST(ExtractPrediction, NeverLeavesTheLabelSet) {
  for (const std::string text : {"PREDICTION: hospice", "PREDICTION:", "PREDICTION: home-ish"}) {
    EXPECT_EQ(extract_prediction(text, pddp_labels()), std::nullopt) << text;
  }
}

TEST(ExtractControl, KeywordsAreExact) {
  EXPECT_EQ(extract_control("CONTINUE", ses_labels()), (ControlDirective{false, ""}));
  EXPECT_EQ(extract_control("reasoning\nFINAL:Supported", ses_labels()),
            (ControlDirective{true, "supported"}));
  EXPECT_EQ(extract_control("continue", ses_labels()), std::nullopt);
  EXPECT_EQ(extract_control("FINAL:maybe", ses_labels()), std::nullopt);
}

TEST(Respond, ReprompsOnceAndSumsTokens) {
  QueueBackend backend({{"thinking", 10, 2}, {"PREDICTION: home", 12, 3}});
  const AgentReply reply = respond(backend, request(TurnKind::kDiscussion));
  EXPECT_EQ(reply.prediction, "home");
  EXPECT_EQ(reply.attempts, 2);
  EXPECT_EQ(reply.input_tokens, 22);
  EXPECT_EQ(reply.output_tokens, 5);
  ASSERT_EQ(backend.requests.size(), 2u);
  EXPECT_NE(backend.requests[1].view.turn_instruction, "answer");
}

TEST(Respond, SecondFailureIsProtocolError) {
  QueueBackend backend({{"no", 1, 1}, {"still no", 1, 1}});
  EXPECT_THROW(respond(backend, request(TurnKind::kFinal)), ProtocolError);
}

TEST(Respond, IntentAndPlanFields) {
  QueueBackend yes({{"SPEAK: yes", 1, 2}});
  EXPECT_EQ(respond(yes, request(TurnKind::kIntent)).wants_to_speak, true);
  QueueBackend no({{"I'll pass\nSPEAK: no", 1, 2}});
  EXPECT_EQ(respond(no, request(TurnKind::kIntent)).wants_to_speak, false);

  QueueBackend plan({{"SPEAKERS: a3, a2", 1, 3}});
  auto req = request(TurnKind::kPlan);
  req.peers = {"a1", "a2", "a3"};
  EXPECT_EQ(respond(plan, req).speakers, (std::vector<std::string>{"a3", "a2"}));

  QueueBackend bad({{"SPEAKERS: a9", 1, 1}, {"SPEAKERS: a2, a2", 1, 1}});
  EXPECT_THROW(respond(bad, req), ProtocolError);
}

TEST(Respond, PointToPointAddressees) {
  auto req = request(TurnKind::kDiscussion);
  req.point_to_point = true;
  QueueBackend subset({{"TO: a3\nPREDICTION: home", 1, 1}});
  EXPECT_EQ(respond(subset, req).addressees->subset, std::vector<std::string>{"a3"});
  QueueBackend all({{"TO: all\nPREDICTION: home", 1, 1}});
  EXPECT_TRUE(respond(all, req).addressees->is_all());
  QueueBackend self({{"TO: a1\nPREDICTION: home", 1, 1}, {"TO: a7\nPREDICTION: home", 1, 1}});
  EXPECT_THROW(respond(self, req), ProtocolError);
  // Without an I4 turn no addressee set is produced.
  QueueBackend plain({{"TO: a3\nPREDICTION: home", 1, 1}});
  EXPECT_FALSE(respond(plain, request(TurnKind::kDiscussion)).addressees.has_value());
}

TEST(ScriptedAgentTest, AdoptsMajoritySeen) {
  ScriptedAgentConfig cfg;
  cfg.initial_label = "expired";
  cfg.stubbornness = 0;
  cfg.persuasion = Persuasion::kAdoptMajoritySeen;
  ScriptedAgent agent(cfg);
  auto req = request(TurnKind::kDiscussion);
  req.round_index = 2;
  req.view.visible_history =
      "[round 1] a1 (to all): PREDICTION: expired\n"
      "[round 1] a2 (to all): PREDICTION: home\n"
      "[round 1] a3 (to all): PREDICTION: home\n"
      "[round 1] a4 (to all): PREDICTION: home";
  EXPECT_EQ(respond(agent, req).prediction, "home");
}

TEST(ScriptedAgentTest, NeverKeepsInitialLabel) {
  ScriptedAgentConfig cfg;
  cfg.initial_label = "expired";
  cfg.persuasion = Persuasion::kNever;
  ScriptedAgent agent(cfg);
  auto req = request(TurnKind::kDiscussion);
  req.round_index = 5;
  req.view.visible_history =
      "[round 4] a2 (to all): (informed) PREDICTION: home\n"
      "[round 4] a3 (to all): PREDICTION: home";
  EXPECT_EQ(respond(agent, req).prediction, "expired");
}

TEST(ScriptedAgentTest, StubbornnessDelaysPersuasion) {
  ScriptedAgentConfig cfg;
  cfg.initial_label = "expired";
  cfg.stubbornness = 2;
  cfg.persuasion = Persuasion::kAdoptFirstInformed;
  ScriptedAgent agent(cfg);
  auto req = request(TurnKind::kDiscussion);
  req.view.visible_history = "[round 1] a2 (to all): [r1:a2] (informed) PREDICTION: home";
  req.round_index = 2;
  EXPECT_EQ(respond(agent, req).prediction, "expired");
  req.round_index = 3;
  EXPECT_EQ(respond(agent, req).prediction, "home");
}

TEST(ScriptedAgentTest, ReadsVerdictFromOwnSegment) {
  ScriptedAgent agent({});
  auto req = request(TurnKind::kDiscussion, ses_labels());
  req.view.role_preamble = discussion_preamble(Segment{"E1", "x " + verdict_marker("refuting"), {}});
  const auto reply = respond(agent, req);
  EXPECT_EQ(reply.prediction, "refuting");
  EXPECT_NE(reply.content.find(kInformedTag), std::string::npos);
}

TEST(ScriptedAgentTest, TokenCountsMatchWhitespaceOracle) {
  ScriptedAgent agent({});
  auto req = request(TurnKind::kDiscussion, ses_labels());
  req.view = AgentView{discussion_preamble(Segment{"E1", "a b " + hint_marker("neutral"), {}}),
                       "Claim: x", "[round 1] a2 (to all): PREDICTION: neutral", "say it"};
  req.round_index = 2;
  const RawReply raw = agent.complete(req);
  EXPECT_EQ(raw.input_tokens,
            testing::whitespace_oracle(PromptTemplates::defaults().render(req.kind, req.view)));
  EXPECT_EQ(raw.output_tokens, testing::whitespace_oracle(raw.content));
  // Pure function of its inputs.
  const RawReply again = agent.complete(req);
  EXPECT_EQ(again.content, raw.content);
  EXPECT_EQ(again.input_tokens, raw.input_tokens);
}

TEST(ScriptedInstructorTest, SettlesOnInformedLabel) {
  ScriptedInstructor instructor({});
  auto req = request(TurnKind::kControl, ses_labels());
  req.agent_id = "instructor";
  req.peers = {"a1", "a2"};
  req.view.visible_history =
      "[round 1] a1 (to all): (uninformed) PREDICTION: neutral\n"
      "[round 1] a2 (to all): (informed) PREDICTION: refuting";
  EXPECT_EQ(respond(instructor, req).control, (ControlDirective{true, "refuting"}));

  ScriptedInstructorConfig cont;
  cont.control = ControlRule::kAlwaysContinue;
  ScriptedInstructor waiting(cont);
  EXPECT_EQ(respond(waiting, req).control, (ControlDirective{false, ""}));
}

TEST(Summarizer, ParseAndApply) {
  EXPECT_EQ(parse_summarizer("identity_concat").apply("abc"), "abc");
  EXPECT_EQ(parse_summarizer("truncate_to_n_chars(2)").apply("abcdef"), "ab");
  EXPECT_EQ(parse_summarizer("truncate:3").apply("abcdef"), "abc");
  EXPECT_EQ(to_string(SummarizerRule::truncate(5)), "truncate_to_n_chars(5)");
  EXPECT_THROW(parse_summarizer("bogus"), ParamError);
  // Never splits a UTF-8 sequence.
  EXPECT_EQ(SummarizerRule::truncate(2).apply("a\xC3\xA9z"), "a");
}

TEST(PromptTemplatesTest, RendersSlotsAndLoadsFiles) {
  AgentView v{"P", "T", "H", "I"};
  EXPECT_EQ(render_template("{preamble}|{task_statement}|{history}|{instruction}|{other}", v),
            "P|T|H|I|{other}");
  testing::TempDir dir;
  std::ofstream(dir.path() / "final.txt") << "just {instruction}";
  const auto t = PromptTemplates::load(dir.path());
  EXPECT_EQ(t.render(TurnKind::kFinal, v), "just I");
  EXPECT_EQ(t.text(TurnKind::kDiscussion), PromptTemplates::defaults().text(TurnKind::kDiscussion));
}

TEST(PromptTemplatesTest, ShippedTemplateFilesMatchDefaults) {
  const auto shipped = PromptTemplates::load(AGORA_TEMPLATES_DIR);
  for (std::size_t k = 0; k < kTurnKindCount; ++k) {
    const auto kind = static_cast<TurnKind>(k);
    EXPECT_EQ(shipped.text(kind), PromptTemplates::defaults().text(kind)) << to_string(kind);
    EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(AGORA_TEMPLATES_DIR) /
                                        (std::string(to_string(kind)) + ".txt")));
  }
}

TEST(PromptFragments, DisciplineAndMarkers) {
  const auto pre = discussion_preamble(Segment{"BHC", "course text", {}});
  EXPECT_NE(pre.find("Use ONLY the provided context; if it is insufficient, say so."),
            std::string::npos);
  EXPECT_NE(pre.find("course text"), std::string::npos);
  EXPECT_NE(discussion_instruction(pddp_labels()).find("PREDICTION:"), std::string::npos);
  EXPECT_NE(control_instruction(ses_labels()).find("CONTINUE"), std::string::npos);
}

}  // namespace
}  // namespace agora
