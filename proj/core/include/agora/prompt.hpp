#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "agora/task.hpp"

namespace agora {

enum class TurnKind {
  kDiscussion,
  kIntent,   // P2: do you want to speak this round?
  kSummary,  // C2 self summary or C3 instructor summary
  kPlan,     // P3: instructor picks speakers and order
  kControl,  // G2: CONTINUE or FINAL:<label>
  kFinal,    // forced final decision / single-shot baselines
};

inline constexpr std::size_t kTurnKindCount = 6;

std::string_view to_string(TurnKind kind);

/// Everything an agent is shown for one turn.
struct AgentView {
  std::string role_preamble;    // discipline text plus the agent's own segment, verbatim
  std::string task_statement;   // question or claim, plus the label set
  std::string visible_history;  // strategy-dependent rendering of the transcript
  std::string turn_instruction;

  friend bool operator==(const AgentView&, const AgentView&) = default;
};

/// One template per turn kind; `{preamble}`, `{task_statement}`, `{history}`
/// and `{instruction}` are substituted, anything else is copied verbatim.
class PromptTemplates {
 public:
  static const PromptTemplates& defaults();
  /// Reads `<kind>.txt` from `dir` (e.g. discussion.txt); missing files fall back to defaults.
  static PromptTemplates load(const std::filesystem::path& dir);

  const std::string& text(TurnKind kind) const { return texts_[static_cast<std::size_t>(kind)]; }
  void set_text(TurnKind kind, std::string text) {
    texts_[static_cast<std::size_t>(kind)] = std::move(text);
  }
  std::string render(TurnKind kind, const AgentView& view) const;

 private:
  std::array<std::string, kTurnKindCount> texts_;
};

std::string render_template(std::string_view tmpl, const AgentView& view);

// Prompt fragments. The control and marker grammar here is what the reply
// parsers accept, so the two must change together.

std::string discussion_preamble(const Segment& segment);
std::string combined_preamble(const std::vector<Segment>& segments);
std::string instructor_preamble(const std::vector<std::string>& discussion_agents);
std::string task_statement(const TaskInstance& task);

std::string discussion_instruction(const std::vector<std::string>& label_set);
std::string point_to_point_instruction(const std::vector<std::string>& label_set,
                                       const std::vector<std::string>& peers);
std::string intent_instruction();
std::string self_summary_instruction();
std::string instructor_summary_instruction();
std::string plan_instruction(const std::vector<std::string>& discussion_agents);
std::string control_instruction(const std::vector<std::string>& label_set);
std::string final_instruction(const std::vector<std::string>& label_set);
std::string reprompt_instruction(std::string_view base_instruction, std::string_view problem);

}  // namespace agora
