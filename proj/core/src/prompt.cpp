#include "agora/prompt.hpp"

#include <fstream>
#include <sstream>

namespace agora {

namespace {

constexpr std::string_view kDefaultTemplate =
    "{preamble}\n"
    "\n"
    "{task_statement}\n"
    "\n"
    "Discussion so far:\n"
    "{history}\n"
    "\n"
    "{instruction}\n";

constexpr std::string_view kSummaryTemplate =
    "{preamble}\n"
    "\n"
    "{task_statement}\n"
    "\n"
    "Material to summarize:\n"
    "{history}\n"
    "\n"
    "{instruction}\n";

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string label_list(const std::vector<std::string>& labels) { return join(labels, ", "); }

}  // namespace

std::string_view to_string(TurnKind kind) {
  switch (kind) {
    case TurnKind::kDiscussion:
      return "discussion";
    case TurnKind::kIntent:
      return "intent";
    case TurnKind::kSummary:
      return "summary";
    case TurnKind::kPlan:
      return "plan";
    case TurnKind::kControl:
      return "control";
    case TurnKind::kFinal:
      return "final";
  }
  return "unknown";
}

const PromptTemplates& PromptTemplates::defaults() {
  static const PromptTemplates instance = [] {
    PromptTemplates t;
    for (std::size_t k = 0; k < kTurnKindCount; ++k) t.texts_[k] = std::string(kDefaultTemplate);
    t.texts_[static_cast<std::size_t>(TurnKind::kSummary)] = std::string(kSummaryTemplate);
    return t;
  }();
  return instance;
}

PromptTemplates PromptTemplates::load(const std::filesystem::path& dir) {
  PromptTemplates t = defaults();
  for (std::size_t k = 0; k < kTurnKindCount; ++k) {
    const auto path = dir / (std::string(to_string(static_cast<TurnKind>(k))) + ".txt");
    std::ifstream in(path, std::ios::binary);
    if (!in) continue;
    std::ostringstream buf;
    buf << in.rdbuf();
    t.texts_[k] = buf.str();
  }
  return t;
}

std::string PromptTemplates::render(TurnKind kind, const AgentView& view) const {
  return render_template(text(kind), view);
}

std::string render_template(std::string_view tmpl, const AgentView& view) {
  std::string out;
  out.reserve(tmpl.size() + view.role_preamble.size() + view.task_statement.size() +
              view.visible_history.size() + view.turn_instruction.size());
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const auto open = tmpl.find('{', pos);
    if (open == std::string_view::npos) break;
    const auto close = tmpl.find('}', open);
    if (close == std::string_view::npos) break;
    out.append(tmpl.substr(pos, open - pos));
    const auto slot = tmpl.substr(open + 1, close - open - 1);
    if (slot == "preamble") {
      out += view.role_preamble;
    } else if (slot == "task_statement") {
      out += view.task_statement;
    } else if (slot == "history") {
      out += view.visible_history;
    } else if (slot == "instruction") {
      out += view.turn_instruction;
    } else {
      out.append(tmpl.substr(open, close - open + 1));
    }
    pos = close + 1;
  }
  out.append(tmpl.substr(pos));
  return out;
}

std::string discussion_preamble(const Segment& segment) {
  return "You are a context-based agent. Use ONLY the provided context; if it is insufficient, "
         "say so. Do not rely on outside knowledge.\n"
         "Your context segment (" +
         segment.name + "):\n" + segment.text;
}

std::string combined_preamble(const std::vector<Segment>& segments) {
  std::string out =
      "You are a context-based agent. Use ONLY the provided context; if it is insufficient, "
      "say so. Do not rely on outside knowledge.\n"
      "Your context segments:";
  for (const auto& s : segments) out += "\n(" + s.name + ") " + s.text;
  return out;
}

std::string instructor_preamble(const std::vector<std::string>& discussion_agents) {
  return "You are the instructor coordinating a discussion among agents " +
         join(discussion_agents, ", ") +
         ". You hold no private evidence. Each agent holds its own context segment and must "
         "rely on it alone. Keep the discussion focused and finish it once the evidence "
         "shared so far settles the answer.";
}

std::string task_statement(const TaskInstance& task) {
  const bool ses = task.scenario == Scenario::kStructuredEvidence;
  return std::string(ses ? "Assess the claim. " : "Question: ") + task.question +
         "\nPossible labels: " + label_list(task.label_set);
}

std::string discussion_instruction(const std::vector<std::string>& label_set) {
  return "Share what your context says and respond to the other agents. End your reply with a "
         "line `PREDICTION: <label>` using one of: " +
         label_list(label_set) + ".";
}

std::string point_to_point_instruction(const std::vector<std::string>& label_set,
                                       const std::vector<std::string>& peers) {
  return "Choose whom to address. Begin your reply with a line `TO: <comma-separated agent ids>` "
         "(from: " +
         join(peers, ", ") + ") or `TO: all`. " + discussion_instruction(label_set);
}

std::string intent_instruction() {
  return "Decide whether you need to speak in this round. Reply with a single line "
         "`SPEAK: yes` or `SPEAK: no`.";
}

std::string self_summary_instruction() {
  return "Update your running summary of the discussion: condense the material above into a "
         "short summary that keeps every agent's current position.";
}

std::string instructor_summary_instruction() {
  return "Summarize the discussion for all participants: condense the material above into a "
         "short summary that keeps every agent's current position and key evidence.";
}

std::string plan_instruction(const std::vector<std::string>& discussion_agents) {
  return "Decide which agents speak in this round and in what order. Reply with a single line "
         "`SPEAKERS: <comma-separated agent ids>` chosen from: " +
         join(discussion_agents, ", ") + ".";
}

std::string control_instruction(const std::vector<std::string>& label_set) {
  return "Decide whether the discussion should continue. Reply with exactly one line: "
         "`CONTINUE` if critical disagreements remain, or `FINAL:<label>` to end it with a "
         "decision, using one of: " +
         label_list(label_set) + ".";
}

std::string final_instruction(const std::vector<std::string>& label_set) {
  return "Give your final decision now. Reply with a line `FINAL:<label>` using one of: " +
         label_list(label_set) + ".";
}

std::string reprompt_instruction(std::string_view base_instruction, std::string_view problem) {
  return std::string(base_instruction) + "\nYour previous reply could not be used (" +
         std::string(problem) + "). Reply again, following the required format exactly.";
}

}  // namespace agora
