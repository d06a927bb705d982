#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace agora {

enum class Scenario {
  kDistributedEvidence,  // DEI: complementary fragments, one per agent
  kStructuredEvidence,   // SES: pre-labeled evidence, few of them relevant
};

enum class Relevance { kConsistent, kInconsistent };

struct Segment {
  std::string name;
  std::string text;
  std::optional<Relevance> relevance;  // SES only

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct TaskInstance {
  std::string id;
  Scenario scenario = Scenario::kDistributedEvidence;
  std::string question;  // DEI: disposition question, SES: the claim
  std::vector<std::string> label_set;
  std::string gold_label;
  std::vector<Segment> segments;

  const Segment* find_segment(std::string_view name) const;

  friend bool operator==(const TaskInstance&, const TaskInstance&) = default;
};

/// Discharge dispositions, canonical lowercase.
const std::vector<std::string>& pddp_labels();
/// Fact-checking verdicts, canonical lowercase.
const std::vector<std::string>& ses_labels();
/// BHC, MSIP, PR, DM, SH.
const std::vector<std::string>& dei_segment_names();

std::string_view to_string(Scenario scenario);
Scenario parse_scenario(std::string_view name);
std::string_view to_string(Relevance relevance);

/// Case-insensitive match of `text` (surrounding whitespace and trailing
/// punctuation ignored) against `label_set`; returns the canonical entry.
std::optional<std::string> canonical_label(std::string_view text,
                                           const std::vector<std::string>& label_set);

/// Throws SchemaError with a JSON pointer rooted at `pointer`.
void validate_task(const TaskInstance& task, const std::string& pointer = "");

/// Task file: {"tasks": [{id, scenario, question, label_set, gold_label, segments}]}.
std::vector<TaskInstance> parse_tasks(std::string_view json_text);
std::vector<TaskInstance> load_tasks(const std::filesystem::path& path);
std::string tasks_to_json(const std::vector<TaskInstance>& tasks);

}  // namespace agora
