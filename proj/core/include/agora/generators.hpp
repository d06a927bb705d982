#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agora/task.hpp"

namespace agora {

/// Parameters for the synthetic DEI/SES batches. Generated segments carry
/// machine-readable evidence markers so scripted agents can read them.
struct GeneratorParams {
  Scenario scenario = Scenario::kStructuredEvidence;
  int n_tasks = 20;
  int n_segments = 6;                     // SES only; DEI always uses five roles
  std::vector<std::string> label_set;     // empty: scenario default
  std::string informative_segment = "BHC";  // DEI
  int n_consistent = 1;                   // SES
  double noise = 0.25;                    // fraction of filler sentences per segment
  std::uint64_t seed = 0;
};

/// `<<verdict:label>>` marks evidence that settles the label on its own.
std::string verdict_marker(std::string_view label);
/// `<<hint:label>>` marks partial evidence leaning towards a label.
std::string hint_marker(std::string_view label);

struct EvidenceReading {
  std::optional<std::string> verdict;  // first verdict marker
  std::vector<std::string> hints;      // every hint marker, in order
};

/// Extracts markers whose label canonicalizes into `label_set`.
EvidenceReading read_evidence(std::string_view text, const std::vector<std::string>& label_set);

std::vector<TaskInstance> generate_ses(const GeneratorParams& params);
std::vector<TaskInstance> generate_dei(const GeneratorParams& params);
/// Dispatches on params.scenario.
std::vector<TaskInstance> generate_tasks(const GeneratorParams& params);

}  // namespace agora
