#include "agora/generators.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>

#include "agora/errors.hpp"
#include "agora/rng.hpp"

namespace agora {

namespace {

constexpr int kSentencesPerSegment = 5;

constexpr std::array<std::string_view, 8> kSubjects = {
    "the coastal railway",  "the city orchestra", "the river ferry",  "the northern museum",
    "the harbor bridge",    "the drama series",   "the chess league", "the observatory"};

constexpr std::array<std::string_view, 6> kPredicates = {
    "ended after its fifth season",      "opened to the public in 1998",
    "was moved to a new location",       "doubled its attendance last year",
    "was founded by a single volunteer", "closed without advance warning"};

constexpr std::array<std::string_view, 8> kFiller = {
    "Local newspapers covered the story for several weeks.",
    "Visitors often remark on the surrounding landscape.",
    "The annual report lists a number of minor changes.",
    "Several photographs of the site are kept in an archive.",
    "A regional committee reviews such matters every spring.",
    "Opinions among long-time residents remain divided.",
    "The schedule was published on a public notice board.",
    "Earlier accounts describe the same events in less detail."};

constexpr std::array<std::string_view, 5> kDeiRoleText = {
    "Hospital course notes describe the admission and treatment trajectory.",
    "Procedure notes list the surgical or invasive interventions performed.",
    "Pertinent results summarize imaging and laboratory findings.",
    "The discharge medication list records the prescribed regimen.",
    "Social history notes describe living situation and habits."};

template <std::size_t N>
std::string_view pick(const std::array<std::string_view, N>& pool, Rng& rng) {
  return pool[uniform_index(rng, N)];
}

std::string pick_other(const std::vector<std::string>& labels, const std::string& gold, Rng& rng) {
  std::vector<std::string> others;
  for (const auto& l : labels) {
    if (l != gold) others.push_back(l);
  }
  return others[uniform_index(rng, others.size())];
}

int filler_count(double noise) {
  const int n = static_cast<int>(std::lround(noise * kSentencesPerSegment));
  return std::clamp(n, 0, kSentencesPerSegment - 1);
}

// One key sentence carrying the marker, topical sentences, and `noise` filler, shuffled.
std::string compose_segment(std::string key_sentence, std::string_view topical, double noise,
                            Rng& rng) {
  const int fillers = filler_count(noise);
  std::vector<std::string> sentences;
  sentences.push_back(std::move(key_sentence));
  for (int i = 1; i < kSentencesPerSegment - fillers; ++i) sentences.emplace_back(topical);
  for (int i = 0; i < fillers; ++i) sentences.emplace_back(pick(kFiller, rng));
  fisher_yates(sentences, rng);
  std::string out;
  for (const auto& s : sentences) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

void check_common(const GeneratorParams& p, const std::vector<std::string>& labels) {
  if (p.n_tasks < 1) throw ParamError("n_tasks must be >= 1");
  if (labels.size() < 2) throw ParamError("label_set needs at least two labels");
  if (!(p.noise >= 0.0 && p.noise < 1.0)) throw ParamError("noise must be in [0, 1)");
}

std::string task_id(std::string_view prefix, int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*s-%04d", static_cast<int>(prefix.size()), prefix.data(),
                index + 1);
  return buf;
}

}  // namespace

std::string verdict_marker(std::string_view label) {
  return "<<verdict:" + std::string(label) + ">>";
}

std::string hint_marker(std::string_view label) { return "<<hint:" + std::string(label) + ">>"; }

EvidenceReading read_evidence(std::string_view text, const std::vector<std::string>& label_set) {
  EvidenceReading reading;
  std::size_t pos = 0;
  while ((pos = text.find("<<", pos)) != std::string_view::npos) {
    const auto close = text.find(">>", pos);
    if (close == std::string_view::npos) break;
    const auto body = text.substr(pos + 2, close - pos - 2);
    const auto colon = body.find(':');
    if (colon != std::string_view::npos) {
      const auto kind = body.substr(0, colon);
      if (auto label = canonical_label(body.substr(colon + 1), label_set)) {
        if (kind == "verdict" && !reading.verdict) reading.verdict = *label;
        if (kind == "hint") reading.hints.push_back(*label);
      }
    }
    pos = close + 2;
  }
  return reading;
}

std::vector<TaskInstance> generate_ses(const GeneratorParams& p) {
  const auto& labels = p.label_set.empty() ? ses_labels() : p.label_set;
  check_common(p, labels);
  if (p.n_segments < 2) throw ParamError("n_segments must be >= 2");
  if (p.n_consistent < 1 || p.n_consistent >= p.n_segments) {
    throw ParamError("n_consistent must satisfy 1 <= n_consistent < n_segments");
  }

  Rng rng(p.seed);
  std::vector<TaskInstance> tasks;
  tasks.reserve(static_cast<std::size_t>(p.n_tasks));
  for (int t = 0; t < p.n_tasks; ++t) {
    TaskInstance task;
    task.id = task_id("ses", t);
    task.scenario = Scenario::kStructuredEvidence;
    task.label_set = labels;
    const std::string_view subject = pick(kSubjects, rng);
    task.question = "Claim: " + std::string(subject) + " " + std::string(pick(kPredicates, rng)) + ".";
    task.question[7] = static_cast<char>(std::toupper(static_cast<unsigned char>(task.question[7])));
    task.gold_label = labels[uniform_index(rng, labels.size())];

    std::vector<bool> consistent(static_cast<std::size_t>(p.n_segments), false);
    std::fill_n(consistent.begin(), p.n_consistent, true);
    fisher_yates(consistent, rng);

    const std::string topical = "This evidence concerns " + std::string(subject) + ".";
    for (int s = 0; s < p.n_segments; ++s) {
      Segment seg;
      seg.name = "E" + std::to_string(s + 1);
      if (consistent[static_cast<std::size_t>(s)]) {
        seg.relevance = Relevance::kConsistent;
        seg.text = compose_segment("A direct record settles the claim " +
                                       verdict_marker(task.gold_label) + ".",
                                   topical, p.noise, rng);
      } else {
        seg.relevance = Relevance::kInconsistent;
        seg.text = compose_segment("An indirect remark leans another way " +
                                       hint_marker(pick_other(labels, task.gold_label, rng)) + ".",
                                   topical, p.noise, rng);
      }
      task.segments.push_back(std::move(seg));
    }
    tasks.push_back(std::move(task));
  }
  return tasks;
}

std::vector<TaskInstance> generate_dei(const GeneratorParams& p) {
  const auto& labels = p.label_set.empty() ? pddp_labels() : p.label_set;
  check_common(p, labels);
  const auto& roles = dei_segment_names();
  const auto informative = std::find(roles.begin(), roles.end(), p.informative_segment);
  if (informative == roles.end()) {
    throw ParamError("informative_segment '" + p.informative_segment + "' is not a DEI role");
  }
  const auto informative_index = static_cast<std::size_t>(informative - roles.begin());

  Rng rng(p.seed);
  std::vector<TaskInstance> tasks;
  tasks.reserve(static_cast<std::size_t>(p.n_tasks));
  for (int t = 0; t < p.n_tasks; ++t) {
    TaskInstance task;
    task.id = task_id("dei", t);
    task.scenario = Scenario::kDistributedEvidence;
    task.label_set = labels;
    task.question = "What is the discharge disposition of patient " + std::to_string(1000 + t) + "?";
    task.gold_label = labels[uniform_index(rng, labels.size())];
    for (std::size_t r = 0; r < roles.size(); ++r) {
      Segment seg;
      seg.name = roles[r];
      if (r == informative_index) {
        seg.text = compose_segment("The overall course points to a disposition of " +
                                       verdict_marker(task.gold_label) + ".",
                                   kDeiRoleText[r], p.noise, rng);
      } else {
        seg.text = compose_segment("A partial detail is compatible with " +
                                       hint_marker(labels[uniform_index(rng, labels.size())]) + ".",
                                   kDeiRoleText[r], p.noise, rng);
      }
      task.segments.push_back(std::move(seg));
    }
    tasks.push_back(std::move(task));
  }
  return tasks;
}

std::vector<TaskInstance> generate_tasks(const GeneratorParams& params) {
  return params.scenario == Scenario::kStructuredEvidence ? generate_ses(params)
                                                          : generate_dei(params);
}

}  // namespace agora
