#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace agora {

/// Who a message is for. An empty subset means everyone.
struct Addressees {
  std::vector<std::string> subset;

  static Addressees everyone() { return {}; }
  bool is_all() const noexcept { return subset.empty(); }
  bool includes(std::string_view agent_id) const;

  friend bool operator==(const Addressees&, const Addressees&) = default;
};

enum class Purpose {
  kDiscussion,
  kSpeakIntent,  // P2 volunteer query
  kSelfSummary,
  kInstructorSummary,
  kInstructorControl,  // speaker plans, continue/final rulings, forced decisions
};

std::string_view to_string(Purpose purpose);
Purpose parse_purpose(std::string_view name);

struct Message {
  int round_index = 1;
  std::string speaker;
  Addressees addressees;
  std::string content;
  std::optional<std::string> prediction;
  std::int64_t input_tokens = 0;
  std::int64_t output_tokens = 0;
  Purpose purpose = Purpose::kDiscussion;

  friend bool operator==(const Message&, const Message&) = default;
};

enum class Termination { kConsensus, kForcedMajorityVote, kInstructorDecision };

std::string_view to_string(Termination termination);
Termination parse_termination(std::string_view name);

struct Outcome {
  std::string final_label;
  int rounds_used = 1;
  Termination termination = Termination::kConsensus;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

/// Append-only, round-structured record of one discussion (or baseline run).
struct Transcript {
  std::string task_id;
  std::string scenario;  // "DEI" | "SES"
  std::string strategy;  // strategy string or baseline name
  std::uint64_t seed = 0;
  int max_rounds = 0;
  std::string gold_label;
  std::string token_scheme;
  std::vector<std::vector<Message>> rounds;
  std::optional<Outcome> outcome;

  std::int64_t total_input_tokens() const;
  std::int64_t total_output_tokens() const;
  std::size_t message_count() const;

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

/// JSON document: {task_id, scenario, strategy, seed, max_rounds, gold_label,
/// token_scheme, rounds:[[message...]], outcome:{label,rounds,termination},
/// totals:{input_tokens,output_tokens}}.
std::string transcript_to_json(const Transcript& transcript);

/// Throws SchemaError. When the document carries totals they must equal the
/// per-message sums (token conservation).
Transcript transcript_from_json(std::string_view json_text);

/// `[round r] <speaker> (to <addressees>): <content>`; continuation lines of
/// multi-line content are indented by two spaces.
std::string render_message(const Message& message);

}  // namespace agora
