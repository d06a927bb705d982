#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agora/prompt.hpp"
#include "agora/tokens.hpp"
#include "agora/transcript.hpp"

namespace agora {

enum class AgentKind { kDiscussion, kInstructor };

struct AgentSpec {
  std::string id;
  AgentKind kind = AgentKind::kDiscussion;
  std::optional<std::string> segment_ref;  // discussion agents only
  std::string backend;                     // key into the backend bindings
};

/// One backend call: who is asking, for what, and what they see.
struct TurnRequest {
  std::string agent_id;
  AgentKind agent_kind = AgentKind::kDiscussion;
  TurnKind kind = TurnKind::kDiscussion;
  AgentView view;
  int round_index = 1;
  std::uint64_t seed = 0;
  std::vector<std::string> label_set;
  std::vector<std::string> peers;  // addressable (I4) or selectable (P3) agent ids
  bool point_to_point = false;     // I4 turn: an addressee line is expected
};

struct RawReply {
  std::string content;
  std::int64_t input_tokens = 0;
  std::int64_t output_tokens = 0;
};

/// A model or a script answering turns. Implementations must tolerate
/// concurrent calls from distinct discussions.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual RawReply complete(const TurnRequest& request) = 0;
  virtual TokenScheme token_scheme() const = 0;
};

struct ControlDirective {
  bool finalize = false;
  std::string label;  // set when finalize

  friend bool operator==(const ControlDirective&, const ControlDirective&) = default;
};

struct AgentReply {
  std::string content;
  std::optional<std::string> prediction;
  std::optional<bool> wants_to_speak;
  std::optional<Addressees> addressees;
  std::optional<std::vector<std::string>> speakers;
  std::optional<ControlDirective> control;
  std::int64_t input_tokens = 0;
  std::int64_t output_tokens = 0;
  int attempts = 1;
};

/// Last line carrying `PREDICTION: <label>` with a label from `label_set`,
/// canonicalized. Labels compare case-insensitively.
std::optional<std::string> extract_prediction(std::string_view content,
                                              const std::vector<std::string>& label_set);

/// `CONTINUE` or `FINAL:<label>` (keywords byte-exact, label case-insensitive).
std::optional<ControlDirective> extract_control(std::string_view content,
                                                const std::vector<std::string>& label_set);

/// Calls the backend and parses the fields the turn requires. A reply missing
/// a required field is reprompted once; a second failure raises ProtocolError.
/// Token counts of both calls are summed into the reply.
AgentReply respond(Backend& backend, const TurnRequest& request);

}  // namespace agora
