#include "agora/transcript.hpp"

#include <algorithm>

#include "agora/errors.hpp"
#include "json.hpp"

namespace agora {

using nlohmann::json;

bool Addressees::includes(std::string_view agent_id) const {
  return is_all() || std::find(subset.begin(), subset.end(), agent_id) != subset.end();
}

std::string_view to_string(Purpose purpose) {
  switch (purpose) {
    case Purpose::kDiscussion:
      return "discussion";
    case Purpose::kSpeakIntent:
      return "speak_intent";
    case Purpose::kSelfSummary:
      return "self_summary";
    case Purpose::kInstructorSummary:
      return "instructor_summary";
    case Purpose::kInstructorControl:
      return "instructor_control";
  }
  return "unknown";
}

Purpose parse_purpose(std::string_view name) {
  for (auto p : {Purpose::kDiscussion, Purpose::kSpeakIntent, Purpose::kSelfSummary,
                 Purpose::kInstructorSummary, Purpose::kInstructorControl}) {
    if (to_string(p) == name) return p;
  }
  throw ParamError("unknown message purpose '" + std::string(name) + "'");
}

std::string_view to_string(Termination termination) {
  switch (termination) {
    case Termination::kConsensus:
      return "consensus";
    case Termination::kForcedMajorityVote:
      return "forced_majority_vote";
    case Termination::kInstructorDecision:
      return "instructor_decision";
  }
  return "unknown";
}

Termination parse_termination(std::string_view name) {
  for (auto t : {Termination::kConsensus, Termination::kForcedMajorityVote,
                 Termination::kInstructorDecision}) {
    if (to_string(t) == name) return t;
  }
  throw ParamError("unknown termination '" + std::string(name) + "'");
}

std::int64_t Transcript::total_input_tokens() const {
  std::int64_t sum = 0;
  for (const auto& round : rounds)
    for (const auto& m : round) sum += m.input_tokens;
  return sum;
}

std::int64_t Transcript::total_output_tokens() const {
  std::int64_t sum = 0;
  for (const auto& round : rounds)
    for (const auto& m : round) sum += m.output_tokens;
  return sum;
}

std::size_t Transcript::message_count() const {
  std::size_t n = 0;
  for (const auto& round : rounds) n += round.size();
  return n;
}

std::string render_message(const Message& m) {
  std::string out = "[round " + std::to_string(m.round_index) + "] " + m.speaker + " (to ";
  if (m.addressees.is_all()) {
    out += "all";
  } else {
    for (std::size_t i = 0; i < m.addressees.subset.size(); ++i) {
      if (i) out += ", ";
      out += m.addressees.subset[i];
    }
  }
  out += "): ";
  for (char c : m.content) {
    out += c;
    if (c == '\n') out += "  ";
  }
  return out;
}

namespace {

json message_to_json(const Message& m) {
  json j;
  j["round"] = m.round_index;
  j["speaker"] = m.speaker;
  j["addressees"] = m.addressees.is_all() ? json("all") : json(m.addressees.subset);
  j["content"] = m.content;
  j["prediction"] = m.prediction ? json(*m.prediction) : json(nullptr);
  j["input_tokens"] = m.input_tokens;
  j["output_tokens"] = m.output_tokens;
  j["purpose"] = std::string(to_string(m.purpose));
  return j;
}

template <typename T>
T field(const json& obj, const char* key, const std::string& ptr) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(ptr + "/" + key, "missing required field");
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(ptr + "/" + key, e.what());
  }
}

std::int64_t token_field(const json& obj, const char* key, const std::string& ptr) {
  const auto v = field<std::int64_t>(obj, key, ptr);
  if (v < 0) throw SchemaError(ptr + "/" + key, "token counts must be non-negative");
  return v;
}

Message message_from_json(const json& j, const std::string& ptr) {
  if (!j.is_object()) throw SchemaError(ptr, "expected an object");
  Message m;
  m.round_index = field<int>(j, "round", ptr);
  m.speaker = field<std::string>(j, "speaker", ptr);
  const auto it = j.find("addressees");
  if (it == j.end()) throw SchemaError(ptr + "/addressees", "missing required field");
  if (it->is_string()) {
    if (it->get<std::string>() != "all") throw SchemaError(ptr + "/addressees", "expected \"all\"");
  } else if (it->is_array()) {
    m.addressees.subset = it->get<std::vector<std::string>>();
    if (m.addressees.subset.empty()) throw SchemaError(ptr + "/addressees", "empty subset");
  } else {
    throw SchemaError(ptr + "/addressees", "expected \"all\" or an array");
  }
  m.content = field<std::string>(j, "content", ptr);
  if (auto p = j.find("prediction"); p != j.end() && !p->is_null()) {
    if (!p->is_string()) throw SchemaError(ptr + "/prediction", "expected string or null");
    m.prediction = p->get<std::string>();
  }
  m.input_tokens = token_field(j, "input_tokens", ptr);
  m.output_tokens = token_field(j, "output_tokens", ptr);
  try {
    m.purpose = parse_purpose(field<std::string>(j, "purpose", ptr));
  } catch (const ParamError& e) {
    throw SchemaError(ptr + "/purpose", e.what());
  }
  return m;
}

}  // namespace

std::string transcript_to_json(const Transcript& t) {
  json rounds = json::array();
  for (const auto& round : t.rounds) {
    json r = json::array();
    for (const auto& m : round) r.push_back(message_to_json(m));
    rounds.push_back(std::move(r));
  }
  json j;
  j["task_id"] = t.task_id;
  j["scenario"] = t.scenario;
  j["strategy"] = t.strategy;
  j["seed"] = t.seed;
  j["max_rounds"] = t.max_rounds;
  j["gold_label"] = t.gold_label;
  j["token_scheme"] = t.token_scheme;
  j["rounds"] = std::move(rounds);
  if (t.outcome) {
    j["outcome"] = {{"label", t.outcome->final_label},
                    {"rounds", t.outcome->rounds_used},
                    {"termination", std::string(to_string(t.outcome->termination))}};
  } else {
    j["outcome"] = nullptr;
  }
  j["totals"] = {{"input_tokens", t.total_input_tokens()},
                 {"output_tokens", t.total_output_tokens()}};
  return j.dump(2) + "\n";
}

Transcript transcript_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("", "expected an object");

  Transcript t;
  t.task_id = field<std::string>(doc, "task_id", "");
  t.strategy = field<std::string>(doc, "strategy", "");
  t.seed = field<std::uint64_t>(doc, "seed", "");
  t.scenario = doc.value("scenario", std::string());
  t.max_rounds = doc.value("max_rounds", 0);
  t.gold_label = doc.value("gold_label", std::string());
  t.token_scheme = doc.value("token_scheme", std::string());

  const auto rounds = doc.find("rounds");
  if (rounds == doc.end() || !rounds->is_array()) throw SchemaError("/rounds", "expected an array");
  for (std::size_t r = 0; r < rounds->size(); ++r) {
    const std::string rp = "/rounds/" + std::to_string(r);
    const json& round = (*rounds)[r];
    if (!round.is_array()) throw SchemaError(rp, "expected an array");
    std::vector<Message> msgs;
    for (std::size_t i = 0; i < round.size(); ++i) {
      msgs.push_back(message_from_json(round[i], rp + "/" + std::to_string(i)));
      if (msgs.back().round_index != static_cast<int>(r) + 1) {
        throw SchemaError(rp + "/" + std::to_string(i) + "/round",
                          "round index does not match its position");
      }
    }
    t.rounds.push_back(std::move(msgs));
  }

  if (auto o = doc.find("outcome"); o != doc.end() && !o->is_null()) {
    if (!o->is_object()) throw SchemaError("/outcome", "expected an object");
    Outcome out;
    out.final_label = field<std::string>(*o, "label", "/outcome");
    out.rounds_used = field<int>(*o, "rounds", "/outcome");
    try {
      out.termination = parse_termination(field<std::string>(*o, "termination", "/outcome"));
    } catch (const ParamError& e) {
      throw SchemaError("/outcome/termination", e.what());
    }
    t.outcome = std::move(out);
  }

  if (auto totals = doc.find("totals"); totals != doc.end()) {
    if (!totals->is_object()) throw SchemaError("/totals", "expected an object");
    const auto in = token_field(*totals, "input_tokens", "/totals");
    const auto out = token_field(*totals, "output_tokens", "/totals");
    if (in != t.total_input_tokens() || out != t.total_output_tokens()) {
      throw SchemaError("/totals", "totals do not equal the per-message token sums");
    }
  }
  return t;
}

}  // namespace agora
