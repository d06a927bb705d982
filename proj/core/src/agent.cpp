#include "agora/agent.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "agora/errors.hpp"
#include "agora/task.hpp"

namespace agora {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

// Strips markdown emphasis/backticks an LLM may wrap around a marker line.
std::string_view unwrap(std::string_view s) {
  s = trim(s);
  while (!s.empty() && (s.front() == '*' || s.front() == '`' || s.front() == '>')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == '*' || s.back() == '`')) s.remove_suffix(1);
  return trim(s);
}

// Value of the last line starting with `key` (case-insensitive), if any.
std::optional<std::string_view> keyed_line(std::string_view content, std::string_view key) {
  const auto lines = split_lines(content);
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    const auto line = unwrap(*it);
    if (line.size() >= key.size() && upper(line.substr(0, key.size())) == key) {
      return trim(line.substr(key.size()));
    }
  }
  return std::nullopt;
}

std::vector<std::string> split_ids(std::string_view list) {
  std::vector<std::string> ids;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) ids.push_back(std::move(current));
    current.clear();
  };
  for (char c : list) {
    if (c == ',' || c == ';' || std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else if (c != '`' && c != '*' && c != '.') {
      current += c;
    }
  }
  flush();
  return ids;
}

struct Parsed {
  AgentReply reply;
  std::string problem;  // empty when the reply satisfies the turn
};

Parsed interpret(const RawReply& raw, const TurnRequest& req) {
  Parsed p;
  p.reply.content = raw.content;
  p.reply.input_tokens = raw.input_tokens;
  p.reply.output_tokens = raw.output_tokens;
  auto& r = p.reply;

  switch (req.kind) {
    case TurnKind::kDiscussion: {
      r.prediction = extract_prediction(raw.content, req.label_set);
      if (!r.prediction) {
        p.problem = "missing `PREDICTION: <label>` line";
        break;
      }
      if (req.point_to_point) {
        const auto to = keyed_line(raw.content, "TO:");
        if (!to || upper(*to) == "ALL") {
          r.addressees = Addressees::everyone();
          break;
        }
        Addressees a;
        for (auto& id : split_ids(*to)) {
          if (id == req.agent_id) {
            p.problem = "an agent cannot address itself";
            break;
          }
          if (std::find(req.peers.begin(), req.peers.end(), id) == req.peers.end()) {
            p.problem = "unknown addressee '" + id + "'";
            break;
          }
          if (std::find(a.subset.begin(), a.subset.end(), id) == a.subset.end()) {
            a.subset.push_back(id);
          }
        }
        if (p.problem.empty()) r.addressees = std::move(a);
      }
      break;
    }
    case TurnKind::kIntent: {
      const auto v = keyed_line(raw.content, "SPEAK:");
      if (v) {
        const auto u = upper(*v);
        if (u.rfind("YES", 0) == 0 || u.rfind("TRUE", 0) == 0) r.wants_to_speak = true;
        if (u.rfind("NO", 0) == 0 || u.rfind("FALSE", 0) == 0) r.wants_to_speak = false;
      }
      if (!r.wants_to_speak) p.problem = "missing `SPEAK: yes|no` line";
      break;
    }
    case TurnKind::kSummary:
      break;
    case TurnKind::kPlan: {
      const auto v = keyed_line(raw.content, "SPEAKERS:");
      if (!v) {
        p.problem = "missing `SPEAKERS:` line";
        break;
      }
      std::vector<std::string> speakers;
      std::set<std::string> seen;
      for (auto& id : split_ids(*v)) {
        if (std::find(req.peers.begin(), req.peers.end(), id) == req.peers.end()) {
          p.problem = "unknown speaker '" + id + "'";
          break;
        }
        if (!seen.insert(id).second) {
          p.problem = "duplicate speaker '" + id + "'";
          break;
        }
        speakers.push_back(std::move(id));
      }
      if (p.problem.empty() && speakers.empty()) p.problem = "no speakers selected";
      if (p.problem.empty()) r.speakers = std::move(speakers);
      break;
    }
    case TurnKind::kControl:
      r.control = extract_control(raw.content, req.label_set);
      if (!r.control) p.problem = "expected `CONTINUE` or `FINAL:<label>`";
      break;
    case TurnKind::kFinal: {
      auto c = extract_control(raw.content, req.label_set);
      if (c && c->finalize) {
        r.prediction = c->label;
      } else {
        r.prediction = extract_prediction(raw.content, req.label_set);
      }
      if (!r.prediction) p.problem = "missing `FINAL:<label>` line";
      break;
    }
  }
  return p;
}

}  // namespace

std::optional<std::string> extract_prediction(std::string_view content,
                                              const std::vector<std::string>& label_set) {
  static constexpr std::string_view kMarker = "PREDICTION:";
  const auto lines = split_lines(content);
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    const std::string u = upper(*it);
    const auto at = u.rfind(kMarker);
    if (at == std::string::npos) continue;
    if (auto label = canonical_label(it->substr(at + kMarker.size()), label_set)) return label;
  }
  return std::nullopt;
}

std::optional<ControlDirective> extract_control(std::string_view content,
                                                const std::vector<std::string>& label_set) {
  const auto lines = split_lines(content);
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    const auto line = unwrap(*it);
    if (line == "CONTINUE") return ControlDirective{false, {}};
    if (line.rfind("FINAL:", 0) == 0) {
      if (auto label = canonical_label(line.substr(6), label_set)) {
        return ControlDirective{true, *label};
      }
    }
  }
  return std::nullopt;
}

AgentReply respond(Backend& backend, const TurnRequest& request) {
  Parsed first = interpret(backend.complete(request), request);
  if (first.problem.empty()) return std::move(first.reply);

  TurnRequest retry = request;
  retry.view.turn_instruction = reprompt_instruction(request.view.turn_instruction, first.problem);
  Parsed second = interpret(backend.complete(retry), retry);
  if (!second.problem.empty()) {
    throw ProtocolError("agent '" + request.agent_id + "' " + std::string(to_string(request.kind)) +
                        " reply unusable after reprompt: " + second.problem);
  }
  second.reply.input_tokens += first.reply.input_tokens;
  second.reply.output_tokens += first.reply.output_tokens;
  second.reply.attempts = 2;
  return std::move(second.reply);
}

}  // namespace agora
