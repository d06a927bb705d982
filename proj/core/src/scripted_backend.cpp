#include "agora/scripted_backend.hpp"

#include <algorithm>
#include <map>

#include "agora/errors.hpp"
#include "agora/generators.hpp"

namespace agora {

namespace {

struct Board {
  std::vector<std::string> order;                      // speakers by first appearance
  std::map<std::string, std::string, std::less<>> latest;  // speaker -> latest prediction
  std::vector<std::string> informed;                   // informed speakers by first appearance
};

Board read_board(std::string_view history, const std::vector<std::string>& labels) {
  Board b;
  for (const auto& e : parse_history(history)) {
    const bool informed = e.content.find(kInformedTag) != std::string::npos;
    if (informed &&
        std::find(b.informed.begin(), b.informed.end(), e.speaker) == b.informed.end()) {
      b.informed.push_back(e.speaker);
    }
    if (auto p = extract_prediction(e.content, labels)) {
      if (!b.latest.count(e.speaker)) b.order.push_back(e.speaker);
      b.latest[e.speaker] = *p;
    }
  }
  return b;
}

// Modal label; ties go to `preferred` if it is among the tied, else label_set order.
std::string plurality(const std::vector<std::string>& votes, const std::vector<std::string>& labels,
                      const std::optional<std::string>& preferred) {
  std::map<std::string, int, std::less<>> counts;
  for (const auto& v : votes) ++counts[v];
  int best = 0;
  for (const auto& [label, n] : counts) best = std::max(best, n);
  if (preferred && counts.count(*preferred) && counts[*preferred] == best) return *preferred;
  for (const auto& l : labels) {
    if (counts.count(l) && counts[l] == best) return l;
  }
  return labels.empty() ? std::string() : labels.front();
}

std::string segment_excerpt(std::string_view preamble) {
  static constexpr std::string_view kLead = "Your context segment (";
  const auto at = preamble.find(kLead);
  if (at == std::string_view::npos) return {};
  const auto close = preamble.find("):\n", at);
  if (close == std::string_view::npos) return {};
  const auto name = preamble.substr(at + kLead.size(), close - at - kLead.size());
  std::string text(preamble.substr(close + 3));
  std::replace(text.begin(), text.end(), '\n', ' ');
  return "My context (" + std::string(name) + ") says: " + text;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

}  // namespace

std::string_view to_string(Persuasion persuasion) {
  switch (persuasion) {
    case Persuasion::kAdoptMajoritySeen:
      return "adopt_majority_seen";
    case Persuasion::kAdoptFirstInformed:
      return "adopt_first_informed";
    case Persuasion::kNever:
      return "never";
  }
  return "unknown";
}

Persuasion parse_persuasion(std::string_view name) {
  for (auto p : {Persuasion::kAdoptMajoritySeen, Persuasion::kAdoptFirstInformed,
                 Persuasion::kNever}) {
    if (to_string(p) == name) return p;
  }
  throw ParamError("unknown persuasion rule '" + std::string(name) + "'");
}

std::string_view to_string(ControlRule rule) {
  return rule == ControlRule::kAlwaysContinue ? "always_continue" : "settle_on_evidence";
}

ControlRule parse_control_rule(std::string_view name) {
  for (auto r : {ControlRule::kSettleOnEvidence, ControlRule::kAlwaysContinue}) {
    if (to_string(r) == name) return r;
  }
  throw ParamError("unknown instructor control rule '" + std::string(name) + "'");
}

std::string SummarizerRule::apply(std::string_view material) const {
  if (kind == Kind::kIdentityConcat || material.size() <= max_chars) return std::string(material);
  std::size_t cut = max_chars;
  while (cut > 0 && (static_cast<unsigned char>(material[cut]) & 0xC0) == 0x80) --cut;
  return std::string(material.substr(0, cut));
}

SummarizerRule parse_summarizer(std::string_view text) {
  if (text == "identity_concat") return SummarizerRule::identity();
  std::string_view digits;
  if (text.rfind("truncate_to_n_chars(", 0) == 0 && text.back() == ')') {
    digits = text.substr(20, text.size() - 21);
  } else if (text.rfind("truncate:", 0) == 0) {
    digits = text.substr(9);
  } else {
    throw ParamError("unknown summarizer '" + std::string(text) + "'");
  }
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(),
                                     [](char c) { return c >= '0' && c <= '9'; })) {
    throw ParamError("summarizer length must be a non-negative integer");
  }
  return SummarizerRule::truncate(std::stoull(std::string(digits)));
}

std::string to_string(const SummarizerRule& rule) {
  if (rule.kind == SummarizerRule::Kind::kIdentityConcat) return "identity_concat";
  return "truncate_to_n_chars(" + std::to_string(rule.max_chars) + ")";
}

std::vector<HistoryEntry> parse_history(std::string_view history) {
  static constexpr std::string_view kHead = "[round ";
  std::vector<HistoryEntry> entries;
  std::size_t start = 0;
  while (start < history.size()) {
    auto end = history.find('\n', start);
    if (end == std::string_view::npos) end = history.size();
    const auto line = history.substr(start, end - start);
    start = end + 1;

    if (line.rfind(kHead, 0) == 0) {
      const auto close = line.find("] ");
      const auto to = line.find(" (to ");
      const auto colon = line.find("): ");
      if (close == std::string_view::npos || to == std::string_view::npos ||
          colon == std::string_view::npos || !(close < to && to < colon)) {
        continue;
      }
      HistoryEntry e;
      const auto num = line.substr(kHead.size(), close - kHead.size());
      if (num.empty() || !std::all_of(num.begin(), num.end(),
                                      [](char c) { return c >= '0' && c <= '9'; })) {
        continue;
      }
      e.round_index = std::stoi(std::string(num));
      e.speaker = std::string(line.substr(close + 2, to - close - 2));
      e.content = std::string(line.substr(colon + 3));
      entries.push_back(std::move(e));
    } else if (line.rfind("  ", 0) == 0 && !entries.empty()) {
      entries.back().content += '\n';
      entries.back().content += line.substr(2);
    }
  }
  return entries;
}

ScriptedAgent::ScriptedAgent(ScriptedAgentConfig config, const PromptTemplates& templates)
    : config_(std::move(config)), templates_(templates) {
  if (config_.scheme == TokenScheme::kProviderReported) {
    throw ParamError("scripted agents count tokens locally; provider_reported is not available");
  }
  if (config_.stubbornness < 0) throw ParamError("stubbornness must be >= 0");
}

RawReply ScriptedAgent::complete(const TurnRequest& req) {
  const auto& labels = req.label_set;
  const auto evidence = read_evidence(req.view.role_preamble, labels);

  std::string initial;
  if (config_.initial_label) {
    initial = canonical_label(*config_.initial_label, labels).value_or(*config_.initial_label);
  } else if (evidence.verdict) {
    initial = *evidence.verdict;
  } else if (!evidence.hints.empty()) {
    initial = plurality(evidence.hints, labels, std::nullopt);
  } else {
    initial = labels.empty() ? std::string() : labels.front();
  }
  const bool informed = config_.is_informed.value_or(evidence.verdict.has_value());

  const Board board = read_board(req.view.visible_history, labels);
  const auto own = board.latest.find(req.agent_id);
  const std::string current = own != board.latest.end() ? own->second : initial;

  std::string belief = current;
  if (config_.persuasion == Persuasion::kNever) {
    belief = initial;
  } else if (!informed && req.round_index > config_.stubbornness) {
    if (config_.persuasion == Persuasion::kAdoptFirstInformed) {
      for (const auto& speaker : board.informed) {
        if (speaker == req.agent_id) continue;
        if (auto it = board.latest.find(speaker); it != board.latest.end()) {
          belief = it->second;
          break;
        }
      }
    } else {
      std::vector<std::string> votes;
      for (const auto& [speaker, label] : board.latest) votes.push_back(label);
      if (own == board.latest.end()) votes.push_back(current);
      belief = plurality(votes, labels, current);
    }
  }

  std::vector<std::string> dissenters;
  for (const auto& speaker : board.order) {
    if (speaker != req.agent_id && board.latest.at(speaker) != belief) dissenters.push_back(speaker);
  }

  RawReply reply;
  const std::string tag = "[r" + std::to_string(req.round_index) + ":" + req.agent_id + "]";
  switch (req.kind) {
    case TurnKind::kDiscussion:
    case TurnKind::kFinal: {
      std::string body = tag + " " + std::string(informed ? kInformedTag : "(uninformed)");
      if (const auto excerpt = segment_excerpt(req.view.role_preamble); !excerpt.empty()) {
        body += " " + excerpt;
      }
      body += " I conclude " + belief + ". PREDICTION: " + belief;
      if (req.kind == TurnKind::kDiscussion && req.point_to_point) {
        std::vector<std::string> to;
        for (const auto& id : config_.fixed_addressees) {
          if (id != req.agent_id) to.push_back(id);
        }
        if (config_.fixed_addressees.empty() && req.round_index > 1) to = dissenters;
        reply.content = "TO: " + (to.empty() ? std::string("all") : join(to)) + "\n" + body;
      } else {
        reply.content = std::move(body);
      }
      break;
    }
    case TurnKind::kIntent: {
      const bool speak = req.round_index == 1 || !dissenters.empty();
      reply.content = speak ? "SPEAK: yes" : "SPEAK: no";
      break;
    }
    case TurnKind::kSummary:
      reply.content = config_.summarizer.apply(req.view.visible_history);
      break;
    case TurnKind::kPlan:
    case TurnKind::kControl:
      reply.content = "(no instructor role)";
      break;
  }
  reply.input_tokens = count_tokens(templates_.render(req.kind, req.view), config_.scheme);
  reply.output_tokens = count_tokens(reply.content, config_.scheme);
  return reply;
}

ScriptedInstructor::ScriptedInstructor(ScriptedInstructorConfig config,
                                       const PromptTemplates& templates)
    : config_(std::move(config)), templates_(templates) {
  if (config_.scheme == TokenScheme::kProviderReported) {
    throw ParamError("scripted agents count tokens locally; provider_reported is not available");
  }
}

RawReply ScriptedInstructor::complete(const TurnRequest& req) {
  const auto& labels = req.label_set;
  const Board board = read_board(req.view.visible_history, labels);

  std::optional<std::string> informed_label;
  for (const auto& speaker : board.informed) {
    if (auto it = board.latest.find(speaker); it != board.latest.end()) {
      informed_label = it->second;
      break;
    }
  }
  std::vector<std::string> votes;
  for (const auto& speaker : board.order) votes.push_back(board.latest.at(speaker));
  const std::string leading = informed_label ? *informed_label : plurality(votes, labels, {});

  RawReply reply;
  switch (req.kind) {
    case TurnKind::kPlan: {
      std::vector<std::string> speakers;
      if (req.round_index > 1) {
        for (const auto& id : req.peers) {
          auto it = board.latest.find(id);
          if (it == board.latest.end() || it->second != leading) speakers.push_back(id);
        }
      }
      if (speakers.empty()) speakers = req.peers;
      reply.content = "SPEAKERS: " + join(speakers);
      break;
    }
    case TurnKind::kControl: {
      bool unanimous = !req.peers.empty();
      for (const auto& id : req.peers) {
        auto it = board.latest.find(id);
        if (it == board.latest.end() || it->second != board.latest.at(req.peers.front())) {
          unanimous = false;
        }
      }
      if (config_.control == ControlRule::kAlwaysContinue) {
        reply.content = "CONTINUE";
      } else if (informed_label) {
        reply.content = "FINAL:" + *informed_label;
      } else if (unanimous) {
        reply.content = "FINAL:" + board.latest.at(req.peers.front());
      } else {
        reply.content = "CONTINUE";
      }
      break;
    }
    case TurnKind::kFinal:
      reply.content = "FINAL:" + leading;
      break;
    case TurnKind::kSummary:
      reply.content = config_.summarizer.apply(req.view.visible_history);
      break;
    case TurnKind::kDiscussion:
    case TurnKind::kIntent:
      reply.content = "(instructors do not take discussion turns)";
      break;
  }
  reply.input_tokens = count_tokens(templates_.render(req.kind, req.view), config_.scheme);
  reply.output_tokens = count_tokens(reply.content, config_.scheme);
  return reply;
}

}  // namespace agora
