#include "agora/task.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "agora/errors.hpp"
#include "json.hpp"

namespace agora {

using nlohmann::json;

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  auto is_ws = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_ws(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && is_ws(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

const json& require(const json& obj, const char* key, const std::string& ptr) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(ptr + "/" + key, "missing required field");
  return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& ptr) {
  const json& v = require(obj, key, ptr);
  if (!v.is_string()) throw SchemaError(ptr + "/" + key, "expected a string");
  return v.get<std::string>();
}

TaskInstance parse_task(const json& j, const std::string& ptr) {
  if (!j.is_object()) throw SchemaError(ptr, "expected an object");
  TaskInstance task;
  task.id = require_string(j, "id", ptr);
  try {
    task.scenario = parse_scenario(require_string(j, "scenario", ptr));
  } catch (const ParamError& e) {
    throw SchemaError(ptr + "/scenario", e.what());
  }
  task.question = require_string(j, "question", ptr);
  task.gold_label = require_string(j, "gold_label", ptr);

  const json& labels = require(j, "label_set", ptr);
  if (!labels.is_array()) throw SchemaError(ptr + "/label_set", "expected an array");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i].is_string()) {
      throw SchemaError(ptr + "/label_set/" + std::to_string(i), "expected a string");
    }
    task.label_set.push_back(labels[i].get<std::string>());
  }

  const json& segs = require(j, "segments", ptr);
  if (!segs.is_array()) throw SchemaError(ptr + "/segments", "expected an array");
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::string sp = ptr + "/segments/" + std::to_string(i);
    if (!segs[i].is_object()) throw SchemaError(sp, "expected an object");
    Segment seg;
    seg.name = require_string(segs[i], "name", sp);
    seg.text = require_string(segs[i], "text", sp);
    if (auto it = segs[i].find("relevance"); it != segs[i].end() && !it->is_null()) {
      if (!it->is_string()) throw SchemaError(sp + "/relevance", "expected a string");
      const auto r = it->get<std::string>();
      if (r == "consistent") {
        seg.relevance = Relevance::kConsistent;
      } else if (r == "inconsistent") {
        seg.relevance = Relevance::kInconsistent;
      } else {
        throw SchemaError(sp + "/relevance", "expected 'consistent' or 'inconsistent'");
      }
    }
    task.segments.push_back(std::move(seg));
  }
  return task;
}

json task_to_json(const TaskInstance& t) {
  json segs = json::array();
  for (const auto& s : t.segments) {
    json js = {{"name", s.name}, {"text", s.text}};
    if (s.relevance) js["relevance"] = std::string(to_string(*s.relevance));
    segs.push_back(std::move(js));
  }
  return json{{"id", t.id},
              {"scenario", std::string(to_string(t.scenario))},
              {"question", t.question},
              {"label_set", t.label_set},
              {"gold_label", t.gold_label},
              {"segments", std::move(segs)}};
}

}  // namespace

const Segment* TaskInstance::find_segment(std::string_view name) const {
  for (const auto& s : segments) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const std::vector<std::string>& pddp_labels() {
  static const std::vector<std::string> labels = {"expired", "extended care",
                                                  "home with service", "home"};
  return labels;
}

const std::vector<std::string>& ses_labels() {
  static const std::vector<std::string> labels = {"supported", "refuting", "neutral"};
  return labels;
}

const std::vector<std::string>& dei_segment_names() {
  static const std::vector<std::string> names = {"BHC", "MSIP", "PR", "DM", "SH"};
  return names;
}

std::string_view to_string(Scenario scenario) {
  return scenario == Scenario::kDistributedEvidence ? "DEI" : "SES";
}

Scenario parse_scenario(std::string_view name) {
  const std::string n = lower(name);
  if (n == "dei") return Scenario::kDistributedEvidence;
  if (n == "ses") return Scenario::kStructuredEvidence;
  throw ParamError("unknown scenario '" + std::string(name) + "' (expected DEI or SES)");
}

std::string_view to_string(Relevance relevance) {
  return relevance == Relevance::kConsistent ? "consistent" : "inconsistent";
}

std::optional<std::string> canonical_label(std::string_view text,
                                           const std::vector<std::string>& label_set) {
  std::string_view t = trim(text);
  while (!t.empty() && (t.back() == '.' || t.back() == '!' || t.back() == ',' ||
                        t.back() == ';' || t.back() == '"' || t.back() == '\'' ||
                        t.back() == '*' || t.back() == '`')) {
    t.remove_suffix(1);
  }
  while (!t.empty() && (t.front() == '"' || t.front() == '\'' || t.front() == '*' ||
                        t.front() == '`')) {
    t.remove_prefix(1);
  }
  t = trim(t);
  const std::string needle = lower(t);
  for (const auto& label : label_set) {
    if (lower(label) == needle) return label;
  }
  return std::nullopt;
}

void validate_task(const TaskInstance& task, const std::string& ptr) {
  if (task.id.empty()) throw SchemaError(ptr + "/id", "must be non-empty");
  if (task.label_set.empty()) throw SchemaError(ptr + "/label_set", "must be non-empty");
  std::set<std::string> seen_labels;
  for (std::size_t i = 0; i < task.label_set.size(); ++i) {
    if (task.label_set[i].empty() || !seen_labels.insert(lower(task.label_set[i])).second) {
      throw SchemaError(ptr + "/label_set/" + std::to_string(i),
                        "labels must be non-empty and unique (case-insensitive)");
    }
  }
  if (std::find(task.label_set.begin(), task.label_set.end(), task.gold_label) ==
      task.label_set.end()) {
    throw SchemaError(ptr + "/gold_label", "'" + task.gold_label + "' is not in label_set");
  }
  if (task.segments.size() < 2) {
    throw SchemaError(ptr + "/segments", "at least two segments are required");
  }
  std::set<std::string> names;
  const bool ses = task.scenario == Scenario::kStructuredEvidence;
  const auto& dei_names = dei_segment_names();
  for (std::size_t i = 0; i < task.segments.size(); ++i) {
    const auto& seg = task.segments[i];
    const std::string sp = ptr + "/segments/" + std::to_string(i);
    if (seg.name.empty()) throw SchemaError(sp + "/name", "must be non-empty");
    if (!names.insert(seg.name).second) {
      throw SchemaError(sp + "/name", "duplicate segment name '" + seg.name + "'");
    }
    if (ses && !seg.relevance) {
      throw SchemaError(sp + "/relevance", "SES segments must carry a relevance tag");
    }
    if (!ses) {
      if (seg.relevance) throw SchemaError(sp + "/relevance", "DEI segments carry no relevance");
      if (std::find(dei_names.begin(), dei_names.end(), seg.name) == dei_names.end()) {
        throw SchemaError(sp + "/name", "'" + seg.name + "' is not a DEI segment role");
      }
    }
  }
}

std::vector<TaskInstance> parse_tasks(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("", "expected an object");
  const json& tasks = require(doc, "tasks", "");
  if (!tasks.is_array()) throw SchemaError("/tasks", "expected an array");

  std::vector<TaskInstance> out;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string ptr = "/tasks/" + std::to_string(i);
    TaskInstance task = parse_task(tasks[i], ptr);
    validate_task(task, ptr);
    if (!ids.insert(task.id).second) throw SchemaError(ptr + "/id", "duplicate task id");
    out.push_back(std::move(task));
  }
  return out;
}

std::vector<TaskInstance> load_tasks(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("", "cannot open task file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_tasks(buf.str());
}

std::string tasks_to_json(const std::vector<TaskInstance>& tasks) {
  json arr = json::array();
  for (const auto& t : tasks) arr.push_back(task_to_json(t));
  return json{{"tasks", std::move(arr)}}.dump(2) + "\n";
}

}  // namespace agora
