#include <fstream>
#include <set>
#include <sstream>

#include "agora/cli.hpp"
#include "agora/errors.hpp"
#include "agora/strategy.hpp"
#include "json.hpp"

namespace agora::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& ptr, std::initializer_list<const char*> keys) {
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) throw SchemaError(ptr + "/" + k, "unknown key");
  }
}

const json& object_at(const json& parent, const char* key, const std::string& ptr) {
  const json& v = parent.at(key);
  if (!v.is_object()) throw SchemaError(ptr + "/" + key, "expected an object");
  return v;
}

template <typename T>
T get(const json& obj, const char* key, const std::string& ptr) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw SchemaError(ptr + "/" + key, "missing or mistyped value");
  }
}

template <typename T>
void maybe(const json& obj, const char* key, const std::string& ptr, T& target) {
  if (obj.contains(key)) target = get<T>(obj, key, ptr);
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

BackendKind parse_backend(const std::string& name, const std::string& ptr) {
  if (name == "scripted") return BackendKind::kScripted;
  if (name == "http") return BackendKind::kHttp;
  throw SchemaError(ptr, "backend must be 'scripted' or 'http'");
}

GeneratorParams parse_generator(const json& g, const std::string& ptr) {
  reject_unknown(g, ptr, {"scenario", "n_tasks", "n_segments", "label_set", "informative_segment",
                          "n_consistent", "noise", "seed"});
  GeneratorParams p;
  p.scenario = parse_scenario(get<std::string>(g, "scenario", ptr));
  maybe(g, "n_tasks", ptr, p.n_tasks);
  maybe(g, "n_segments", ptr, p.n_segments);
  maybe(g, "label_set", ptr, p.label_set);
  maybe(g, "informative_segment", ptr, p.informative_segment);
  maybe(g, "n_consistent", ptr, p.n_consistent);
  maybe(g, "noise", ptr, p.noise);
  maybe(g, "seed", ptr, p.seed);
  return p;
}

void parse_discussion(const json& a, const std::string& ptr, ExperimentConfig& cfg) {
  reject_unknown(a, ptr, {"backend", "initial_label", "stubbornness", "persuasion", "is_informed",
                          "summarizer", "fixed_addressees"});
  auto& d = cfg.discussion;
  if (a.contains("backend")) d.backend = parse_backend(get<std::string>(a, "backend", ptr), ptr + "/backend");
  auto& s = d.scripted;
  if (a.contains("initial_label")) s.initial_label = get<std::string>(a, "initial_label", ptr);
  maybe(a, "stubbornness", ptr, s.stubbornness);
  if (s.stubbornness < 0) throw SchemaError(ptr + "/stubbornness", "must be >= 0");
  if (a.contains("persuasion")) s.persuasion = parse_persuasion(get<std::string>(a, "persuasion", ptr));
  if (a.contains("is_informed")) s.is_informed = get<bool>(a, "is_informed", ptr);
  if (a.contains("summarizer")) s.summarizer = parse_summarizer(get<std::string>(a, "summarizer", ptr));
  maybe(a, "fixed_addressees", ptr, s.fixed_addressees);
}

void parse_instructor(const json& a, const std::string& ptr, ExperimentConfig& cfg) {
  reject_unknown(a, ptr, {"backend", "control", "summarizer"});
  auto& d = cfg.instructor;
  if (a.contains("backend")) d.backend = parse_backend(get<std::string>(a, "backend", ptr), ptr + "/backend");
  if (a.contains("control")) d.instructor.control = parse_control_rule(get<std::string>(a, "control", ptr));
  if (a.contains("summarizer")) {
    d.instructor.summarizer = parse_summarizer(get<std::string>(a, "summarizer", ptr));
  }
}

LlmBackendConfig parse_llm(const json& l, const std::string& ptr) {
  reject_unknown(l, ptr, {"endpoint_url", "model_name", "temperature", "max_output_tokens", "retries",
                          "backoff_ms", "api_key_env", "max_in_flight", "timeout_seconds",
                          "token_scheme"});
  LlmBackendConfig c;
  c.endpoint_url = get<std::string>(l, "endpoint_url", ptr);
  c.model_name = get<std::string>(l, "model_name", ptr);
  maybe(l, "temperature", ptr, c.temperature);
  maybe(l, "max_output_tokens", ptr, c.max_output_tokens);
  maybe(l, "retries", ptr, c.retries);
  maybe(l, "backoff_ms", ptr, c.backoff_ms);
  maybe(l, "api_key_env", ptr, c.api_key_env);
  maybe(l, "max_in_flight", ptr, c.max_in_flight);
  maybe(l, "timeout_seconds", ptr, c.timeout_seconds);
  if (l.contains("token_scheme")) c.scheme = parse_token_scheme(get<std::string>(l, "token_scheme", ptr));
  validate(c);
  return c;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view json_text,
                                         const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("", "expected an object");
  reject_unknown(doc, "", {"strategies", "tasks", "max_rounds", "seed", "token_scheme", "agents", "llm",
                           "tar", "baselines", "engine", "templates_dir", "output"});

  ExperimentConfig cfg;
  cfg.out_dir = base_dir / "out";

  const json& strategies = doc.contains("strategies") ? doc.at("strategies") : json("all");
  if (strategies.is_string() && strategies.get<std::string>() == "all") {
    cfg.strategies = enumerate_valid_strategies();
  } else if (strategies.is_array()) {
    for (std::size_t i = 0; i < strategies.size(); ++i) {
      const std::string ptr = "/strategies/" + std::to_string(i);
      if (!strategies[i].is_string()) throw SchemaError(ptr, "expected a strategy string");
      const auto text = strategies[i].get<std::string>();
      const Strategy s = parse_strategy(text);
      if (const auto v = validate_strategy(s); !v.valid()) throw ConstraintViolation(v.violations);
      cfg.strategies.push_back(format_strategy(s));
    }
  } else {
    throw SchemaError("/strategies", "expected \"all\" or a list of strategy strings");
  }

  if (!doc.contains("tasks")) throw SchemaError("/tasks", "missing task source");
  const json& tasks = object_at(doc, "tasks", "");
  reject_unknown(tasks, "/tasks", {"file", "generate"});
  if (tasks.contains("file") == tasks.contains("generate")) {
    throw SchemaError("/tasks", "give exactly one of 'file' or 'generate'");
  }
  if (tasks.contains("file")) {
    cfg.task_file = resolve(base_dir, get<std::string>(tasks, "file", "/tasks"));
  } else {
    cfg.generator = parse_generator(object_at(tasks, "generate", "/tasks"), "/tasks/generate");
  }

  maybe(doc, "max_rounds", "", cfg.max_rounds);
  if (cfg.max_rounds < 1) throw SchemaError("/max_rounds", "must be >= 1");
  if (doc.contains("seed")) cfg.seed = get<std::uint64_t>(doc, "seed", "");
  if (doc.contains("token_scheme")) {
    cfg.token_scheme = parse_token_scheme(get<std::string>(doc, "token_scheme", ""));
    if (cfg.token_scheme == TokenScheme::kProviderReported) {
      throw SchemaError("/token_scheme", "scripted backends need a local scheme (whitespace or chars_div_4)");
    }
  }

  if (doc.contains("agents")) {
    const json& agents = object_at(doc, "agents", "");
    reject_unknown(agents, "/agents", {"discussion", "instructor"});
    if (agents.contains("discussion")) {
      parse_discussion(object_at(agents, "discussion", "/agents"), "/agents/discussion", cfg);
    }
    if (agents.contains("instructor")) {
      parse_instructor(object_at(agents, "instructor", "/agents"), "/agents/instructor", cfg);
    }
  }
  cfg.discussion.scripted.scheme = cfg.token_scheme;
  cfg.instructor.instructor.scheme = cfg.token_scheme;

  if (doc.contains("llm")) cfg.llm = parse_llm(object_at(doc, "llm", ""), "/llm");
  if ((cfg.discussion.backend == BackendKind::kHttp || cfg.instructor.backend == BackendKind::kHttp) &&
      !cfg.llm) {
    throw SchemaError("/llm", "an http backend needs the llm block");
  }

  if (doc.contains("tar")) {
    const json& tar = object_at(doc, "tar", "");
    reject_unknown(tar, "/tar", {"alpha", "beta"});
    maybe(tar, "alpha", "/tar", cfg.tar.alpha);
    maybe(tar, "beta", "/tar", cfg.tar.beta);
  }
  if (!(cfg.tar.alpha > 0.0) || !(cfg.tar.beta > 0.0)) throw ParamError("tar alpha and beta must be > 0");

  if (doc.contains("baselines")) {
    maybe(doc, "baselines", "", cfg.baselines);
    for (std::size_t i = 0; i < cfg.baselines.size(); ++i) {
      if (cfg.baselines[i] != kAgentAllName && cfg.baselines[i] != kMajorityVoteName) {
        throw SchemaError("/baselines/" + std::to_string(i), "expected Agent_all or MV");
      }
    }
  }

  if (doc.contains("engine")) {
    const json& engine = object_at(doc, "engine", "");
    reject_unknown(engine, "/engine", {"parallel_fanout", "tie_rule"});
    maybe(engine, "parallel_fanout", "/engine", cfg.parallel_fanout);
    if (engine.contains("tie_rule")) {
      const auto rule = get<std::string>(engine, "tie_rule", "/engine");
      if (rule == "lowest_roster_index") {
        cfg.tie_rule = TieRule::kLowestRosterIndex;
      } else if (rule == "label_order") {
        cfg.tie_rule = TieRule::kLabelOrder;
      } else {
        throw SchemaError("/engine/tie_rule", "expected lowest_roster_index or label_order");
      }
    }
  }

  if (doc.contains("templates_dir")) {
    cfg.templates_dir = resolve(base_dir, get<std::string>(doc, "templates_dir", ""));
  }

  if (doc.contains("output")) {
    const json& output = object_at(doc, "output", "");
    reject_unknown(output, "/output", {"dir", "format", "run_tar"});
    if (output.contains("dir")) cfg.out_dir = resolve(base_dir, get<std::string>(output, "dir", "/output"));
    if (output.contains("format")) cfg.format = parse_report_format(get<std::string>(output, "format", "/output"));
    maybe(output, "run_tar", "/output", cfg.run_tar);
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("", "cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str(), path.parent_path().empty() ? "." : path.parent_path());
}

}  // namespace agora::cli
