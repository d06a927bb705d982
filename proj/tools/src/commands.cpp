#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "agora/baselines.hpp"
#include "agora/cli.hpp"
#include "agora/engine.hpp"
#include "agora/errors.hpp"
#include "agora/rng.hpp"
#include "agora/strategy.hpp"
#include "agora/task.hpp"
#include "agora/transcript.hpp"

namespace agora::cli {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("", "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Same ordering on both the run and report paths so the documents match byte for byte.
std::string build_report(std::vector<RunRecord> records, const ReportOptions& options) {
  std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.strategy, a.task_id) < std::tie(b.strategy, b.task_id);
  });
  return emit_report(aggregate(records, options.tar), options);
}

std::string report_name(ReportFormat format) {
  return format == ReportFormat::kJson ? "report.json" : "report.csv";
}

struct Job {
  std::string name;  // strategy string or baseline name
  bool baseline = false;
  std::size_t task_index = 0;
};

struct JobResult {
  std::optional<Transcript> transcript;
  bool complete = false;
  std::string error;
};

std::shared_ptr<Backend> make_backend(const AgentKindConfig& kind, bool instructor,
                                      const ExperimentConfig& cfg,
                                      const PromptTemplates& templates) {
  if (kind.backend == BackendKind::kHttp) return std::make_shared<HttpBackend>(*cfg.llm, templates);
  if (instructor) return std::make_shared<ScriptedInstructor>(kind.instructor, templates);
  return std::make_shared<ScriptedAgent>(kind.scripted, templates);
}

}  // namespace

std::string safe_file_name(std::string_view id) {
  std::string out;
  for (char c : id) {
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '_' || c == '-';
    out += ok ? c : '_';
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

int cmd_validate(const std::vector<std::string>& strategies, std::ostream& out, std::ostream& err) {
  if (strategies.empty()) {
    err << "usage: agora validate <strategy>...\n";
    return kUsage;
  }
  bool all_valid = true;
  for (const auto& text : strategies) {
    try {
      const auto v = validate_strategy(parse_strategy(text));
      if (v.valid()) {
        out << text << ": valid\n";
        continue;
      }
      all_valid = false;
      out << text << ": invalid";
      for (std::size_t i = 0; i < v.violations.size(); ++i) {
        out << (i == 0 ? " (" : ", ") << v.violations[i];
      }
      out << ")\n";
    } catch (const SyntaxError& e) {
      all_valid = false;
      out << text << ": syntax error at offset " << e.offset() << ": " << e.what() << "\n";
    } catch (const Error& e) {
      all_valid = false;
      out << text << ": " << e.what() << "\n";
    }
  }
  return all_valid ? kOk : kInputError;
}

int cmd_generate(const GeneratorParams& params, const std::optional<fs::path>& out_file,
                 std::ostream& out, std::ostream& err) {
  try {
    const std::string doc = tasks_to_json(generate_tasks(params));
    if (out_file) {
      write_file(*out_file, doc);
    } else {
      out << doc;
    }
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

int cmd_run(const ExperimentConfig& config, const RunOverrides& overrides, std::ostream& out,
            std::ostream& err) {
  ExperimentConfig cfg = config;
  if (overrides.out_dir) cfg.out_dir = *overrides.out_dir;
  if (overrides.seed) cfg.seed = overrides.seed;
  if (overrides.alpha) cfg.tar.alpha = *overrides.alpha;
  if (overrides.beta) cfg.tar.beta = *overrides.beta;
  if (overrides.format) cfg.format = *overrides.format;
  if (overrides.api_key_env && cfg.llm) cfg.llm->api_key_env = *overrides.api_key_env;

  // Everything that can be checked up front is, so a bad input leaves no outputs behind.
  std::vector<TaskInstance> tasks;
  BackendBindings bindings;
  try {
    if (!cfg.seed) throw ParamError("a seed is required (config 'seed' or --seed)");
    if (!(cfg.tar.alpha > 0.0) || !(cfg.tar.beta > 0.0)) {
      throw ParamError("tar alpha and beta must be > 0");
    }
    if (overrides.jobs < 1) throw ParamError("--jobs must be >= 1");
    tasks = cfg.task_file ? load_tasks(*cfg.task_file) : generate_tasks(*cfg.generator);

    std::map<std::string, std::string> seen;
    for (const auto& t : tasks) {
      const auto [it, inserted] = seen.emplace(safe_file_name(t.id), t.id);
      if (!inserted) {
        throw ParamError("task ids '" + it->second + "' and '" + t.id +
                         "' map to the same transcript file name");
      }
    }
    if (cfg.llm && !cfg.llm->api_key_env.empty()) {
      const char* key = std::getenv(cfg.llm->api_key_env.c_str());
      if (key == nullptr || *key == '\0') {
        throw ParamError("environment variable " + cfg.llm->api_key_env + " is not set");
      }
    }
    const PromptTemplates templates =
        cfg.templates_dir ? PromptTemplates::load(*cfg.templates_dir) : PromptTemplates::defaults();
    bindings.emplace("discussion", make_backend(cfg.discussion, false, cfg, templates));
    bindings.emplace("instructor", make_backend(cfg.instructor, true, cfg, templates));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  std::vector<Job> jobs;
  for (const auto& s : cfg.strategies)
    for (std::size_t t = 0; t < tasks.size(); ++t) jobs.push_back({s, false, t});
  for (const auto& b : cfg.baselines)
    for (std::size_t t = 0; t < tasks.size(); ++t) jobs.push_back({b, true, t});

  const DiscussionEngine engine(bindings, EngineOptions{cfg.parallel_fanout, cfg.tie_rule});
  std::vector<JobResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& job = jobs[i];
      const TaskInstance& task = tasks[job.task_index];
      const std::uint64_t seed = derive_seed(*cfg.seed, job.task_index);
      JobResult& r = results[i];
      try {
        if (!job.baseline) {
          const StrategyConfig sc = make_strategy_config(job.name, cfg.max_rounds, seed);
          r.transcript = engine.run(task, sc, default_roster(task, sc.strategy, "discussion")).transcript;
        } else if (job.name == kAgentAllName) {
          r.transcript = transcript_agent_all(task, *bindings.at("discussion"), seed);
        } else {
          r.transcript = transcript_mv(task, {bindings.at("discussion").get()}, seed, cfg.tie_rule);
        }
        r.complete = true;
      } catch (const RunError& e) {
        if (const Transcript* partial = e.partial_transcript()) r.transcript = *partial;
        r.error = e.what();
      } catch (const std::exception& e) {
        r.error = e.what();
      }
    }
  };
  const std::size_t n_threads = std::min<std::size_t>(overrides.jobs, std::max<std::size_t>(jobs.size(), 1));
  std::vector<std::thread> threads;
  for (std::size_t i = 1; i < n_threads; ++i) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  const fs::path transcripts_dir = cfg.out_dir / "transcripts";
  const fs::path incomplete_dir = cfg.out_dir / "incomplete";
  std::vector<RunRecord> records;
  std::size_t failed = 0;
  try {
    fs::remove_all(transcripts_dir);
    fs::remove_all(incomplete_dir);
    fs::remove(cfg.out_dir / "report.csv");
    fs::remove(cfg.out_dir / "report.json");
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      const auto& job = jobs[i];
      const auto& r = results[i];
      const fs::path rel = fs::path(safe_file_name(job.name)) /
                           (safe_file_name(tasks[job.task_index].id) + ".json");
      if (r.complete) {
        write_file(transcripts_dir / rel, transcript_to_json(*r.transcript));
        records.push_back(record_from_transcript(*r.transcript));
        continue;
      }
      ++failed;
      err << "run failed: " << job.name << " on " << tasks[job.task_index].id << ": " << r.error << "\n";
      if (r.transcript) write_file(incomplete_dir / rel, transcript_to_json(*r.transcript));
    }
    ReportOptions options{cfg.tar, cfg.format, cfg.run_tar};
    const fs::path report_path = cfg.out_dir / report_name(cfg.format);
    write_file(report_path, build_report(std::move(records), options));
    out << jobs.size() - failed << " of " << jobs.size() << " runs complete; report: "
        << report_path.string() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return failed == 0 ? kOk : kPartialFailure;
}

int cmd_report(const fs::path& dir, const ReportOptions& options,
               const std::optional<fs::path>& out_file, std::ostream& out, std::ostream& err) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    err << "error: " << dir.string() << " is not a directory\n";
    return kInputError;
  }
  const fs::path root = fs::is_directory(dir / "transcripts", ec) ? dir / "transcripts" : dir;

  std::vector<fs::path> files;
  for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator(); ++it) {
    if (it->is_directory() && it->path().filename() == "incomplete") {
      it.disable_recursion_pending();
    } else if (it->is_regular_file() && it->path().extension() == ".json") {
      files.push_back(it->path());
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<RunRecord> records;
  bool skipped = false;
  for (const auto& path : files) {
    try {
      records.push_back(record_from_transcript(transcript_from_json(read_file(path))));
    } catch (const Error& e) {
      skipped = true;
      err << "skipping " << path.string() << ": " << e.what() << "\n";
    }
  }
  if (files.empty()) err << "warning: no transcripts found under " << root.string() << "\n";

  try {
    const std::string doc = build_report(std::move(records), options);
    if (out_file) {
      write_file(*out_file, doc);
    } else {
      out << doc;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return skipped ? kPartialFailure : kOk;
}

}  // namespace agora::cli
