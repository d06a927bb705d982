#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "agora/decision.hpp"
#include "agora/generators.hpp"
#include "agora/http_backend.hpp"
#include "agora/metrics.hpp"
#include "agora/scripted_backend.hpp"

namespace agora::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kUsage = 2, kPartialFailure = 3 };

enum class BackendKind { kScripted, kHttp };

struct AgentKindConfig {
  BackendKind backend = BackendKind::kScripted;
  ScriptedAgentConfig scripted;            // discussion agents
  ScriptedInstructorConfig instructor;     // instructor
};

/// One experiment: strategies x tasks, plus optional baselines.
struct ExperimentConfig {
  std::vector<std::string> strategies;  // expanded and validated
  std::optional<std::filesystem::path> task_file;
  std::optional<GeneratorParams> generator;
  int max_rounds = 10;
  std::optional<std::uint64_t> seed;
  TokenScheme token_scheme = TokenScheme::kWhitespace;  // scripted backends
  AgentKindConfig discussion;
  AgentKindConfig instructor;
  std::optional<LlmBackendConfig> llm;
  TarParams tar;
  std::vector<std::string> baselines;  // subset of {Agent_all, MV}
  bool parallel_fanout = false;
  TieRule tie_rule = TieRule::kLowestRosterIndex;
  std::optional<std::filesystem::path> templates_dir;
  std::filesystem::path out_dir = "out";
  ReportFormat format = ReportFormat::kCsv;
  bool run_tar = false;
};

/// Relative paths are resolved against `base_dir`. Throws SchemaError or
/// ParamError (ConstraintViolation for an invalid strategy).
ExperimentConfig parse_experiment_config(std::string_view json_text,
                                         const std::filesystem::path& base_dir);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct RunOverrides {
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<ReportFormat> format;
  std::optional<std::string> api_key_env;
  int jobs = 1;
};

/// Keeps [A-Za-z0-9._-], maps everything else to '_', and never yields "." or "..".
std::string safe_file_name(std::string_view id);

int cmd_validate(const std::vector<std::string>& strategies, std::ostream& out, std::ostream& err);

/// Writes the task file to `out_file`, or to `out` when unset.
int cmd_generate(const GeneratorParams& params, const std::optional<std::filesystem::path>& out_file,
                 std::ostream& out, std::ostream& err);

/// Writes <out>/transcripts/<strategy>/<task>.json and <out>/report.<fmt>.
/// Failed runs keep their partial transcript under <out>/incomplete/.
int cmd_run(const ExperimentConfig& config, const RunOverrides& overrides, std::ostream& out,
            std::ostream& err);

/// Recomputes the report from a transcript tree (or an output dir holding
/// transcripts/). Writes to `out_file` or `out`.
int cmd_report(const std::filesystem::path& dir, const ReportOptions& options,
               const std::optional<std::filesystem::path>& out_file, std::ostream& out,
               std::ostream& err);

/// Full command line, argv[0] included.
int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace agora::cli
