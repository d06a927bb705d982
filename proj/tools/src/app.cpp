#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "agora/cli.hpp"
#include "agora/errors.hpp"
#include "json.hpp"

namespace agora::cli {

namespace {

// Generator flags layered over an optional JSON parameter file.
GeneratorParams load_generator_params(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParamError("cannot read " + path);
  const auto doc = nlohmann::json::parse(in);
  GeneratorParams p;
  if (doc.contains("scenario")) p.scenario = parse_scenario(doc.at("scenario").get<std::string>());
  if (doc.contains("n_tasks")) p.n_tasks = doc.at("n_tasks").get<int>();
  if (doc.contains("n_segments")) p.n_segments = doc.at("n_segments").get<int>();
  if (doc.contains("label_set")) p.label_set = doc.at("label_set").get<std::vector<std::string>>();
  if (doc.contains("informative_segment")) {
    p.informative_segment = doc.at("informative_segment").get<std::string>();
  }
  if (doc.contains("n_consistent")) p.n_consistent = doc.at("n_consistent").get<int>();
  if (doc.contains("noise")) p.noise = doc.at("noise").get<double>();
  if (doc.contains("seed")) p.seed = doc.at("seed").get<std::uint64_t>();
  return p;
}

}  // namespace

int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Run and score multi-agent discussion strategies", "agora"};
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "Check strategy strings against the constraint rules");
  std::vector<std::string> strategies;
  validate->add_option("strategies", strategies, "Strategy strings such as G2-P3-I1-C3");

  auto* generate = app.add_subcommand("generate", "Write a synthetic task file");
  std::string gen_config, gen_scenario, gen_informative, gen_out;
  std::optional<int> gen_n_tasks, gen_n_segments, gen_n_consistent;
  std::optional<double> gen_noise;
  std::optional<std::uint64_t> gen_seed;
  generate->add_option("--config", gen_config, "JSON file with generator parameters");
  generate->add_option("--scenario", gen_scenario, "DEI or SES");
  generate->add_option("--n-tasks", gen_n_tasks, "Number of tasks");
  generate->add_option("--n-segments", gen_n_segments, "Segments per SES task");
  generate->add_option("--n-consistent", gen_n_consistent, "Consistent segments per SES task");
  generate->add_option("--informative-segment", gen_informative, "DEI segment holding the verdict");
  generate->add_option("--noise", gen_noise, "Fraction of filler sentences");
  generate->add_option("--seed", gen_seed, "Sampling seed");
  generate->add_option("--out", gen_out, "Output file (default: stdout)");

  auto* run = app.add_subcommand("run", "Run an experiment matrix from a config file");
  std::string run_config, run_out, run_format, run_key_env;
  RunOverrides overrides;
  std::optional<std::uint64_t> run_seed;
  std::optional<double> run_alpha, run_beta;
  run->add_option("--config", run_config, "Experiment config (JSON)")->required();
  run->add_option("--out", run_out, "Output directory (overrides the config)");
  run->add_option("--jobs", overrides.jobs, "Concurrent runs")->check(CLI::PositiveNumber);
  run->add_option("--seed", run_seed, "Master seed (overrides the config)");
  run->add_option("--alpha", run_alpha, "TAR input-token weight");
  run->add_option("--beta", run_beta, "TAR output-token weight");
  run->add_option("--format", run_format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--api-key-env", run_key_env, "Environment variable holding the API key");

  auto* report = app.add_subcommand("report", "Recompute the report from saved transcripts");
  std::string report_dir, report_out, report_format = "csv";
  ReportOptions report_options;
  report->add_option("dir", report_dir, "Transcript directory or run output directory")->required();
  report->add_option("--alpha", report_options.tar.alpha, "TAR input-token weight");
  report->add_option("--beta", report_options.tar.beta, "TAR output-token weight");
  report->add_option("--format", report_format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  report->add_flag("--run-tar", report_options.include_run_tar, "Add the per-run TAR column");
  report->add_option("--out", report_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) {
      if (strategies.empty()) {
        err << validate->help();
        return kUsage;
      }
      return cmd_validate(strategies, out, err);
    }

    if (*generate) {
      GeneratorParams p = gen_config.empty() ? GeneratorParams{} : load_generator_params(gen_config);
      if (!gen_scenario.empty()) p.scenario = parse_scenario(gen_scenario);
      if (gen_n_tasks) p.n_tasks = *gen_n_tasks;
      if (gen_n_segments) p.n_segments = *gen_n_segments;
      if (gen_n_consistent) p.n_consistent = *gen_n_consistent;
      if (!gen_informative.empty()) p.informative_segment = gen_informative;
      if (gen_noise) p.noise = *gen_noise;
      if (gen_seed) p.seed = *gen_seed;
      return cmd_generate(p, gen_out.empty() ? std::nullopt : std::optional<std::filesystem::path>(gen_out),
                          out, err);
    }

    if (*run) {
      const ExperimentConfig cfg = load_experiment_config(run_config);
      if (!run_out.empty()) overrides.out_dir = run_out;
      overrides.seed = run_seed;
      overrides.alpha = run_alpha;
      overrides.beta = run_beta;
      if (!run_format.empty()) overrides.format = parse_report_format(run_format);
      if (!run_key_env.empty()) overrides.api_key_env = run_key_env;
      return cmd_run(cfg, overrides, out, err);
    }

    report_options.format = parse_report_format(report_format);
    if (!(report_options.tar.alpha > 0.0) || !(report_options.tar.beta > 0.0)) {
      throw ParamError("--alpha and --beta must be > 0");
    }
    return cmd_report(report_dir, report_options,
                      report_out.empty() ? std::nullopt : std::optional<std::filesystem::path>(report_out),
                      out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace agora::cli
