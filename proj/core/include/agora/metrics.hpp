#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "agora/transcript.hpp"

namespace agora {

struct RunRecord {
  std::string task_id;
  std::string strategy;  // strategy string or baseline name
  std::string scenario;
  bool correct = false;
  std::int64_t input_tokens = 0;
  std::int64_t output_tokens = 0;
  int rounds = 0;
  int turns = 0;  // discussion-purpose calls; differs from rounds for the MV baseline
  std::string token_scheme;
};

/// Totals are the sums over every message of the transcript, all purposes.
RunRecord record_from_transcript(const Transcript& transcript);

/// TAR weights: alpha on input tokens, beta on output tokens.
struct TarParams {
  double alpha = 1.0;
  double beta = 4.0;
};

struct AggregateMetrics {
  std::string strategy;
  double accuracy = 0.0;  // percentage points, 0..100
  double mean_input_tokens = 0.0;
  double mean_output_tokens = 0.0;
  double mean_rounds = 0.0;
  double mean_turns = 0.0;
  int n = 0;
  std::string token_scheme;
  std::optional<double> mean_run_tar;  // TAR per run, then averaged
  bool comparable = true;              // false for MV rows on SES batches
};

/// accuracy / (alpha * #I + beta * #O). Accuracy is in percentage points.
double compute_tar(double accuracy, double mean_input, double mean_output,
                   const TarParams& params = {});

/// Divides each TAR by the batch maximum; order is preserved.
std::vector<std::pair<std::string, double>> compute_ntar(
    const std::vector<std::pair<std::string, double>>& tars);

/// Groups by strategy: valid strategies in canonical order, then Agent_all, MV,
/// then anything else by name.
std::vector<AggregateMetrics> aggregate(const std::vector<RunRecord>& records,
                                        const TarParams& params = {});

enum class ReportFormat { kCsv, kJson };

ReportFormat parse_report_format(std::string_view name);

struct ReportOptions {
  TarParams tar;
  ReportFormat format = ReportFormat::kCsv;
  bool include_run_tar = false;
};

/// Columns Strategy, Acc, #I, #O, Round, TAR, NTAR (plus RunTAR on request).
/// NTAR normalizes over the multi-agent strategy rows of this one report;
/// baseline rows leave it empty.
std::string emit_report(const std::vector<AggregateMetrics>& aggregates,
                        const ReportOptions& options = {});

inline constexpr std::string_view kAgentAllName = "Agent_all";
inline constexpr std::string_view kMajorityVoteName = "MV";

}  // namespace agora
