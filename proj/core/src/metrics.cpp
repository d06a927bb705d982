#include "agora/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "agora/errors.hpp"
#include "agora/strategy.hpp"
#include "json.hpp"

namespace agora {

using nlohmann::json;

namespace {

bool is_strategy_row(const std::string& name) {
  const auto valid = enumerate_valid_strategies();
  return std::find(valid.begin(), valid.end(), name) != valid.end();
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// RFC 4180: quote when the field holds a comma, quote or line break.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

struct Row {
  const AggregateMetrics* agg;
  std::optional<double> tar;
  std::optional<double> ntar;
};

std::vector<Row> compute_rows(const std::vector<AggregateMetrics>& aggregates,
                              const TarParams& params) {
  std::vector<Row> rows;
  std::vector<std::pair<std::string, double>> strategy_tars;
  for (const auto& a : aggregates) {
    Row r{&a, std::nullopt, std::nullopt};
    try {
      r.tar = compute_tar(a.accuracy, a.mean_input_tokens, a.mean_output_tokens, params);
    } catch (const DegenerateError&) {
    }
    if (r.tar && is_strategy_row(a.strategy)) strategy_tars.emplace_back(a.strategy, *r.tar);
    rows.push_back(r);
  }
  try {
    if (!strategy_tars.empty()) {
      const auto ntar = compute_ntar(strategy_tars);
      for (auto& r : rows) {
        for (const auto& [name, value] : ntar) {
          if (name == r.agg->strategy && r.tar) r.ntar = value;
        }
      }
    }
  } catch (const DegenerateError&) {
  }
  return rows;
}

}  // namespace

RunRecord record_from_transcript(const Transcript& t) {
  if (!t.outcome) throw SchemaError("/outcome", "transcript has no outcome");
  RunRecord r;
  r.task_id = t.task_id;
  r.strategy = t.strategy;
  r.scenario = t.scenario;
  r.correct = t.outcome->final_label == t.gold_label;
  r.input_tokens = t.total_input_tokens();
  r.output_tokens = t.total_output_tokens();
  r.rounds = t.outcome->rounds_used;
  for (const auto& round : t.rounds)
    for (const auto& m : round) r.turns += m.purpose == Purpose::kDiscussion ? 1 : 0;
  r.token_scheme = t.token_scheme;
  return r;
}

double compute_tar(double accuracy, double mean_input, double mean_output,
                   const TarParams& params) {
  if (!(params.alpha > 0.0) || !(params.beta > 0.0)) {
    throw ParamError("TAR weights alpha and beta must be > 0");
  }
  const double cost = params.alpha * mean_input + params.beta * mean_output;
  if (!(cost > 0.0)) throw DegenerateError("TAR is undefined when #I = #O = 0");
  return accuracy / cost;
}

std::vector<std::pair<std::string, double>> compute_ntar(
    const std::vector<std::pair<std::string, double>>& tars) {
  if (tars.empty()) throw DegenerateError("NTAR needs at least one TAR");
  double max_tar = 0.0;
  for (const auto& [name, tar] : tars) {
    if (tar < 0.0) throw ParamError("TAR values must be >= 0");
    max_tar = std::max(max_tar, tar);
  }
  if (!(max_tar > 0.0)) throw DegenerateError("NTAR is undefined when every TAR is 0");
  std::vector<std::pair<std::string, double>> out;
  out.reserve(tars.size());
  for (const auto& [name, tar] : tars) out.emplace_back(name, tar / max_tar);
  return out;
}

std::vector<AggregateMetrics> aggregate(const std::vector<RunRecord>& records,
                                        const TarParams& params) {
  std::map<std::string, std::vector<const RunRecord*>> groups;
  for (const auto& r : records) groups[r.strategy].push_back(&r);

  std::vector<std::string> order = enumerate_valid_strategies();
  order.emplace_back(kAgentAllName);
  order.emplace_back(kMajorityVoteName);
  auto rank = [&](const std::string& name) {
    const auto it = std::find(order.begin(), order.end(), name);
    return static_cast<std::size_t>(it - order.begin());
  };
  std::vector<std::string> names;
  for (const auto& [name, group] : groups) names.push_back(name);
  std::stable_sort(names.begin(), names.end(),
                   [&](const std::string& a, const std::string& b) { return rank(a) < rank(b); });

  std::vector<AggregateMetrics> out;
  for (const auto& name : names) {
    const auto& group = groups[name];
    AggregateMetrics a;
    a.strategy = name;
    a.n = static_cast<int>(group.size());
    a.token_scheme = group.front()->token_scheme;
    double correct = 0, in = 0, outp = 0, rounds = 0, turns = 0, run_tar = 0;
    bool run_tar_defined = true;
    bool ses = false;
    for (const auto* r : group) {
      if (r->token_scheme != a.token_scheme) {
        throw MixedSchemeError("strategy '" + name + "' mixes token schemes '" + a.token_scheme +
                               "' and '" + r->token_scheme + "'");
      }
      correct += r->correct ? 1 : 0;
      in += static_cast<double>(r->input_tokens);
      outp += static_cast<double>(r->output_tokens);
      rounds += r->rounds;
      turns += r->turns;
      ses = ses || r->scenario == "SES";
      try {
        run_tar += compute_tar(r->correct ? 100.0 : 0.0, static_cast<double>(r->input_tokens),
                               static_cast<double>(r->output_tokens), params);
      } catch (const DegenerateError&) {
        run_tar_defined = false;
      }
    }
    const double n = a.n;
    a.accuracy = 100.0 * correct / n;
    a.mean_input_tokens = in / n;
    a.mean_output_tokens = outp / n;
    a.mean_rounds = rounds / n;
    a.mean_turns = turns / n;
    if (run_tar_defined) a.mean_run_tar = run_tar / n;
    a.comparable = !(ses && name == kMajorityVoteName);
    out.push_back(std::move(a));
  }
  return out;
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  throw ParamError("unknown report format '" + std::string(name) + "' (expected csv or json)");
}

std::string emit_report(const std::vector<AggregateMetrics>& aggregates,
                        const ReportOptions& options) {
  const auto rows = compute_rows(aggregates, options.tar);

  if (options.format == ReportFormat::kJson) {
    json out_rows = json::array();
    for (const auto& r : rows) {
      const auto& a = *r.agg;
      json j = {{"strategy", a.strategy},
                {"acc", a.accuracy},
                {"input_tokens", a.mean_input_tokens},
                {"output_tokens", a.mean_output_tokens},
                {"rounds", a.mean_rounds},
                {"turns", a.mean_turns},
                {"tar", r.tar ? json(*r.tar) : json(nullptr)},
                {"ntar", r.ntar ? json(*r.ntar) : json(nullptr)},
                {"n", a.n},
                {"token_scheme", a.token_scheme},
                {"comparable", a.comparable}};
      if (options.include_run_tar) {
        j["run_tar"] = a.mean_run_tar ? json(*a.mean_run_tar) : json(nullptr);
      }
      out_rows.push_back(std::move(j));
    }
    return json{{"alpha", options.tar.alpha}, {"beta", options.tar.beta}, {"rows", out_rows}}
               .dump(2) +
           "\n";
  }

  std::string out = "Strategy,Acc,#I,#O,Round,TAR,NTAR";
  if (options.include_run_tar) out += ",RunTAR";
  out += "\r\n";
  for (const auto& r : rows) {
    const auto& a = *r.agg;
    out += csv_field(a.strategy);
    out += ',' + fmt("%.2f", a.accuracy);
    out += ',' + fmt("%.1f", a.mean_input_tokens);
    out += ',' + fmt("%.1f", a.mean_output_tokens);
    out += ',' + fmt("%.2f", a.mean_rounds);
    out += ',' + (r.tar ? fmt("%.7g", *r.tar) : std::string());
    out += ',' + (r.ntar ? fmt("%.2f", *r.ntar) : std::string());
    if (options.include_run_tar) {
      out += ',' + (a.mean_run_tar ? fmt("%.7g", *a.mean_run_tar) : std::string());
    }
    out += "\r\n";
  }
  return out;
}

}  // namespace agora
