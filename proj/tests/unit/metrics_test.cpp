#include <gtest/gtest.h>

#include <cmath>

#include "agora/errors.hpp"
#include "agora/metrics.hpp"
#include "agora/strategy.hpp"
#include "json.hpp"

namespace agora {
namespace {

struct Row {
  double acc, in, out;
};

// Golden (Acc, #I, #O) inputs per strategy, in canonical order.
const std::vector<Row> kPddp = {{50.7, 25663, 2184}, {57.8, 6470, 854},    {45.2, 9531, 1127},
                                {46.2, 52400, 15568}, {59.8, 15057, 3046},  {46.7, 19673, 4100},
                                {50.8, 348035, 58795}, {46.2, 13119, 2412}, {58.8, 4867, 841}};
const std::vector<Row> kEbfc = {{49.3, 28099, 1990}, {70.4, 13361, 1155}, {68.8, 15368, 1284},
                                {81.4, 20074, 6780}, {84.4, 14600, 3073}, {77.9, 13125, 2901},
                                {86.4, 30085, 6125}, {86.9, 2111, 490},   {85.4, 2859, 452}};
const std::vector<double> kPddpNtar = {0.21, 0.82, 0.45, 0.06, 0.31, 0.18, 0.01, 0.28, 1.00};
const std::vector<double> kEbfcNtar = {0.06, 0.18, 0.16, 0.08, 0.15, 0.15, 0.07, 1.00, 0.86};

std::vector<std::pair<std::string, double>> tars_of(const std::vector<Row>& rows, double scale = 1.0) {
  const auto names = enumerate_valid_strategies();
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.emplace_back(names[i], compute_tar(rows[i].acc, rows[i].in * scale, rows[i].out * scale));
  }
  return out;
}

std::vector<AggregateMetrics> aggregates_of(const std::vector<Row>& rows) {
  const auto names = enumerate_valid_strategies();
  std::vector<AggregateMetrics> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    AggregateMetrics a;
    a.strategy = names[i];
    a.accuracy = rows[i].acc;
    a.mean_input_tokens = rows[i].in;
    a.mean_output_tokens = rows[i].out;
    a.mean_rounds = 1;
    a.n = 1;
    a.token_scheme = "provider_reported";
    out.push_back(a);
  }
  return out;
}

RunRecord record(const std::string& strategy, bool correct, std::int64_t in, std::int64_t out,
                 int rounds = 1, const std::string& scheme = "whitespace",
                 const std::string& scenario = "DEI") {
  RunRecord r;
  r.task_id = "t" + std::to_string(in);
  r.strategy = strategy;
  r.scenario = scenario;
  r.correct = correct;
  r.input_tokens = in;
  r.output_tokens = out;
  r.rounds = rounds;
  r.turns = rounds;
  r.token_scheme = scheme;
  return r;
}

TEST(ComputeTar, MatchesDirectEvaluation) {
  EXPECT_NEAR(compute_tar(58.8, 4867, 841), 58.8 / (4867 + 4 * 841), 1e-15);
  EXPECT_NEAR(compute_tar(58.8, 4867, 841), 0.0071437, 5e-8);
  EXPECT_NEAR(compute_tar(86.9, 2111, 490), 0.0213461, 5e-8);
  EXPECT_EQ(compute_tar(0, 10, 3), 0.0);
  EXPECT_NEAR(compute_tar(50, 10, 10, {2, 3}), 50.0 / 50.0, 1e-15);
}

TEST(ComputeTar, Errors) {
  EXPECT_THROW(compute_tar(50, 0, 0), DegenerateError);
  EXPECT_THROW(compute_tar(50, 1, 1, {0, 4}), ParamError);
  EXPECT_THROW(compute_tar(50, 1, 1, {1, -1}), ParamError);
}

TEST(ComputeTar, StrictlyDecreasingInOutputTokens) {
  double prev = compute_tar(70, 1000, 0);
  for (int out = 1; out < 2000; out += 37) {
    const double cur = compute_tar(70, 1000, out);
    EXPECT_LT(cur, prev);
    prev = cur;
  }
}

TEST(ComputeNtar, ReproducesGoldenColumns) {
  for (const auto& [rows, expected] : {std::pair{kPddp, kPddpNtar}, std::pair{kEbfc, kEbfcNtar}}) {
    const auto ntar = compute_ntar(tars_of(rows));
    ASSERT_EQ(ntar.size(), expected.size());
    for (std::size_t i = 0; i < ntar.size(); ++i) {
      EXPECT_EQ(std::round(ntar[i].second * 100) / 100, expected[i]) << ntar[i].first;
    }
  }
}

TEST(ComputeNtar, ScaleInvariantAndArgmaxIsOne) {
  for (const auto& rows : {kPddp, kEbfc}) {
    const auto base = compute_ntar(tars_of(rows));
    for (double c : {0.001, 0.5, 3.0, 1e6}) {
      const auto scaled = compute_ntar(tars_of(rows, c));
      for (std::size_t i = 0; i < base.size(); ++i) {
        EXPECT_NEAR(scaled[i].second, base[i].second, 1e-12);
      }
    }
    const auto best = std::max_element(base.begin(), base.end(),
                                       [](const auto& a, const auto& b) { return a.second < b.second; });
    EXPECT_EQ(best->second, 1.0);
  }
}

TEST(ComputeNtar, Edges) {
  EXPECT_EQ(compute_ntar({{"s", 0.3}}), (std::vector<std::pair<std::string, double>>{{"s", 1.0}}));
  EXPECT_THROW(compute_ntar({{"s", 0.0}, {"t", 0.0}}), DegenerateError);
  EXPECT_THROW(compute_ntar({}), DegenerateError);
  EXPECT_THROW(compute_ntar({{"s", -1.0}}), ParamError);
}

TEST(Aggregate, MeansAndAccuracy) {
  const auto agg = aggregate({record("G1-P1-I1-C1", true, 100, 10, 2),
                              record("G1-P1-I1-C1", false, 300, 30, 4)});
  ASSERT_EQ(agg.size(), 1u);
  EXPECT_EQ(agg[0].accuracy, 50.0);
  EXPECT_EQ(agg[0].mean_input_tokens, 200.0);
  EXPECT_EQ(agg[0].mean_output_tokens, 20.0);
  EXPECT_EQ(agg[0].mean_rounds, 3.0);
  EXPECT_EQ(agg[0].n, 2);
  // Per-run TAR: 100/(100+40) and 0.
  EXPECT_NEAR(*agg[0].mean_run_tar, (100.0 / 140.0) / 2, 1e-15);

  const auto single = aggregate({record("MV", true, 7, 3)});
  EXPECT_EQ(single[0].mean_input_tokens, 7.0);
  EXPECT_EQ(single[0].accuracy, 100.0);
}

TEST(Aggregate, OrdersStrategiesThenBaselines) {
  const auto agg = aggregate({record("MV", true, 1, 1), record("zzz", true, 1, 1),
                              record("G2-P3-I1-C3", true, 1, 1), record("Agent_all", true, 1, 1),
                              record("G1-P1-I1-C1", true, 1, 1)});
  std::vector<std::string> names;
  for (const auto& a : agg) names.push_back(a.strategy);
  EXPECT_EQ(names, (std::vector<std::string>{"G1-P1-I1-C1", "G2-P3-I1-C3", "Agent_all", "MV", "zzz"}));
}

TEST(Aggregate, MixedSchemesRejected) {
  EXPECT_THROW(aggregate({record("MV", true, 1, 1, 1, "whitespace"),
                          record("MV", true, 1, 1, 1, "chars_div_4")}),
               MixedSchemeError);
  EXPECT_NO_THROW(aggregate({record("MV", true, 1, 1, 1, "whitespace"),
                             record("G1-P1-I1-C1", true, 1, 1, 1, "chars_div_4")}));
}

TEST(Aggregate, SesMajorityVoteIsFlaggedNonComparable) {
  const auto agg = aggregate({record("MV", false, 1, 1, 1, "whitespace", "SES"),
                              record("Agent_all", true, 1, 1, 1, "whitespace", "SES")});
  EXPECT_TRUE(agg[0].comparable);
  EXPECT_FALSE(agg[1].comparable);
  EXPECT_TRUE(aggregate({record("MV", true, 1, 1)})[0].comparable);
}

TEST(EmitReport, CsvReproducesGoldenNtarColumn) {
  const std::string csv = emit_report(aggregates_of(kPddp));
  std::vector<std::string> ntar;
  std::size_t pos = csv.find("\r\n") + 2;
  while (pos < csv.size()) {
    const auto end = csv.find("\r\n", pos);
    const std::string line = csv.substr(pos, end - pos);
    ntar.push_back(line.substr(line.rfind(',') + 1));
    pos = end + 2;
  }
  EXPECT_EQ(ntar, (std::vector<std::string>{"0.21", "0.82", "0.45", "0.06", "0.31", "0.18", "0.01",
                                            "0.28", "1.00"}));
}

TEST(EmitReport, EmptyIsHeaderOnly) {
  EXPECT_EQ(emit_report({}), "Strategy,Acc,#I,#O,Round,TAR,NTAR\r\n");
  ReportOptions json_opts;
  json_opts.format = ReportFormat::kJson;
  EXPECT_TRUE(nlohmann::json::parse(emit_report({}, json_opts))["rows"].empty());
}

TEST(EmitReport, QuotesPerRfc4180) {
  AggregateMetrics a;
  a.strategy = "odd, \"name\"";
  a.accuracy = 50;
  a.mean_input_tokens = 10;
  a.mean_output_tokens = 1;
  a.n = 1;
  const std::string csv = emit_report({a});
  EXPECT_NE(csv.find("\r\n\"odd, \"\"name\"\"\",50.00,"), std::string::npos) << csv;
}

TEST(EmitReport, BaselinesHaveNoNtarAndJsonKeepsPrecision) {
  auto aggs = aggregates_of(kEbfc);
  AggregateMetrics mv;
  mv.strategy = "MV";
  mv.accuracy = 99;
  mv.mean_input_tokens = 10;
  mv.mean_output_tokens = 1;
  mv.n = 3;
  mv.comparable = false;
  aggs.push_back(mv);
  ReportOptions opts;
  opts.format = ReportFormat::kJson;
  opts.include_run_tar = true;
  const auto doc = nlohmann::json::parse(emit_report(aggs, opts));
  ASSERT_EQ(doc["rows"].size(), 10u);
  EXPECT_EQ(doc["rows"][7]["ntar"], 1.0);
  EXPECT_TRUE(doc["rows"][9]["ntar"].is_null());
  EXPECT_EQ(doc["rows"][9]["comparable"], false);
  EXPECT_EQ(doc["rows"][9]["n"], 3);
  EXPECT_DOUBLE_EQ(doc["rows"][0]["tar"].get<double>(), 49.3 / (28099 + 4 * 1990));
  EXPECT_EQ(doc["alpha"], 1.0);
  EXPECT_EQ(doc["beta"], 4.0);

  const std::string csv = emit_report(aggs);
  EXPECT_NE(csv.find("\r\nMV,99.00,10.0,1.0,0.00,7.071429,\r\n"), std::string::npos) << csv;
}

TEST(ReportFormatNames, Parse) {
  EXPECT_EQ(parse_report_format("csv"), ReportFormat::kCsv);
  EXPECT_EQ(parse_report_format("json"), ReportFormat::kJson);
  EXPECT_THROW(parse_report_format("xml"), ParamError);
}

}  // namespace
}  // namespace agora
