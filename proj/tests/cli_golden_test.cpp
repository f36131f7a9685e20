#include <gtest/gtest.h>

#include <filesystem>
#include <regex>
#include <sstream>

#include "cli_cases.hpp"
#include "support.hpp"

namespace rp = relaxplan;
namespace ts = testing_support;
namespace fs = std::filesystem;
using namespace cli_cases;

namespace {

class CliGolden : public ::testing::TestWithParam<Case> {};

}  // namespace

TEST_P(CliGolden, MatchesGoldenTranscriptAndIsDeterministic) {
  const auto& c = GetParam();
  const auto first = run(c);
  const auto second = run(c);
  EXPECT_EQ(first.exit_code, c.exit_code) << first.transcript;
  EXPECT_EQ(first.transcript, second.transcript);
  const auto golden = golden_path(c);
  if (update_golden()) {
    fs::create_directories(golden.parent_path());
    rp::write_file_atomic(golden.string(), first.transcript);
    return;
  }
  ASSERT_TRUE(fs::exists(golden)) << golden << " is missing; rerun with UPDATE_GOLDEN=1";
  EXPECT_EQ(first.transcript, rp::read_file(golden.string()));
}

INSTANTIATE_TEST_SUITE_P(Cases, CliGolden, ::testing::ValuesIn(kCases),
                         [](const ::testing::TestParamInfo<Case>& info) { return std::string(info.param.name); });

TEST(Cli, PlanReportMatchesTheLibrary) {
  const auto r = run({"plan_toy_wfse", "plan --ts toy_ts.json --spec toy_spec.json --wfse toy_wfse.json", 0});
  ASSERT_EQ(r.exit_code, 0);
  const auto report = rp::Json::parse(rp::read_file((work_dir() / "plan_toy_wfse.stdout").string()));
  const std::string data = RELAXPLAN_TEST_DATA;
  const auto t = std::get<rp::TransitionSystem>(rp::load_model(rp::read_file(data + "/toy_ts.json")));
  const auto d = std::get<rp::SpecDFA>(rp::load_model(rp::read_file(data + "/toy_spec.json")));
  const auto e = std::get<rp::EditSystem>(rp::load_model(rp::read_file(data + "/toy_wfse.json")));
  const auto expected = rp::plan(t, d, e);
  ASSERT_TRUE(expected.feasible);
  EXPECT_EQ(report["result"]["cost"]["task_cost"].get<double>(), expected.task_cost);
  EXPECT_EQ(report["result"]["cost"]["task_cost"].get<double>(), 11.0);
  EXPECT_EQ(report["provenance"]["inputs"]["ts"]["digest"].get<std::string>(), rp::fnv1a64(rp::save_model(t)));
}

TEST(Cli, ReportEmbedsEnoughToRerun) {
  const auto r = run({"plan_three_path_lambda",
                      "plan --ts three_path_ts.json --twtl three_path.twtl --rules three_path.rules --lambda 0.3", 0});
  ASSERT_EQ(r.exit_code, 0);
  const auto report = rp::Json::parse(rp::read_file((work_dir() / "plan_three_path_lambda.stdout").string()));
  const auto& inputs = report["provenance"]["inputs"];
  const auto t = std::get<rp::TransitionSystem>(rp::load_model(inputs["ts"]["model"].dump()));
  const auto f = std::get<rp::TwtlModel>(rp::load_model(inputs["spec"]["model"].dump()));
  const auto e = std::get<rp::EditSystem>(rp::load_model(inputs["wfse"]["model"].dump()));
  const double lambda = report["provenance"]["lambda"].get<double>();
  const auto again = rp::plan_bi(t, f.formula, e, lambda);
  EXPECT_EQ(rp::plan_to_json(again), report["result"]);
  const auto in = ts::three_path_instance();
  EXPECT_EQ(again.trajectory.size(), rp::plan_bi(in.ts, in.phi, in.wfse, 0.3).trajectory.size());
}

TEST(Cli, ParetoSvgHasOneSegmentPerCsvRow) {
  const auto r = run(by_name("pareto_three_path"));
  ASSERT_EQ(r.exit_code, 0);
  const auto csv = rp::read_file((work_dir() / "front.csv").string());
  const auto svg = rp::read_file((work_dir() / "front.svg").string());
  std::vector<std::string> rows;
  std::stringstream ss(csv);
  for (std::string line; std::getline(ss, line);) rows.push_back(line);
  ASSERT_EQ(rows.size(), 4u);
  std::size_t segments = 0;
  for (auto at = svg.find("class=\"envelope-segment\""); at != std::string::npos;
       at = svg.find("class=\"envelope-segment\"", at + 1)) {
    ++segments;
  }
  EXPECT_EQ(segments, rows.size() - 1);
  // Interior breakpoints in the SVG are the CSV's lambda_hi values.
  std::vector<std::string> marks, highs;
  std::regex bp("class=\"breakpoint\" data-lambda=\"([^\"]+)\"");
  for (std::sregex_iterator it(svg.begin(), svg.end(), bp), end; it != end; ++it) marks.push_back((*it)[1]);
  for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
    const auto first = rows[i].find(',');
    highs.push_back(rows[i].substr(first + 1, rows[i].find(',', first + 1) - first - 1));
  }
  EXPECT_EQ(marks, highs);
  EXPECT_EQ(highs, (std::vector<std::string>{"0.25", "0.333333"}));
}

TEST(Cli, CompileErrorsCarryTheSourceSpan) {
  const auto r = run(by_name("compile_malformed_rules"));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.transcript.find("malformed.rules:2:9:"), std::string::npos) << r.transcript;
  const auto t = run(by_name("compile_malformed_twtl"));
  EXPECT_NE(t.transcript.find("malformed.twtl:2:3:"), std::string::npos) << t.transcript;
  EXPECT_FALSE(fs::exists(work_dir() / "never.json"));
}
