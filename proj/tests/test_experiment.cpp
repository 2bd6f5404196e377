#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "edd/experiment.hpp"
#include "edd/report.hpp"
#include "edd/rng.hpp"
#include "edd/text.hpp"
#include "helpers.hpp"

using namespace edd;

namespace {

// One participant's session worth of separable windows: consecutive start
// frames at hop 20, DISTRACTED windows shifted up on the leading features.
std::vector<Window> session_windows(int count, ParticipantId id,
                                    std::uint64_t seed) {
  std::vector<Window> out;
  Rng rng(seed);
  for (int i = 0; i < count; ++i) {
    const State st = (i / 2) % 2 ? State::DISTRACTED : State::FOCUSED;
    Window w = testutil::random_window(rng.next_u64(), st, id, 20 * i);
    if (st == State::DISTRACTED)
      for (int t = 0; t < kWindowLen; ++t)
        for (int f = 0; f < 12; ++f)
          w.values[std::size_t(t) * kFeatureDim + std::size_t(f)] += 4.0;
    out.push_back(std::move(w));
  }
  return out;
}

ExperimentData tiny_data() {
  ExperimentData data;
  data.train_windows = session_windows(16, 1, 91);
  {
    auto more = session_windows(16, 2, 92);
    data.train_windows.insert(data.train_windows.end(), more.begin(),
                              more.end());
  }
  data.val_windows = session_windows(10, 3, 93);
  data.test_windows = session_windows(12, 4, 94);
  return data;
}

ExperimentConfig tiny_config(std::vector<std::string> models) {
  ExperimentConfig config;
  config.reps = 2;
  config.base_seed = 5;
  config.models = std::move(models);
  config.rocket_kernels = 40;
  config.train.batch_size = 8;
  config.train.max_epochs = 2;
  config.train.patience = 2;
  config.fcn.conv_filters = {4, 4, 4};
  config.fcn.conv_kernels = {8, 5, 3};
  config.resnet.res_filters = {4, 4, 4};
  config.fcn_lstm.conv_filters = {4, 4, 4};
  config.fcn_lstm.conv_kernels = {8, 5, 3};
  config.fcn_lstm.lstm_hidden = 4;
  return config;
}

Metrics metrics_with(double acc, double f1d) {
  Metrics m;
  m.accuracy = acc;
  m.f1_distracted = f1d;
  return m;
}

}  // namespace

TEST_CASE("scorable test indices keep windows with three predecessors") {
  std::vector<Window> windows;
  Rng rng(95);
  for (int start : {0, 20, 40, 60, 80, 0, 20, 40, 140})
    windows.push_back(testutil::random_window(rng.next_u64(), State::FOCUSED,
                                              1, start));
  const auto idx = scorable_test_indices(windows);
  // Oracle: start_frame >= 60 positions are 3, 4 and 8.
  CHECK(idx == std::vector<std::size_t>{3, 4, 8});
}

TEST_CASE("aggregate_rows computes per-model mean and population std") {
  std::vector<EvalRow> rows;
  rows.push_back({"rocket", 0, 42, metrics_with(0.9, 0.8)});
  rows.push_back({"rocket", 1, 43, metrics_with(0.7, 0.6)});
  rows.push_back({"rocket", 2, 44, metrics_with(0.8, 0.7)});
  rows.push_back({"nn1", 0, 42, metrics_with(1.0, 1.0)});
  rows.push_back({"nn1", 1, 43, metrics_with(1.0, 1.0)});

  const auto aggs = aggregate_rows(rows, {"nn1", "rocket"});
  REQUIRE(aggs.size() == 2);
  CHECK(aggs[0].model == "nn1");
  CHECK(aggs[0].mean.accuracy == doctest::Approx(1.0));
  CHECK(aggs[0].stddev.accuracy == doctest::Approx(0.0));

  CHECK(aggs[1].model == "rocket");
  CHECK(aggs[1].mean.accuracy == doctest::Approx(0.8));
  CHECK(aggs[1].mean.f1_distracted == doctest::Approx(0.7));
  // Population std of {0.9, 0.7, 0.8} = sqrt(2/300...) computed by hand:
  // mean 0.8, squared deviations 0.01 + 0.01 + 0 -> sqrt(0.02 / 3).
  CHECK(aggs[1].stddev.accuracy ==
        doctest::Approx(std::sqrt(0.02 / 3.0)).epsilon(1e-12));
}

TEST_CASE("run_experiment produces ordered rows and exact seeds") {
  const auto data = tiny_data();
  const auto config = tiny_config({"nn1", "rocket"});
  const EvalReport report = run_experiment(data, config);
  REQUIRE(report.rows.size() == 4);  // 2 models x 2 reps
  CHECK(report.reps == 2);
  CHECK(report.rows[0].model == "nn1");
  CHECK(report.rows[1].model == "nn1");
  CHECK(report.rows[2].model == "rocket");
  CHECK(report.rows[3].model == "rocket");
  for (int r = 0; r < 2; ++r) {
    CHECK(report.rows[std::size_t(r)].rep == r);
    CHECK(report.rows[std::size_t(r)].seed == config.base_seed + r);
  }
  REQUIRE(report.aggregates.size() == 2);
  CHECK(report.aggregates[0].model == "nn1");
  CHECK(report.aggregates[1].model == "rocket");

  // nn1 is deterministic, so both repetitions must agree exactly.
  CHECK(report.rows[0].metrics.accuracy == report.rows[1].metrics.accuracy);
  CHECK(report.aggregates[0].stddev.accuracy == 0.0);

  // The data is cleanly separable; both classifiers should be strong.
  CHECK(report.rows[0].metrics.accuracy >= 0.8);
  CHECK(report.rows[2].metrics.accuracy >= 0.8);

  // Metrics are computed on the scorable subset only: with 12 test windows
  // that is 9 decisions, so accuracy must be a multiple of 1/9.
  const double steps = report.rows[0].metrics.accuracy * 9.0;
  CHECK(std::abs(steps - std::round(steps)) < 1e-9);
}

TEST_CASE("run_experiment is deterministic end to end") {
  const auto data = tiny_data();
  const auto config = tiny_config({"nn1", "rocket", "fcn"});
  const std::string a = report_csv(run_experiment(data, config));
  const std::string b = report_csv(run_experiment(data, config));
  CHECK(a == b);
}

TEST_CASE("the recurrent model trains and scores inside the experiment") {
  const auto data = tiny_data();
  const auto config = tiny_config({"fcn_lstm"});
  const EvalReport report = run_experiment(data, config);
  REQUIRE(report.rows.size() == 2);
  for (const auto& row : report.rows) {
    CHECK(row.metrics.accuracy >= 0.0);
    CHECK(row.metrics.accuracy <= 1.0);
  }
}

TEST_CASE("experiment errors are typed for the CLI") {
  const auto data = tiny_data();
  auto config = tiny_config({"rocket"});
  config.models = {"rocket", "galaxy"};
  CHECK_THROWS_AS(run_experiment(data, config), ConfigError);

  config = tiny_config({"rocket"});
  ExperimentData empty = data;
  empty.train_windows.clear();
  CHECK_THROWS_AS(run_experiment(empty, config), DataError);

  // No test window has three predecessors: nothing is scorable.
  ExperimentData unscorable = data;
  unscorable.test_windows = session_windows(3, 4, 96);
  CHECK_THROWS_AS(run_experiment(unscorable, config), DataError);

  config = tiny_config({"rocket"});
  config.reps = 0;
  CHECK_THROWS_AS(run_experiment(data, config), ConfigError);
}

TEST_CASE("report CSV has the documented header and block structure") {
  const auto data = tiny_data();
  const auto config = tiny_config({"nn1", "rocket"});
  const EvalReport report = run_experiment(data, config);
  const std::string csv = report_csv(report);

  std::istringstream in(csv);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 1 + 4 + 2 * 2);  // header + rows + mean/std pairs
  CHECK(lines[0] ==
        "model,rep,seed,accuracy,precision_distracted,recall_distracted,"
        "f1_distracted,precision_driving,recall_driving,f1_driving");
  CHECK(lines[1].rfind("nn1,0," + std::to_string(config.base_seed), 0) == 0);
  CHECK(lines[5].rfind("nn1,mean,,", 0) == 0);
  CHECK(lines[6].rfind("nn1,std,,", 0) == 0);
  CHECK(lines[7].rfind("rocket,mean,,", 0) == 0);

  // Every data line carries 10 comma-separated fields.
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto commas = std::count(lines[i].begin(), lines[i].end(), ',');
    CHECK(commas == 9);
  }

  // Values parse back and round-trip losslessly through %.17g.
  const auto last_comma = lines[1].rfind(',');
  const std::string f1_driving = lines[1].substr(last_comma + 1);
  const double v = parse_double(f1_driving, "csv");
  CHECK(format_double(v) == f1_driving);
}

TEST_CASE("report SVG draws one bar and whisker per model and metric") {
  EvalReport report;
  report.reps = 2;
  for (int r = 0; r < 2; ++r) {
    report.rows.push_back({"nn1", r, std::uint64_t(42 + r),
                           metrics_with(0.5, 0.5)});
    report.rows.push_back({"rocket", r, std::uint64_t(42 + r),
                           metrics_with(0.9, 0.8)});
  }
  report.aggregates = aggregate_rows(report.rows, {"nn1", "rocket"});
  const std::string svg = report_svg(report);

  auto count_of = [&](const std::string& needle) {
    std::size_t n = 0, pos = 0;
    while ((pos = svg.find(needle, pos)) != std::string::npos) {
      ++n;
      pos += needle.size();
    }
    return n;
  };
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(count_of("class=\"bar\"") == 14);      // 2 models x 7 metrics
  CHECK(count_of("class=\"whisker\"") == 14);
  CHECK(count_of("</svg>") == 1);
  CHECK(svg.find("nn1") != std::string::npos);
  CHECK(svg.find("rocket") != std::string::npos);

  // A mean of 0.5 on a 300-unit plot is a 150.00-tall bar.
  CHECK(svg.find("height=\"150.00\"") != std::string::npos);

  EvalReport empty;
  empty.reps = 1;
  CHECK_THROWS_AS(report_svg(empty), DataError);
}

TEST_CASE("emit_report writes both artifacts") {
  const auto dir = testutil::scratch_dir("report_files");
  EvalReport report;
  report.reps = 1;
  report.rows.push_back({"nn1", 0, 42, metrics_with(1.0, 1.0)});
  report.aggregates = aggregate_rows(report.rows, {"nn1"});
  emit_report(report, dir + "/report.csv", dir + "/report.svg");
  std::ifstream csv(dir + "/report.csv"), svg(dir + "/report.svg");
  CHECK(csv.good());
  CHECK(svg.good());
  std::string first;
  std::getline(csv, first);
  CHECK(first.rfind("model,rep,seed", 0) == 0);
}
