#include "edd/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "edd/nn1.hpp"
#include "edd/rocket.hpp"

namespace edd {

namespace {

constexpr std::array<double Metrics::*, 7> kMetricFields = {
    &Metrics::accuracy,          &Metrics::precision_distracted,
    &Metrics::recall_distracted, &Metrics::f1_distracted,
    &Metrics::precision_driving, &Metrics::recall_driving,
    &Metrics::f1_driving};

std::vector<State> window_states(const std::vector<Window>& windows) {
  std::vector<State> s;
  s.reserve(windows.size());
  for (const Window& w : windows) s.push_back(w.state);
  return s;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (reps < 1) throw ConfigError("experiment: reps must be >= 1");
  if (models.empty()) throw ConfigError("experiment: no models selected");
  for (const std::string& name : models)
    if (std::find(kAllModelNames.begin(), kAllModelNames.end(), name) ==
        kAllModelNames.end())
      throw ConfigError("experiment: unknown model: " + name);
  if (rocket_kernels < 1)
    throw ConfigError("experiment: rocket kernel count must be >= 1");
  if (lambda_grid.empty())
    throw ConfigError("experiment: empty ridge lambda grid");
  train.validate();
}

std::vector<std::size_t> scorable_test_indices(
    const std::vector<Window>& test_windows, int hop) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < test_windows.size(); ++i)
    if (test_windows[i].start_frame >= std::uint32_t(3 * hop))
      out.push_back(i);
  return out;
}

EvalReport run_experiment(const ExperimentData& data,
                          const ExperimentConfig& config) {
  config.validate();
  if (data.train_windows.empty())
    throw DataError("experiment: empty training split");
  if (data.test_windows.empty()) throw DataError("experiment: empty test split");

  const std::vector<std::size_t> test_idx =
      scorable_test_indices(data.test_windows);
  if (test_idx.empty())
    throw DataError(
        "experiment: test split has no scorable windows "
        "(every session is shorter than 4 windows)");

  std::vector<Window> test_subset;
  test_subset.reserve(test_idx.size());
  for (std::size_t i : test_idx) test_subset.push_back(data.test_windows[i]);
  const std::vector<State> truth = window_states(test_subset);

  const bool wants_lstm =
      std::find(config.models.begin(), config.models.end(), "fcn_lstm") !=
      config.models.end();
  std::vector<WindowSequence> train_seqs, val_seqs, test_seqs;
  if (wants_lstm) {
    train_seqs = build_sequences_grouped(data.train_windows);
    val_seqs = build_sequences_grouped(data.val_windows);
    test_seqs = build_sequences_grouped(data.test_windows);
    if (train_seqs.empty())
      throw DataError(
          "experiment: training split yields no 4-window sequences");
    if (test_seqs.size() != test_idx.size())
      throw DataError("experiment: test sequences do not align with the "
                      "scorable window subset");
    for (std::size_t j = 0; j < test_seqs.size(); ++j)
      if (test_seqs[j].window_indices[3] != test_idx[j])
        throw DataError("experiment: test sequences do not align with the "
                        "scorable window subset");
  }

  const std::vector<State> train_states = window_states(data.train_windows);
  const std::vector<State> val_states = window_states(data.val_windows);

  // 1-NN has no stochastic stage, so its predictions are shared across reps.
  std::vector<State> nn1_pred;
  if (std::find(config.models.begin(), config.models.end(), "nn1") !=
      config.models.end())
    nn1_pred = nn1_classify_batch(data.train_windows, test_subset);

  auto eval_neural = [&](const ModelSpec& spec, std::uint64_t seed,
                         const BatchSource& train_src, const BatchSource* val_src,
                         const BatchSource& test_src) {
    NeuralModel model(spec, seed);
    TrainConfig tc = config.train;
    tc.seed = seed;
    train_model(model, train_src, val_src, tc);
    return predict_all(model, test_src, tc.batch_size);
  };

  EvalReport report;
  report.reps = config.reps;
  for (const std::string& name : config.models) {
    for (int rep = 0; rep < config.reps; ++rep) {
      const std::uint64_t seed = config.base_seed + std::uint64_t(rep);
      std::vector<State> pred;
      try {
        if (name == "nn1") {
          pred = nn1_pred;
        } else if (name == "rocket") {
          const std::vector<RocketKernel> kernels = rocket_generate(
              config.rocket_kernels, kWindowLen, kFeatureDim, seed);
          const Eigen::MatrixXd x_train =
              rocket_transform(data.train_windows, kernels);
          Eigen::MatrixXd x_val;
          if (!data.val_windows.empty())
            x_val = rocket_transform(data.val_windows, kernels);
          const RidgeModel ridge =
              ridge_fit(x_train, train_states, config.lambda_grid,
                        data.val_windows.empty() ? nullptr : &x_val,
                        data.val_windows.empty() ? nullptr : &val_states);
          const Eigen::MatrixXd x_test = rocket_transform(test_subset, kernels);
          pred.reserve(test_subset.size());
          for (Eigen::Index i = 0; i < x_test.rows(); ++i)
            pred.push_back(ridge.predict(x_test.row(i).transpose()));
        } else if (name == "fcn" || name == "resnet") {
          const ModelSpec& spec = name == "fcn" ? config.fcn : config.resnet;
          const WindowBatchSource train_src(data.train_windows);
          const WindowBatchSource val_src(data.val_windows);
          const WindowBatchSource test_src(test_subset);
          pred = eval_neural(spec, seed, train_src,
                             data.val_windows.empty() ? nullptr : &val_src,
                             test_src);
        } else {  // fcn_lstm
          const SequenceBatchSource train_src(data.train_windows, train_seqs);
          const SequenceBatchSource val_src(data.val_windows, val_seqs);
          const SequenceBatchSource test_src(data.test_windows, test_seqs);
          pred = eval_neural(config.fcn_lstm, seed, train_src,
                             val_seqs.empty() ? nullptr : &val_src, test_src);
        }
      } catch (const TrainingDiverged& e) {
        throw TrainingDiverged(name + " rep " + std::to_string(rep) + ": " +
                               e.what());
      } catch (const DataError& e) {
        throw DataError(name + " rep " + std::to_string(rep) + ": " + e.what());
      }
      report.rows.push_back(
          EvalRow{name, rep, seed, compute_metrics(truth, pred)});
    }
  }
  report.aggregates = aggregate_rows(report.rows, config.models);
  return report;
}

std::vector<EvalAggregate> aggregate_rows(
    const std::vector<EvalRow>& rows, const std::vector<std::string>& order) {
  std::vector<EvalAggregate> out;
  for (const std::string& name : order) {
    std::vector<const Metrics*> group;
    for (const EvalRow& row : rows)
      if (row.model == name) group.push_back(&row.metrics);
    if (group.empty()) continue;
    EvalAggregate agg;
    agg.model = name;
    const double n = double(group.size());
    for (double Metrics::*field : kMetricFields) {
      double mean = 0.0;
      for (const Metrics* m : group) mean += m->*field;
      mean /= n;
      double var = 0.0;
      for (const Metrics* m : group) {
        const double d = m->*field - mean;
        var += d * d;
      }
      agg.mean.*field = mean;
      agg.stddev.*field = std::sqrt(var / n);
    }
    out.push_back(std::move(agg));
  }
  return out;
}

}  // namespace edd
