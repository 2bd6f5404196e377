#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edd/metrics.hpp"
#include "edd/model.hpp"
#include "edd/ridge.hpp"
#include "edd/segmentation.hpp"
#include "edd/train.hpp"

namespace edd {

inline const std::vector<std::string> kAllModelNames = {
    "nn1", "rocket", "fcn", "resnet", "fcn_lstm"};

// Windowed dataset split by participant. Windows within each vector are
// ordered session by session (start_frame restarts mark session boundaries).
struct ExperimentData {
  std::vector<Window> train_windows;
  std::vector<Window> val_windows;
  std::vector<Window> test_windows;
};

struct ExperimentConfig {
  int reps = 5;
  std::uint64_t base_seed = 42;
  std::vector<std::string> models = kAllModelNames;
  int rocket_kernels = 10000;
  std::vector<double> lambda_grid = default_lambda_grid();
  TrainConfig train;
  ModelSpec fcn = ModelSpec::fcn();
  ModelSpec resnet = ModelSpec::resnet();
  ModelSpec fcn_lstm = ModelSpec::fcn_lstm();

  void validate() const;
};

struct EvalRow {
  std::string model;
  int rep = 0;
  std::uint64_t seed = 0;
  Metrics metrics;
};

struct EvalAggregate {
  std::string model;
  Metrics mean;
  Metrics stddev;  // population standard deviation over repetitions
};

struct EvalReport {
  std::vector<EvalRow> rows;            // model-major, repetitions ascending
  std::vector<EvalAggregate> aggregates;
  int reps = 0;
};

// Recomputes the aggregate block from the rows (population std).
std::vector<EvalAggregate> aggregate_rows(const std::vector<EvalRow>& rows,
                                          const std::vector<std::string>& order);

// All five models are scored on the identical test subset: windows whose
// in-session index is >= 3 (start_frame >= 3 * hop), so a 4-window sequence
// ending at each scored window exists for the recurrent model.
std::vector<std::size_t> scorable_test_indices(
    const std::vector<Window>& test_windows, int hop = kWindowHop);

// Trains every configured model `reps` times (repetition r seeds every
// stochastic stage with base_seed + r) and evaluates on the common test
// subset. Deterministic given the dataset and config.
EvalReport run_experiment(const ExperimentData& data,
                          const ExperimentConfig& config);

}  // namespace edd
