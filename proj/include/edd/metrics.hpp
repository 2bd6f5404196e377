#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "edd/common.hpp"

namespace edd {

// 2x2 confusion counts; rows = true state, cols = predicted state, both in
// the order (DISTRACTED, FOCUSED).
struct ConfusionMatrix {
  std::array<std::array<std::int64_t, 2>, 2> counts{{{0, 0}, {0, 0}}};

  static ConfusionMatrix from_predictions(const std::vector<State>& truth,
                                          const std::vector<State>& pred);

  std::int64_t total() const {
    return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
  }
};

// Accuracy plus per-class precision/recall/F1. The FOCUSED class is reported
// as "driving". Zero-denominator metrics are 0 by convention.
struct Metrics {
  double accuracy = 0.0;
  double precision_distracted = 0.0;
  double recall_distracted = 0.0;
  double f1_distracted = 0.0;
  double precision_driving = 0.0;
  double recall_driving = 0.0;
  double f1_driving = 0.0;
};

Metrics metrics_from_confusion(const ConfusionMatrix& cm);
Metrics compute_metrics(const std::vector<State>& truth,
                        const std::vector<State>& pred);

}  // namespace edd
