#pragma once

#include <Eigen/Core>
#include <vector>

#include "edd/common.hpp"

namespace edd {

// Linear classifier solved in closed form on standardized features.
// Decision: DISTRACTED iff w' z + intercept >= 0 (DISTRACTED encoded +1).
struct RidgeModel {
  Eigen::VectorXd feature_means;
  Eigen::VectorXd feature_stds;  // floored at 1e-8
  Eigen::VectorXd weights;
  double intercept = 0.0;
  double lambda = 0.0;

  double score(const Eigen::VectorXd& x) const;
  State predict(const Eigen::VectorXd& x) const;
};

std::vector<double> default_lambda_grid();  // 1e-3 .. 1e3, decade steps

// Standardizes columns, solves (Z'Z + lambda I) w = Z'y per grid point via
// Cholesky, and keeps the lambda with the lowest validation error (5-fold
// cross-validation on the training rows when no validation set is given).
RidgeModel ridge_fit(const Eigen::MatrixXd& X, const std::vector<State>& y,
                     const std::vector<double>& lambda_grid,
                     const Eigen::MatrixXd* X_val = nullptr,
                     const std::vector<State>* y_val = nullptr);

State ridge_predict(const RidgeModel& model, const Eigen::VectorXd& x);

}  // namespace edd
