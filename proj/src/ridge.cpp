#include "edd/ridge.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace edd {

namespace {

constexpr double kStdFloor = 1e-8;

Eigen::VectorXd encode_labels(const std::vector<State>& y) {
  Eigen::VectorXd v(Eigen::Index(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i)
    v[Eigen::Index(i)] = y[i] == State::DISTRACTED ? 1.0 : -1.0;
  return v;
}

// Weights for one lambda given the precomputed Gram matrix of the
// standardized design and its label projection.
Eigen::VectorXd solve_ridge(const Eigen::MatrixXd& gram,
                            const Eigen::VectorXd& zty, double lambda) {
  Eigen::MatrixXd A = gram;
  A.diagonal().array() += lambda;
  return A.llt().solve(zty);
}

std::size_t count_errors(const Eigen::MatrixXd& Z, const Eigen::VectorXd& yv,
                         const Eigen::VectorXd& w, double intercept) {
  const Eigen::VectorXd scores =
      (Z * w).array() + intercept;
  std::size_t errors = 0;
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    const bool pred_distracted = scores[i] >= 0.0;
    const bool is_distracted = yv[i] > 0.0;
    if (pred_distracted != is_distracted) ++errors;
  }
  return errors;
}

}  // namespace

double RidgeModel::score(const Eigen::VectorXd& x) const {
  if (x.size() != weights.size())
    throw DataError("ridge: feature dimension mismatch");
  if (!x.allFinite()) throw DataError("ridge: non-finite features");
  const Eigen::VectorXd z =
      (x - feature_means).cwiseQuotient(feature_stds);
  return weights.dot(z) + intercept;
}

State RidgeModel::predict(const Eigen::VectorXd& x) const {
  // exact zero counts as DISTRACTED (safety tie-break)
  return score(x) >= 0.0 ? State::DISTRACTED : State::FOCUSED;
}

State ridge_predict(const RidgeModel& model, const Eigen::VectorXd& x) {
  return model.predict(x);
}

std::vector<double> default_lambda_grid() {
  return {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
}

RidgeModel ridge_fit(const Eigen::MatrixXd& X, const std::vector<State>& y,
                     const std::vector<double>& lambda_grid,
                     const Eigen::MatrixXd* X_val,
                     const std::vector<State>* y_val) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (n < 2 || std::size_t(n) != y.size())
    throw DataError("ridge_fit: need at least 2 labeled rows");
  if (!X.allFinite()) throw DataError("ridge_fit: non-finite features");
  if (lambda_grid.empty()) throw ConfigError("ridge_fit: empty lambda grid");

  const Eigen::VectorXd yv = encode_labels(y);
  if (yv.maxCoeff() == yv.minCoeff())
    throw DataError("ridge_fit: training data contains a single class");

  RidgeModel model;
  model.feature_means = X.colwise().mean();
  Eigen::MatrixXd Z = X.rowwise() - model.feature_means.transpose();
  model.feature_stds =
      (Z.array().square().colwise().mean()).sqrt().matrix().cwiseMax(kStdFloor);
  Z.array().rowwise() /= model.feature_stds.transpose().array();

  // Z is column-centered, so the unpenalized intercept is just mean(y) and
  // the normal equations can use the raw labels directly.
  const double intercept = yv.mean();

  if (X_val != nullptr && y_val != nullptr && X_val->rows() > 0) {
    if (X_val->cols() != p) throw DataError("ridge_fit: validation dimension mismatch");
    const Eigen::MatrixXd gram = Z.transpose() * Z;
    const Eigen::VectorXd zty = Z.transpose() * yv;
    Eigen::MatrixXd Zv = X_val->rowwise() - model.feature_means.transpose();
    Zv.array().rowwise() /= model.feature_stds.transpose().array();
    const Eigen::VectorXd yv_val = encode_labels(*y_val);

    // Ties prefer the larger lambda: at equal validation error the more
    // regularized solution transfers better to unseen participants.
    std::size_t best_errors = std::size_t(-1);
    for (double lambda : lambda_grid) {
      const Eigen::VectorXd w = solve_ridge(gram, zty, lambda);
      const std::size_t errors = count_errors(Zv, yv_val, w, intercept);
      if (errors < best_errors ||
          (errors == best_errors && lambda > model.lambda)) {
        best_errors = errors;
        model.lambda = lambda;
        model.weights = w;
      }
    }
  } else {
    // 5-fold cross-validation, folds assigned round-robin by row index.
    const int k_folds = 5;
    std::vector<std::size_t> errors_per_lambda(lambda_grid.size(), 0);
    for (int fold = 0; fold < k_folds; ++fold) {
      std::vector<Eigen::Index> train_rows, val_rows;
      for (Eigen::Index i = 0; i < n; ++i)
        (i % k_folds == fold ? val_rows : train_rows).push_back(i);
      if (train_rows.empty() || val_rows.empty()) continue;
      Eigen::MatrixXd Zf(Eigen::Index(train_rows.size()), p);
      Eigen::VectorXd yf(Eigen::Index(train_rows.size()));
      for (std::size_t i = 0; i < train_rows.size(); ++i) {
        Zf.row(Eigen::Index(i)) = Z.row(train_rows[i]);
        yf[Eigen::Index(i)] = yv[train_rows[i]];
      }
      Eigen::MatrixXd Zv(Eigen::Index(val_rows.size()), p);
      Eigen::VectorXd yvv(Eigen::Index(val_rows.size()));
      for (std::size_t i = 0; i < val_rows.size(); ++i) {
        Zv.row(Eigen::Index(i)) = Z.row(val_rows[i]);
        yvv[Eigen::Index(i)] = yv[val_rows[i]];
      }
      const Eigen::MatrixXd gram_f = Zf.transpose() * Zf;
      const Eigen::VectorXd zty_f = Zf.transpose() * yf;
      for (std::size_t li = 0; li < lambda_grid.size(); ++li) {
        const Eigen::VectorXd w = solve_ridge(gram_f, zty_f, lambda_grid[li]);
        errors_per_lambda[li] += count_errors(Zv, yvv, w, intercept);
      }
    }
    std::size_t best = 0;
    for (std::size_t li = 1; li < lambda_grid.size(); ++li)
      if (errors_per_lambda[li] < errors_per_lambda[best] ||
          (errors_per_lambda[li] == errors_per_lambda[best] &&
           lambda_grid[li] > lambda_grid[best]))
        best = li;
    model.lambda = lambda_grid[best];
    // refit on all training rows at the selected lambda
    const Eigen::MatrixXd gram = Z.transpose() * Z;
    const Eigen::VectorXd zty = Z.transpose() * yv;
    model.weights = solve_ridge(gram, zty, model.lambda);
  }

  model.intercept = intercept;
  return model;
}

}  // namespace edd
