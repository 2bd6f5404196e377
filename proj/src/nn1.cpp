#include "edd/nn1.hpp"

#include <Eigen/Core>

namespace edd {

State nn1_classify(const std::vector<Window>& train, const Window& query) {
  if (train.empty()) throw DataError("nn1: empty training set");
  const std::size_t dim = query.values.size();
  Eigen::Map<const Eigen::VectorXd> q(query.values.data(), Eigen::Index(dim));

  double best = 0.0;
  std::size_t best_idx = 0;
  bool have_best = false;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (train[i].values.size() != dim)
      throw DataError("nn1: window shape mismatch");
    Eigen::Map<const Eigen::VectorXd> t(train[i].values.data(),
                                        Eigen::Index(dim));
    const double d = (q - t).squaredNorm();
    if (!have_best || d < best) {  // strict: ties keep the earliest index
      best = d;
      best_idx = i;
      have_best = true;
    }
  }
  return train[best_idx].state;
}

std::vector<State> nn1_classify_batch(const std::vector<Window>& train,
                                      const std::vector<Window>& queries) {
  std::vector<State> out;
  out.reserve(queries.size());
  for (const auto& q : queries) out.push_back(nn1_classify(train, q));
  return out;
}

}  // namespace edd
