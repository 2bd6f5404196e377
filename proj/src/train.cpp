#include "edd/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "edd/rng.hpp"

namespace edd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Predicted class: argmax with later classes winning ties, which for two
// classes makes an exact 50/50 split predict DISTRACTED (class 1).
int argmax_row(const Eigen::MatrixXd& probs, Eigen::Index row) {
  int best = 0;
  for (int j = 1; j < probs.cols(); ++j)
    if (probs(row, j) >= probs(row, best)) best = j;
  return best;
}

std::vector<int> gather_targets(const BatchSource& data,
                                const std::vector<std::size_t>& indices) {
  std::vector<int> t;
  t.reserve(indices.size());
  for (std::size_t i : indices) t.push_back(data.target(i));
  return t;
}

}  // namespace

void TrainConfig::validate() const {
  if (batch_size < 1) throw ConfigError("train: batch size must be >= 1");
  if (max_epochs < 1) throw ConfigError("train: max epochs must be >= 1");
  if (!(learning_rate > 0.0))
    throw ConfigError("train: learning rate must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
    throw ConfigError("train: adam betas must be in [0, 1)");
  if (!(epsilon > 0.0)) throw ConfigError("train: adam epsilon must be > 0");
  if (patience < 0) throw ConfigError("train: patience must be >= 0");
}

Tensor WindowBatchSource::batch(const std::vector<std::size_t>& indices) const {
  Tensor x({int(indices.size()), kFeatureDim, kWindowLen});
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const Window& w = (*windows_)[indices[i]];
    for (int t = 0; t < kWindowLen; ++t)
      for (int f = 0; f < kFeatureDim; ++f)
        x.at3(int(i), f, t) = w.at(t, f);
  }
  return x;
}

Tensor SequenceBatchSource::batch(
    const std::vector<std::size_t>& indices) const {
  Tensor x({int(indices.size()), kSequenceLen, kFeatureDim, kWindowLen});
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const WindowSequence& seq = (*sequences_)[indices[i]];
    for (int s = 0; s < kSequenceLen; ++s) {
      const Window& w = (*windows_)[seq.window_indices[std::size_t(s)]];
      double* dst = x.data.data() +
                    ((std::size_t(i) * kSequenceLen + std::size_t(s)) *
                     kFeatureDim) *
                        kWindowLen;
      for (int t = 0; t < kWindowLen; ++t)
        for (int f = 0; f < kFeatureDim; ++f)
          dst[std::size_t(f) * kWindowLen + std::size_t(t)] = w.at(t, f);
    }
  }
  return x;
}

MemoryBatchSource::MemoryBatchSource(std::vector<Tensor> items,
                                     std::vector<int> targets)
    : items_(std::move(items)), targets_(std::move(targets)) {
  if (items_.size() != targets_.size())
    throw DataError("batch source: item/target count mismatch");
  for (const Tensor& t : items_)
    if (t.shape != items_.front().shape)
      throw DataError("batch source: mixed item shapes");
}

Tensor MemoryBatchSource::batch(const std::vector<std::size_t>& indices) const {
  std::vector<int> shape = {int(indices.size())};
  const std::vector<int>& item_shape = items_.front().shape;
  shape.insert(shape.end(), item_shape.begin(), item_shape.end());
  Tensor x(shape);
  const std::size_t item_n = items_.front().size();
  for (std::size_t i = 0; i < indices.size(); ++i)
    std::copy(items_[indices[i]].data.begin(), items_[indices[i]].data.end(),
              x.data.begin() + long(i * item_n));
  return x;
}

std::pair<double, double> evaluate_model(NeuralModel& model,
                                         const BatchSource& data,
                                         int batch_size) {
  if (data.size() == 0) throw DataError("evaluate: empty dataset");
  double loss_sum = 0.0;
  std::size_t correct = 0;
  for (std::size_t start = 0; start < data.size();
       start += std::size_t(batch_size)) {
    const std::size_t end =
        std::min(data.size(), start + std::size_t(batch_size));
    std::vector<std::size_t> idx(end - start);
    std::iota(idx.begin(), idx.end(), start);
    const Tensor x = data.batch(idx);
    const std::vector<int> targets = gather_targets(data, idx);
    const Eigen::MatrixXd probs = model.forward_probs(x, /*train=*/false);
    for (Eigen::Index i = 0; i < probs.rows(); ++i) {
      const double p = std::max(probs(i, targets[std::size_t(i)]), 1e-300);
      loss_sum += -std::log(p);
      if (argmax_row(probs, i) == targets[std::size_t(i)]) ++correct;
    }
  }
  const double n = double(data.size());
  return {loss_sum / n, double(correct) / n};
}

std::vector<State> predict_all(NeuralModel& model, const BatchSource& data,
                               int batch_size) {
  std::vector<State> out;
  out.reserve(data.size());
  for (std::size_t start = 0; start < data.size();
       start += std::size_t(batch_size)) {
    const std::size_t end =
        std::min(data.size(), start + std::size_t(batch_size));
    std::vector<std::size_t> idx(end - start);
    std::iota(idx.begin(), idx.end(), start);
    const Tensor x = data.batch(idx);
    const Eigen::MatrixXd probs = model.forward_probs(x, /*train=*/false);
    for (Eigen::Index i = 0; i < probs.rows(); ++i)
      out.push_back(State(argmax_row(probs, i)));
  }
  return out;
}

TrainResult train_model(NeuralModel& model, const BatchSource& train,
                        const BatchSource* val, const TrainConfig& config) {
  config.validate();
  if (train.size() == 0) throw DataError("train_model: empty training set");
  const bool use_val = val != nullptr && val->size() > 0;

  Rng rng(config.seed);
  std::vector<double> adam_m(model.params().size(), 0.0);
  std::vector<double> adam_v(model.params().size(), 0.0);
  long adam_t = 0;

  TrainResult result;
  double best_val = std::numeric_limits<double>::infinity();
  std::vector<double> best_params;
  std::vector<double> best_norm;
  int since_best = 0;

  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t(0));

  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < order.size();
         start += std::size_t(config.batch_size)) {
      const std::size_t end =
          std::min(order.size(), start + std::size_t(config.batch_size));
      const std::vector<std::size_t> idx(order.begin() + long(start),
                                         order.begin() + long(end));
      const Tensor x = train.batch(idx);
      const std::vector<int> targets = gather_targets(train, idx);
      const double loss = model.loss_and_grad(x, targets);
      if (!std::isfinite(loss))
        throw TrainingDiverged("non-finite training loss at epoch " +
                               std::to_string(epoch) + ", batch " +
                               std::to_string(start / config.batch_size));
      loss_sum += loss * double(idx.size());
      const Eigen::MatrixXd& probs = model.last_probs();
      for (Eigen::Index i = 0; i < probs.rows(); ++i)
        if (argmax_row(probs, i) == targets[std::size_t(i)]) ++correct;

      ++adam_t;
      const double bc1 = 1.0 - std::pow(config.beta1, double(adam_t));
      const double bc2 = 1.0 - std::pow(config.beta2, double(adam_t));
      double* p = model.params().data();
      const double* g = model.grads().data();
      for (std::size_t i = 0; i < model.params().size(); ++i) {
        adam_m[i] = config.beta1 * adam_m[i] + (1.0 - config.beta1) * g[i];
        adam_v[i] =
            config.beta2 * adam_v[i] + (1.0 - config.beta2) * g[i] * g[i];
        p[i] -= config.learning_rate * (adam_m[i] / bc1) /
                (std::sqrt(adam_v[i] / bc2) + config.epsilon);
      }
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / double(train.size());
    stats.train_acc = double(correct) / double(train.size());
    stats.val_loss = kNaN;
    stats.val_acc = kNaN;
    result.epochs_run = epoch + 1;

    if (use_val) {
      const auto [val_loss, val_acc] =
          evaluate_model(model, *val, config.batch_size);
      if (!std::isfinite(val_loss))
        throw TrainingDiverged("non-finite validation loss at epoch " +
                               std::to_string(epoch));
      stats.val_loss = val_loss;
      stats.val_acc = val_acc;
      model.history.push_back(stats);
      if (val_loss < best_val) {
        best_val = val_loss;
        result.best_epoch = epoch;
        result.best_val_loss = val_loss;
        best_params = model.params();
        best_norm = model.norm_state();
        since_best = 0;
      } else {
        ++since_best;
        if (since_best >= config.patience) break;
      }
    } else {
      model.history.push_back(stats);
    }
  }

  if (use_val && config.restore_best && !best_params.empty()) {
    model.params() = best_params;
    model.set_norm_state(best_norm);
  }
  return result;
}

double grad_check(NeuralModel& model, const Tensor& x,
                  const std::vector<int>& targets, double step, int per_group,
                  std::uint64_t seed) {
  const double base_loss = model.loss_and_grad(x, targets);
  if (!std::isfinite(base_loss))
    throw TrainingDiverged("grad_check: non-finite loss");
  const std::vector<double> analytic = model.grads();

  // Pool parameter indices by layer type.
  std::vector<std::string> kinds;
  for (const ParamGroup& g : model.param_groups())
    if (std::find(kinds.begin(), kinds.end(), g.kind) == kinds.end())
      kinds.push_back(g.kind);

  // Loss-only evaluation (training mode, matching the analytic pass).
  auto loss_at = [&]() {
    const Eigen::MatrixXd probs = model.forward_probs(x, /*train=*/true);
    double loss = 0.0;
    for (Eigen::Index i = 0; i < probs.rows(); ++i)
      loss -= std::log(std::max(probs(i, targets[std::size_t(i)]), 1e-300));
    return loss / double(probs.rows());
  };

  Rng rng(seed);
  double worst = 0.0;
  for (const std::string& kind : kinds) {
    std::vector<std::size_t> pool;
    for (const ParamGroup& g : model.param_groups())
      if (g.kind == kind)
        for (std::size_t i = 0; i < g.count; ++i) pool.push_back(g.offset + i);
    const std::size_t take =
        std::min(pool.size(), std::size_t(std::max(1, per_group)));
    // Partial Fisher-Yates: the first `take` entries are a uniform subsample.
    for (std::size_t i = 0; i < take; ++i) {
      const std::uint64_t j = rng.uniform_u64(std::uint64_t(pool.size() - i));
      std::swap(pool[i], pool[i + std::size_t(j)]);
    }
    for (std::size_t s = 0; s < take; ++s) {
      const std::size_t i = pool[s];
      const double saved = model.params()[i];
      model.params()[i] = saved + step;
      const double plus = loss_at();
      model.params()[i] = saved - step;
      const double minus = loss_at();
      model.params()[i] = saved;
      const double numeric = (plus - minus) / (2.0 * step);
      const double ga = analytic[i];
      const double scale = std::max(std::abs(ga), std::abs(numeric));
      const double err =
          scale < 1e-4 ? std::abs(ga - numeric) : std::abs(ga - numeric) / scale;
      worst = std::max(worst, err);
    }
  }
  return worst;
}

}  // namespace edd
