#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "edd/model.hpp"
#include "edd/segmentation.hpp"
#include "edd/tensor.hpp"

namespace edd {

struct TrainConfig {
  std::uint64_t seed = 0;
  int batch_size = 32;
  int max_epochs = 100;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int patience = 20;          // epochs without val-loss improvement
  bool restore_best = true;   // reload best-val weights after training

  void validate() const;  // ConfigError on nonsensical values
};

// Uniform view over a dataset that can materialize mini-batches as model
// input tensors; implementations must be deterministic in the index list.
class BatchSource {
 public:
  virtual ~BatchSource() = default;
  virtual std::size_t size() const = 0;
  virtual int target(std::size_t i) const = 0;
  virtual Tensor batch(const std::vector<std::size_t>& indices) const = 0;
};

// Windows as {n, 266, 40} batches (transposed from the frame-major layout).
class WindowBatchSource : public BatchSource {
 public:
  explicit WindowBatchSource(const std::vector<Window>& windows)
      : windows_(&windows) {}
  std::size_t size() const override { return windows_->size(); }
  int target(std::size_t i) const override {
    return int((*windows_)[i].state);
  }
  Tensor batch(const std::vector<std::size_t>& indices) const override;

 private:
  const std::vector<Window>* windows_;
};

// Window sequences as {n, 4, 266, 40} batches for the recurrent model.
class SequenceBatchSource : public BatchSource {
 public:
  SequenceBatchSource(const std::vector<Window>& windows,
                      const std::vector<WindowSequence>& sequences)
      : windows_(&windows), sequences_(&sequences) {}
  std::size_t size() const override { return sequences_->size(); }
  int target(std::size_t i) const override {
    return int((*sequences_)[i].state);
  }
  Tensor batch(const std::vector<std::size_t>& indices) const override;

 private:
  const std::vector<Window>* windows_;
  const std::vector<WindowSequence>* sequences_;
};

// Pre-built per-item tensors (used by tests and toy runs). Every item must
// share one shape; batches get a leading batch axis.
class MemoryBatchSource : public BatchSource {
 public:
  MemoryBatchSource(std::vector<Tensor> items, std::vector<int> targets);
  std::size_t size() const override { return items_.size(); }
  int target(std::size_t i) const override { return targets_[i]; }
  Tensor batch(const std::vector<std::size_t>& indices) const override;

 private:
  std::vector<Tensor> items_;
  std::vector<int> targets_;
};

struct TrainResult {
  int epochs_run = 0;
  int best_epoch = -1;        // -1 when no validation set was given
  double best_val_loss = 0.0;
};

// Mini-batch Adam with a seeded shuffle each epoch. Appends one EpochStats
// per epoch to model.history; early-stops on validation loss when `val` is
// non-null and non-empty. Throws TrainingDiverged on non-finite loss.
TrainResult train_model(NeuralModel& model, const BatchSource& train,
                        const BatchSource* val, const TrainConfig& config);

// Mean loss and accuracy in inference mode.
std::pair<double, double> evaluate_model(NeuralModel& model,
                                         const BatchSource& data,
                                         int batch_size);

std::vector<State> predict_all(NeuralModel& model, const BatchSource& data,
                               int batch_size);

// Max relative error between analytic gradients and central finite
// differences, sampled over at most `per_group` parameters per layer type.
// Differences below 1e-4 in magnitude are compared absolutely.
double grad_check(NeuralModel& model, const Tensor& x,
                  const std::vector<int>& targets, double step = 1e-5,
                  int per_group = 200, std::uint64_t seed = 12345);

}  // namespace edd
