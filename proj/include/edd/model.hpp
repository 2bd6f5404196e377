#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "edd/features.hpp"
#include "edd/layers.hpp"
#include "edd/segmentation.hpp"

namespace edd {

enum class ModelKind { FCN, RESNET, FCN_LSTM };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);  // ConfigError

// Hyperparameters that fully determine every parameter shape.
struct ModelSpec {
  ModelKind kind = ModelKind::FCN;
  int input_channels = kFeatureDim;
  int input_len = kWindowLen;
  int sequence_len = kSequenceLen;  // FCN_LSTM only
  int num_classes = 2;
  std::vector<int> conv_filters = {128, 256, 128};  // FCN / FCN_LSTM stack
  std::vector<int> conv_kernels = {8, 5, 3};
  std::vector<int> res_filters = {64, 128, 128};    // one per residual block
  int lstm_hidden = 128;

  static ModelSpec fcn();
  static ModelSpec resnet();
  static ModelSpec fcn_lstm();

  void validate() const;  // ConfigError on impossible shapes
};

// One line of training history; validation entries are NaN when no
// validation set was supplied.
struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  double train_acc = 0.0;
  double val_loss = 0.0;
  double val_acc = 0.0;
};

// Contiguous slice of the flat parameter vector, labeled by layer type so
// gradient checks can sample per type.
struct ParamGroup {
  std::string kind;  // "conv", "batch_norm", "dense", "lstm"
  std::size_t offset = 0;
  std::size_t count = 0;
};

// One of the three architectures with its parameters in a single flat
// float64 vector. Class index convention: int(State), so column 1 of the
// probability matrix is P(DISTRACTED).
class NeuralModel {
 public:
  NeuralModel(const ModelSpec& spec, std::uint64_t seed);

  const ModelSpec& spec() const { return spec_; }
  std::uint64_t seed() const { return seed_; }

  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }
  std::vector<double>& grads() { return grads_; }
  const std::vector<ParamGroup>& param_groups() const { return groups_; }

  // FCN / RESNET input {N, C, L}; FCN_LSTM input {N, S, C, L}.
  // Returns class probabilities, one row per sample.
  Eigen::MatrixXd forward_probs(const Tensor& x, bool train);

  // Mean cross-entropy over the batch; fills grads() (zeroed first).
  double loss_and_grad(const Tensor& x, const std::vector<int>& targets);

  // Class probabilities from the most recent loss_and_grad call.
  const Eigen::MatrixXd& last_probs() const { return xent_.probs; }

  std::vector<State> predict(const Tensor& x);

  // Batch-norm running statistics (plus initialized flags), the only model
  // state outside the parameter vector.
  std::vector<double> norm_state() const;
  void set_norm_state(const std::vector<double>& state);

  std::vector<EpochStats> history;

 private:
  struct ConvUnit {
    Conv1dSame conv;
    BatchNorm1d bn;
    ReLU relu;
    bool relu_after = true;
    std::size_t p_conv = 0;
    std::size_t p_bn = 0;
  };
  struct Shortcut {
    bool projection = false;
    std::optional<Conv1dSame> conv;  // 1x1 when channel count changes
    std::optional<BatchNorm1d> bn;
    std::size_t p_conv = 0;
    std::size_t p_bn = 0;
    ReLU post_relu;
    Tensor block_input;  // cached for the backward pass
  };

  Tensor forward_logits(const Tensor& x, bool train);
  Tensor backward_logits(const Tensor& grad_logits);
  Tensor conv_stack_forward(Tensor h, bool train);
  Tensor conv_stack_backward(Tensor g);
  std::vector<BatchNorm1d*> norm_layers();
  std::vector<const BatchNorm1d*> norm_layers() const;

  ModelSpec spec_;
  std::uint64_t seed_ = 0;
  std::vector<double> params_;
  std::vector<double> grads_;
  std::vector<ParamGroup> groups_;

  std::vector<ConvUnit> units_;
  std::vector<Shortcut> shortcuts_;  // RESNET: one per block
  GlobalAvgPool gap_;
  std::vector<LSTMLayer> lstms_;     // FCN_LSTM: two layers
  std::vector<std::size_t> p_lstm_;
  std::optional<Dense> dense_;
  std::size_t p_dense_ = 0;
  SoftmaxXent xent_;

  int batch_n_ = 0;  // last forward batch size (pre-fold for FCN_LSTM)
};

// EDN1 model file: spec block, flat parameters, batch-norm state and the
// training history, all little-endian.
void save_neural_model(const NeuralModel& model, const std::string& path);
NeuralModel load_neural_model(const std::string& path);

}  // namespace edd
