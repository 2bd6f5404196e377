#pragma once

#include <Eigen/Core>
#include <vector>

#include "edd/rng.hpp"
#include "edd/tensor.hpp"

namespace edd {

// Differentiable layers over float64 tensors. Parameters and gradients live
// in flat vectors owned by the model; each layer receives its slice as raw
// pointers. Layers cache whatever the backward pass needs, so they are
// single-use per forward/backward pair and not thread-safe.

// Length-preserving 1-D cross-correlation ("same" padding): pad (k-1)/2 zeros
// on the left and k/2 on the right. Implemented as one im2col + GEMM over the
// whole batch. Input {N, C_in, L} -> output {N, C_out, L}.
// Parameter slice: weights C_out x (C_in * k) row-major, then C_out biases.
class Conv1dSame {
 public:
  Conv1dSame(int in_channels, int out_channels, int kernel);

  int param_count() const { return cout_ * cin_ * k_ + cout_; }
  void init_params(double* p, Rng& rng) const;  // Glorot-uniform, zero bias

  Tensor forward(const Tensor& x, const double* p);
  Tensor backward(const Tensor& grad_out, const double* p, double* grad_p);

  int in_channels() const { return cin_; }
  int out_channels() const { return cout_; }
  int kernel() const { return k_; }

 private:
  int cin_, cout_, k_;
  int n_ = 0, len_ = 0;
  Eigen::MatrixXd cols_;  // (C_in*k) x (N*L), cached for the backward GEMMs
};

// Per-channel batch normalization over (batch, length) with epsilon 1e-5.
// Training mode normalizes by batch statistics (biased variance) and blends
// running statistics with momentum 0.9; inference mode uses the running
// statistics and refuses to run before any have been recorded.
// Parameter slice: C gammas then C betas.
class BatchNorm1d {
 public:
  explicit BatchNorm1d(int channels);

  int param_count() const { return 2 * channels_; }
  void init_params(double* p, Rng& rng) const;  // gamma 1, beta 0

  Tensor forward(const Tensor& x, const double* p, bool train);
  Tensor backward(const Tensor& grad_out, const double* p, double* grad_p);

  int channels() const { return channels_; }

  // Running statistics are model state, serialized alongside parameters.
  std::vector<double> running_mean;
  std::vector<double> running_var;
  bool initialized = false;

  static constexpr double kEps = 1e-5;
  static constexpr double kMomentum = 0.9;

 private:
  int channels_;
  int n_ = 0, len_ = 0;
  std::vector<double> inv_std_;   // per channel, training batch
  std::vector<double> mean_;      // per channel, training batch
  Tensor xhat_;
};

// Elementwise max(x, 0); the mask is cached for backward.
class ReLU {
 public:
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& grad_out) const;

 private:
  std::vector<bool> mask_;
};

// Per-channel mean over time: {N, C, L} -> {N, C}.
class GlobalAvgPool {
 public:
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& grad_out) const;

 private:
  int n_ = 0, channels_ = 0, len_ = 0;
};

// Affine map {N, D} -> {N, K}. Parameter slice: weights K x D row-major,
// then K biases.
class Dense {
 public:
  Dense(int in_dim, int out_dim);

  int param_count() const { return out_ * in_ + out_; }
  void init_params(double* p, Rng& rng) const;  // Glorot-uniform, zero bias

  Tensor forward(const Tensor& x, const double* p);
  Tensor backward(const Tensor& grad_out, const double* p, double* grad_p);

  int in_dim() const { return in_; }
  int out_dim() const { return out_; }

 private:
  int in_, out_;
  Tensor x_;
};

// Standard LSTM over {N, T, D} -> {N, T, H}; initial hidden and cell state
// are zero; backward is full backpropagation through time. Gate order in the
// stacked parameter rows is input, forget, candidate, output (i, f, g, o).
// Parameter slice: W 4H x D, then U 4H x H, then 4H biases.
class LSTMLayer {
 public:
  LSTMLayer(int input_dim, int hidden);

  int param_count() const { return 4 * h_ * d_ + 4 * h_ * h_ + 4 * h_; }
  void init_params(double* p, Rng& rng) const;  // Glorot-uniform, zero bias

  Tensor forward(const Tensor& x, const double* p);
  Tensor backward(const Tensor& grad_out, const double* p, double* grad_p);

  int input_dim() const { return d_; }
  int hidden() const { return h_; }

 private:
  int d_, h_;
  int n_ = 0, t_ = 0;
  Tensor x_;
  // Per-timestep caches, each {N, T, H}.
  Tensor gate_i_, gate_f_, gate_g_, gate_o_, cell_, tanh_cell_, hidden_seq_;
};

// Numerically stable softmax over logits {N, K} plus mean cross-entropy.
// backward() returns the gradient of the mean loss at the logits.
struct SoftmaxXent {
  Eigen::MatrixXd probs;  // N x K, filled by forward

  double forward(const Tensor& logits, const std::vector<int>& targets);
  Tensor backward(const std::vector<int>& targets) const;
};

// Glorot-uniform draw shared by the layer initializers.
double glorot_limit(int fan_in, int fan_out);

}  // namespace edd
