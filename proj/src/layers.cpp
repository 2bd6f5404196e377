#include "edd/layers.hpp"

#include <algorithm>
#include <cmath>

namespace edd {

namespace {

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstRowMajorMap = Eigen::Map<const RowMajorMatrix>;
using RowMajorMap = Eigen::Map<RowMajorMatrix>;

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

}  // namespace

double glorot_limit(int fan_in, int fan_out) {
  return std::sqrt(6.0 / (double(fan_in) + double(fan_out)));
}

// ---------------------------------------------------------------------------
// Conv1dSame

Conv1dSame::Conv1dSame(int in_channels, int out_channels, int kernel)
    : cin_(in_channels), cout_(out_channels), k_(kernel) {
  if (cin_ < 1 || cout_ < 1 || k_ < 1)
    throw ConfigError("conv1d: channels and kernel must be positive");
}

void Conv1dSame::init_params(double* p, Rng& rng) const {
  const double limit = glorot_limit(cin_ * k_, cout_ * k_);
  const int nw = cout_ * cin_ * k_;
  for (int i = 0; i < nw; ++i) p[i] = rng.uniform(-limit, limit);
  for (int i = 0; i < cout_; ++i) p[nw + i] = 0.0;
}

Tensor Conv1dSame::forward(const Tensor& x, const double* p) {
  if (x.rank() != 3 || x.dim(1) != cin_)
    throw DataError("conv1d: expected {N, " + std::to_string(cin_) +
                    ", L} input");
  n_ = x.dim(0);
  len_ = x.dim(2);
  const int pad_left = (k_ - 1) / 2;

  cols_.resize(cin_ * k_, Eigen::Index(n_) * len_);
  cols_.setZero();
  for (int n = 0; n < n_; ++n) {
    const double* xn = x.data.data() + std::size_t(n) * cin_ * len_;
    for (int c = 0; c < cin_; ++c) {
      const double* xc = xn + std::size_t(c) * len_;
      for (int j = 0; j < k_; ++j) {
        // Output t reads input t - pad_left + j; keep the in-range span.
        const int t_lo = std::max(0, pad_left - j);
        const int t_hi = std::min(len_, len_ + pad_left - j);
        for (int t = t_lo; t < t_hi; ++t)
          cols_(c * k_ + j, Eigen::Index(n) * len_ + t) = xc[t - pad_left + j];
      }
    }
  }

  ConstRowMajorMap W(p, cout_, cin_ * k_);
  Eigen::Map<const Eigen::VectorXd> b(p + cout_ * cin_ * k_, cout_);
  Eigen::MatrixXd out_mat = W * cols_;
  out_mat.colwise() += b;

  Tensor out({n_, cout_, len_});
  for (int n = 0; n < n_; ++n)
    for (int o = 0; o < cout_; ++o)
      for (int t = 0; t < len_; ++t)
        out.data[(std::size_t(n) * cout_ + o) * len_ + t] =
            out_mat(o, Eigen::Index(n) * len_ + t);
  return out;
}

Tensor Conv1dSame::backward(const Tensor& grad_out, const double* p,
                            double* grad_p) {
  if (grad_out.rank() != 3 || grad_out.dim(0) != n_ ||
      grad_out.dim(1) != cout_ || grad_out.dim(2) != len_)
    throw DataError("conv1d backward: gradient shape mismatch");

  Eigen::MatrixXd G(cout_, Eigen::Index(n_) * len_);
  for (int n = 0; n < n_; ++n)
    for (int o = 0; o < cout_; ++o)
      for (int t = 0; t < len_; ++t)
        G(o, Eigen::Index(n) * len_ + t) =
            grad_out.data[(std::size_t(n) * cout_ + o) * len_ + t];

  const int nw = cout_ * cin_ * k_;
  RowMajorMap gW(grad_p, cout_, cin_ * k_);
  Eigen::Map<Eigen::VectorXd> gB(grad_p + nw, cout_);
  gW.noalias() += G * cols_.transpose();
  gB.noalias() += G.rowwise().sum();

  ConstRowMajorMap W(p, cout_, cin_ * k_);
  Eigen::MatrixXd grad_cols = W.transpose() * G;

  const int pad_left = (k_ - 1) / 2;
  Tensor grad_x({n_, cin_, len_});
  for (int n = 0; n < n_; ++n) {
    double* gx = grad_x.data.data() + std::size_t(n) * cin_ * len_;
    for (int c = 0; c < cin_; ++c) {
      double* gc = gx + std::size_t(c) * len_;
      for (int j = 0; j < k_; ++j) {
        const int t_lo = std::max(0, pad_left - j);
        const int t_hi = std::min(len_, len_ + pad_left - j);
        for (int t = t_lo; t < t_hi; ++t)
          gc[t - pad_left + j] +=
              grad_cols(c * k_ + j, Eigen::Index(n) * len_ + t);
      }
    }
  }
  return grad_x;
}

// ---------------------------------------------------------------------------
// BatchNorm1d

BatchNorm1d::BatchNorm1d(int channels) : channels_(channels) {
  if (channels_ < 1) throw ConfigError("batch_norm: channels must be >= 1");
  running_mean.assign(std::size_t(channels_), 0.0);
  running_var.assign(std::size_t(channels_), 1.0);
}

void BatchNorm1d::init_params(double* p, Rng&) const {
  for (int c = 0; c < channels_; ++c) p[c] = 1.0;                // gamma
  for (int c = 0; c < channels_; ++c) p[channels_ + c] = 0.0;    // beta
}

Tensor BatchNorm1d::forward(const Tensor& x, const double* p, bool train) {
  if (x.rank() != 3 || x.dim(1) != channels_)
    throw DataError("batch_norm: expected {N, " + std::to_string(channels_) +
                    ", L} input");
  n_ = x.dim(0);
  len_ = x.dim(2);
  const double m = double(n_) * double(len_);
  if (train && m < 2.0)
    throw DataError("batch_norm: training needs at least 2 values per channel");
  if (!train && !initialized)
    throw DataError("batch_norm: inference before any training statistics");

  const double* gamma = p;
  const double* beta = p + channels_;
  Tensor out({n_, channels_, len_});

  if (train) {
    mean_.assign(std::size_t(channels_), 0.0);
    inv_std_.assign(std::size_t(channels_), 0.0);
    xhat_ = Tensor({n_, channels_, len_});
    for (int c = 0; c < channels_; ++c) {
      double sum = 0.0;
      for (int n = 0; n < n_; ++n)
        for (int t = 0; t < len_; ++t) sum += x.at3(n, c, t);
      const double mean = sum / m;
      double var = 0.0;
      for (int n = 0; n < n_; ++n)
        for (int t = 0; t < len_; ++t) {
          const double d = x.at3(n, c, t) - mean;
          var += d * d;
        }
      var /= m;  // biased, matching the running-average convention
      const double inv = 1.0 / std::sqrt(var + kEps);
      mean_[std::size_t(c)] = mean;
      inv_std_[std::size_t(c)] = inv;
      running_mean[std::size_t(c)] =
          kMomentum * running_mean[std::size_t(c)] + (1.0 - kMomentum) * mean;
      running_var[std::size_t(c)] =
          kMomentum * running_var[std::size_t(c)] + (1.0 - kMomentum) * var;
      for (int n = 0; n < n_; ++n)
        for (int t = 0; t < len_; ++t) {
          const double xh = (x.at3(n, c, t) - mean) * inv;
          xhat_.at3(n, c, t) = xh;
          out.at3(n, c, t) = gamma[c] * xh + beta[c];
        }
    }
    initialized = true;
  } else {
    for (int c = 0; c < channels_; ++c) {
      const double inv =
          1.0 / std::sqrt(running_var[std::size_t(c)] + kEps);
      for (int n = 0; n < n_; ++n)
        for (int t = 0; t < len_; ++t)
          out.at3(n, c, t) =
              gamma[c] * (x.at3(n, c, t) - running_mean[std::size_t(c)]) * inv +
              beta[c];
    }
  }
  return out;
}

Tensor BatchNorm1d::backward(const Tensor& grad_out, const double* p,
                             double* grad_p) {
  if (grad_out.rank() != 3 || grad_out.dim(0) != n_ ||
      grad_out.dim(1) != channels_ || grad_out.dim(2) != len_)
    throw DataError("batch_norm backward: gradient shape mismatch");
  if (xhat_.data.empty())
    throw DataError("batch_norm backward: no cached training forward");

  const double* gamma = p;
  const double m = double(n_) * double(len_);
  Tensor grad_x({n_, channels_, len_});
  for (int c = 0; c < channels_; ++c) {
    double sum_g = 0.0, sum_gx = 0.0;
    for (int n = 0; n < n_; ++n)
      for (int t = 0; t < len_; ++t) {
        const double g = grad_out.at3(n, c, t);
        sum_g += g;
        sum_gx += g * xhat_.at3(n, c, t);
      }
    grad_p[channels_ + c] += sum_g;  // beta
    grad_p[c] += sum_gx;             // gamma
    const double scale = gamma[c] * inv_std_[std::size_t(c)] / m;
    for (int n = 0; n < n_; ++n)
      for (int t = 0; t < len_; ++t) {
        const double g = grad_out.at3(n, c, t);
        grad_x.at3(n, c, t) =
            scale * (m * g - sum_g - xhat_.at3(n, c, t) * sum_gx);
      }
  }
  return grad_x;
}

// ---------------------------------------------------------------------------
// ReLU

Tensor ReLU::forward(const Tensor& x) {
  Tensor out = x;
  mask_.assign(x.size(), false);
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    if (out.data[i] > 0.0) {
      mask_[i] = true;
    } else {
      out.data[i] = 0.0;
    }
  }
  return out;
}

Tensor ReLU::backward(const Tensor& grad_out) const {
  if (grad_out.size() != mask_.size())
    throw DataError("relu backward: gradient shape mismatch");
  Tensor grad_x = grad_out;
  for (std::size_t i = 0; i < grad_x.data.size(); ++i)
    if (!mask_[i]) grad_x.data[i] = 0.0;
  return grad_x;
}

// ---------------------------------------------------------------------------
// GlobalAvgPool

Tensor GlobalAvgPool::forward(const Tensor& x) {
  if (x.rank() != 3) throw DataError("global_avg_pool: expected rank-3 input");
  n_ = x.dim(0);
  channels_ = x.dim(1);
  len_ = x.dim(2);
  if (len_ < 1) throw DataError("global_avg_pool: empty time axis");
  Tensor out({n_, channels_});
  for (int n = 0; n < n_; ++n)
    for (int c = 0; c < channels_; ++c) {
      double sum = 0.0;
      for (int t = 0; t < len_; ++t) sum += x.at3(n, c, t);
      out.at2(n, c) = sum / double(len_);
    }
  return out;
}

Tensor GlobalAvgPool::backward(const Tensor& grad_out) const {
  if (grad_out.rank() != 2 || grad_out.dim(0) != n_ ||
      grad_out.dim(1) != channels_)
    throw DataError("global_avg_pool backward: gradient shape mismatch");
  Tensor grad_x({n_, channels_, len_});
  for (int n = 0; n < n_; ++n)
    for (int c = 0; c < channels_; ++c) {
      const double g = grad_out.at2(n, c) / double(len_);
      for (int t = 0; t < len_; ++t) grad_x.at3(n, c, t) = g;
    }
  return grad_x;
}

// ---------------------------------------------------------------------------
// Dense

Dense::Dense(int in_dim, int out_dim) : in_(in_dim), out_(out_dim) {
  if (in_ < 1 || out_ < 1)
    throw ConfigError("dense: dimensions must be positive");
}

void Dense::init_params(double* p, Rng& rng) const {
  const double limit = glorot_limit(in_, out_);
  for (int i = 0; i < out_ * in_; ++i) p[i] = rng.uniform(-limit, limit);
  for (int i = 0; i < out_; ++i) p[out_ * in_ + i] = 0.0;
}

Tensor Dense::forward(const Tensor& x, const double* p) {
  if (x.rank() != 2 || x.dim(1) != in_)
    throw DataError("dense: expected {N, " + std::to_string(in_) + "} input");
  x_ = x;
  ConstRowMajorMap W(p, out_, in_);
  Eigen::Map<const Eigen::VectorXd> b(p + out_ * in_, out_);
  ConstRowMajorMap X(x.data.data(), x.dim(0), in_);
  Tensor out({x.dim(0), out_});
  RowMajorMap O(out.data.data(), x.dim(0), out_);
  O.noalias() = X * W.transpose();
  O.rowwise() += b.transpose();
  return out;
}

Tensor Dense::backward(const Tensor& grad_out, const double* p,
                       double* grad_p) {
  if (grad_out.rank() != 2 || grad_out.dim(0) != x_.dim(0) ||
      grad_out.dim(1) != out_)
    throw DataError("dense backward: gradient shape mismatch");
  const int n = x_.dim(0);
  ConstRowMajorMap G(grad_out.data.data(), n, out_);
  ConstRowMajorMap X(x_.data.data(), n, in_);
  RowMajorMap gW(grad_p, out_, in_);
  Eigen::Map<Eigen::VectorXd> gB(grad_p + out_ * in_, out_);
  gW.noalias() += G.transpose() * X;
  gB.noalias() += G.colwise().sum().transpose();

  ConstRowMajorMap W(p, out_, in_);
  Tensor grad_x({n, in_});
  RowMajorMap GX(grad_x.data.data(), n, in_);
  GX.noalias() = G * W;
  return grad_x;
}

// ---------------------------------------------------------------------------
// LSTMLayer

LSTMLayer::LSTMLayer(int input_dim, int hidden) : d_(input_dim), h_(hidden) {
  if (d_ < 1 || h_ < 1) throw ConfigError("lstm: dimensions must be positive");
}

void LSTMLayer::init_params(double* p, Rng& rng) const {
  // Input kernel is treated as a (D -> 4H) map, recurrent as (H -> 4H).
  const double wl = glorot_limit(d_, 4 * h_);
  int idx = 0;
  for (int i = 0; i < 4 * h_ * d_; ++i) p[idx++] = rng.uniform(-wl, wl);
  const double ul = glorot_limit(h_, 4 * h_);
  for (int i = 0; i < 4 * h_ * h_; ++i) p[idx++] = rng.uniform(-ul, ul);
  for (int i = 0; i < 4 * h_; ++i) p[idx++] = 0.0;
}

Tensor LSTMLayer::forward(const Tensor& x, const double* p) {
  if (x.rank() != 3 || x.dim(2) != d_)
    throw DataError("lstm: expected {N, T, " + std::to_string(d_) + "} input");
  n_ = x.dim(0);
  t_ = x.dim(1);
  x_ = x;

  ConstRowMajorMap W(p, 4 * h_, d_);
  ConstRowMajorMap U(p + 4 * h_ * d_, 4 * h_, h_);
  Eigen::Map<const Eigen::VectorXd> b(p + 4 * h_ * d_ + 4 * h_ * h_, 4 * h_);

  const std::vector<int> cache_shape = {n_, t_, h_};
  gate_i_ = Tensor(cache_shape);
  gate_f_ = Tensor(cache_shape);
  gate_g_ = Tensor(cache_shape);
  gate_o_ = Tensor(cache_shape);
  cell_ = Tensor(cache_shape);
  tanh_cell_ = Tensor(cache_shape);
  hidden_seq_ = Tensor(cache_shape);

  Eigen::MatrixXd h_prev = Eigen::MatrixXd::Zero(n_, h_);
  Eigen::MatrixXd c_prev = Eigen::MatrixXd::Zero(n_, h_);
  Eigen::MatrixXd xt(n_, d_), z(n_, 4 * h_);
  for (int t = 0; t < t_; ++t) {
    for (int n = 0; n < n_; ++n)
      for (int j = 0; j < d_; ++j) xt(n, j) = x.at3(n, t, j);
    z.noalias() = xt * W.transpose() + h_prev * U.transpose();
    z.rowwise() += b.transpose();
    for (int n = 0; n < n_; ++n)
      for (int j = 0; j < h_; ++j) {
        const double gi = sigmoid(z(n, j));
        const double gf = sigmoid(z(n, h_ + j));
        const double gg = std::tanh(z(n, 2 * h_ + j));
        const double go = sigmoid(z(n, 3 * h_ + j));
        const double c = gf * c_prev(n, j) + gi * gg;
        const double tc = std::tanh(c);
        const double h = go * tc;
        gate_i_.at3(n, t, j) = gi;
        gate_f_.at3(n, t, j) = gf;
        gate_g_.at3(n, t, j) = gg;
        gate_o_.at3(n, t, j) = go;
        cell_.at3(n, t, j) = c;
        tanh_cell_.at3(n, t, j) = tc;
        hidden_seq_.at3(n, t, j) = h;
        c_prev(n, j) = c;
        h_prev(n, j) = h;
      }
  }
  return hidden_seq_;
}

Tensor LSTMLayer::backward(const Tensor& grad_out, const double* p,
                           double* grad_p) {
  if (grad_out.rank() != 3 || grad_out.dim(0) != n_ || grad_out.dim(1) != t_ ||
      grad_out.dim(2) != h_)
    throw DataError("lstm backward: gradient shape mismatch");

  ConstRowMajorMap W(p, 4 * h_, d_);
  ConstRowMajorMap U(p + 4 * h_ * d_, 4 * h_, h_);
  RowMajorMap gW(grad_p, 4 * h_, d_);
  RowMajorMap gU(grad_p + 4 * h_ * d_, 4 * h_, h_);
  Eigen::Map<Eigen::VectorXd> gB(grad_p + 4 * h_ * d_ + 4 * h_ * h_, 4 * h_);

  Tensor grad_x({n_, t_, d_});
  Eigen::MatrixXd dh_next = Eigen::MatrixXd::Zero(n_, h_);
  Eigen::MatrixXd dc_next = Eigen::MatrixXd::Zero(n_, h_);
  Eigen::MatrixXd dz(n_, 4 * h_), xt(n_, d_), h_prev(n_, h_), dxt(n_, d_);
  for (int t = t_ - 1; t >= 0; --t) {
    for (int n = 0; n < n_; ++n)
      for (int j = 0; j < d_; ++j) xt(n, j) = x_.at3(n, t, j);
    for (int n = 0; n < n_; ++n)
      for (int j = 0; j < h_; ++j)
        h_prev(n, j) = t > 0 ? hidden_seq_.at3(n, t - 1, j) : 0.0;

    for (int n = 0; n < n_; ++n)
      for (int j = 0; j < h_; ++j) {
        const double dh = grad_out.at3(n, t, j) + dh_next(n, j);
        const double go = gate_o_.at3(n, t, j);
        const double tc = tanh_cell_.at3(n, t, j);
        const double dc = dh * go * (1.0 - tc * tc) + dc_next(n, j);
        const double gi = gate_i_.at3(n, t, j);
        const double gf = gate_f_.at3(n, t, j);
        const double gg = gate_g_.at3(n, t, j);
        const double c_prev = t > 0 ? cell_.at3(n, t - 1, j) : 0.0;
        const double d_go = dh * tc;
        const double d_gi = dc * gg;
        const double d_gf = dc * c_prev;
        const double d_gg = dc * gi;
        dz(n, j) = d_gi * gi * (1.0 - gi);
        dz(n, h_ + j) = d_gf * gf * (1.0 - gf);
        dz(n, 2 * h_ + j) = d_gg * (1.0 - gg * gg);
        dz(n, 3 * h_ + j) = d_go * go * (1.0 - go);
        dc_next(n, j) = dc * gf;
      }

    gW.noalias() += dz.transpose() * xt;
    gU.noalias() += dz.transpose() * h_prev;
    gB.noalias() += dz.colwise().sum().transpose();
    dxt.noalias() = dz * W;
    dh_next.noalias() = dz * U;
    for (int n = 0; n < n_; ++n)
      for (int j = 0; j < d_; ++j) grad_x.at3(n, t, j) = dxt(n, j);
  }
  return grad_x;
}

// ---------------------------------------------------------------------------
// SoftmaxXent

double SoftmaxXent::forward(const Tensor& logits,
                            const std::vector<int>& targets) {
  if (logits.rank() != 2) throw DataError("softmax: expected {N, K} logits");
  const int n = logits.dim(0);
  const int k = logits.dim(1);
  if (targets.size() != std::size_t(n))
    throw DataError("softmax: target count mismatch");
  probs.resize(n, k);
  double loss = 0.0;
  for (int i = 0; i < n; ++i) {
    if (targets[std::size_t(i)] < 0 || targets[std::size_t(i)] >= k)
      throw DataError("softmax: target class out of range");
    double mx = logits.at2(i, 0);
    for (int j = 1; j < k; ++j) mx = std::max(mx, logits.at2(i, j));
    double denom = 0.0;
    for (int j = 0; j < k; ++j) denom += std::exp(logits.at2(i, j) - mx);
    for (int j = 0; j < k; ++j)
      probs(i, j) = std::exp(logits.at2(i, j) - mx) / denom;
    loss -= (logits.at2(i, targets[std::size_t(i)]) - mx) - std::log(denom);
  }
  return loss / double(n);
}

Tensor SoftmaxXent::backward(const std::vector<int>& targets) const {
  const int n = int(probs.rows());
  const int k = int(probs.cols());
  Tensor grad({n, k});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j)
      grad.at2(i, j) =
          (probs(i, j) - (targets[std::size_t(i)] == j ? 1.0 : 0.0)) /
          double(n);
  return grad;
}

}  // namespace edd
