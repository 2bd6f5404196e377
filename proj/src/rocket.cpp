#include "edd/rocket.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "edd/binio.hpp"
#include "edd/rng.hpp"

namespace edd {

namespace {

// Sorted m-subset of {0..n-1} via a partial Fisher-Yates over the index pool.
std::vector<int> sample_channels(int n, int m, Rng& rng) {
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < m; ++i) {
    const std::uint64_t j = rng.uniform_u64(static_cast<std::uint64_t>(n - i));
    std::swap(pool[std::size_t(i)], pool[std::size_t(i) + std::size_t(j)]);
  }
  pool.resize(static_cast<std::size_t>(m));
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

std::vector<RocketKernel> rocket_generate(int count, int input_len,
                                          int channels, std::uint64_t seed) {
  if (count < 1) throw ConfigError("rocket_generate: count must be >= 1");
  if (input_len < 2) throw ConfigError("rocket_generate: input_len too small");
  if (channels < 1) throw ConfigError("rocket_generate: channels must be >= 1");

  static constexpr int kLengths[3] = {7, 9, 11};
  const int c_max =
      std::bit_width(static_cast<unsigned>(channels)) - 1;  // floor(log2)

  Rng rng(seed);
  std::vector<RocketKernel> kernels;
  kernels.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    RocketKernel kernel;
    kernel.length = kLengths[rng.uniform_int(0, 2)];

    const int c = rng.uniform_int(0, c_max);
    const int m = std::min(1 << c, channels);
    kernel.channel_indices = sample_channels(channels, m, rng);

    kernel.weights.resize(std::size_t(m) * std::size_t(kernel.length));
    for (double& w : kernel.weights) w = rng.normal();
    const double mean =
        std::accumulate(kernel.weights.begin(), kernel.weights.end(), 0.0) /
        static_cast<double>(kernel.weights.size());
    for (double& w : kernel.weights) w -= mean;

    kernel.bias = rng.uniform(-1.0, 1.0);

    const double x_max = std::log2(double(input_len - 1) / (kernel.length - 1));
    const double x = rng.uniform(0.0, x_max);
    kernel.dilation = std::max(1, static_cast<int>(std::exp2(x)));

    kernel.padding = rng.bernoulli();
    kernels.push_back(std::move(kernel));
  }
  return kernels;
}

namespace {

// (PPV, max) of one kernel's dilated convolution over one window.
std::pair<double, double> apply_kernel(const Window& window,
                                       const RocketKernel& kernel) {
  const int span = (kernel.length - 1) * kernel.dilation;
  const int pad = kernel.padding ? span / 2 : 0;
  const int out_len = kWindowLen + 2 * pad - span;
  if (out_len < 1)
    throw DataError("rocket_transform: kernel receptive field exceeds window");

  int positives = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int pos = 0; pos < out_len; ++pos) {
    const int start = pos - pad;
    double sum = kernel.bias;
    for (std::size_t slot = 0; slot < kernel.channel_indices.size(); ++slot) {
      const int ch = kernel.channel_indices[slot];
      for (int j = 0; j < kernel.length; ++j) {
        const int t = start + j * kernel.dilation;
        if (t < 0 || t >= kWindowLen) continue;
        sum += kernel.weight(int(slot), j) * window.at(t, ch);
      }
    }
    if (sum > 0.0) ++positives;
    best = std::max(best, sum);
  }
  return {double(positives) / double(out_len), best};
}

void validate_kernels(const std::vector<RocketKernel>& kernels) {
  for (const RocketKernel& kernel : kernels) {
    if (kernel.channel_indices.empty())
      throw DataError("rocket_transform: kernel with no channels");
    if (kernel.channel_indices.back() >= kFeatureDim ||
        kernel.channel_indices.front() < 0)
      throw DataError("rocket_transform: kernel references channel " +
                      std::to_string(kernel.channel_indices.back()) +
                      " outside 0.." + std::to_string(kFeatureDim - 1));
  }
}

}  // namespace

Eigen::MatrixXd rocket_transform(const std::vector<Window>& windows,
                                 const std::vector<RocketKernel>& kernels) {
  validate_kernels(kernels);
  Eigen::MatrixXd out(Eigen::Index(windows.size()),
                      Eigen::Index(2 * kernels.size()));
  for (std::size_t i = 0; i < windows.size(); ++i) {
    for (std::size_t k = 0; k < kernels.size(); ++k) {
      const auto [ppv, mx] = apply_kernel(windows[i], kernels[k]);
      out(Eigen::Index(i), Eigen::Index(2 * k)) = ppv;
      out(Eigen::Index(i), Eigen::Index(2 * k + 1)) = mx;
    }
  }
  return out;
}

double RocketModel::score(const Window& window) const {
  Eigen::VectorXd z(Eigen::Index(2 * kernels.size()));
  for (std::size_t k = 0; k < kernels.size(); ++k) {
    const auto [ppv, mx] = apply_kernel(window, kernels[k]);
    z[Eigen::Index(2 * k)] = ppv;
    z[Eigen::Index(2 * k + 1)] = mx;
  }
  return ridge.score(z);
}

State RocketModel::predict(const Window& window) const {
  return score(window) >= 0.0 ? State::DISTRACTED : State::FOCUSED;
}

// EDR1 layout (little-endian):
//   magic "EDR1", u32 version=1, u32 K, u64 seed, u32 input_len, u32 channels,
//   K kernel records (u32 length, u32 num_channels, u32 indices[],
//   f64 weights[num_channels*length], f64 bias, u32 dilation, u8 padding),
//   ridge block (u32 dim, f64 means[dim], f64 stds[dim], f64 weights[dim],
//   f64 intercept, f64 lambda).
void save_rocket_model(const RocketModel& model, const std::string& path) {
  BinaryWriter w(path);
  w.magic("EDR1");
  w.u32(1);
  w.u32(static_cast<std::uint32_t>(model.kernels.size()));
  w.u64(model.seed);
  w.u32(static_cast<std::uint32_t>(model.input_len));
  w.u32(static_cast<std::uint32_t>(model.channels));
  for (const RocketKernel& kernel : model.kernels) {
    w.u32(static_cast<std::uint32_t>(kernel.length));
    w.u32(static_cast<std::uint32_t>(kernel.channel_indices.size()));
    for (int ch : kernel.channel_indices)
      w.u32(static_cast<std::uint32_t>(ch));
    w.f64_array(kernel.weights);
    w.f64(kernel.bias);
    w.u32(static_cast<std::uint32_t>(kernel.dilation));
    w.u8(kernel.padding ? 1 : 0);
  }
  const Eigen::Index dim = model.ridge.weights.size();
  w.u32(static_cast<std::uint32_t>(dim));
  w.f64_array(model.ridge.feature_means.data(), std::size_t(dim));
  w.f64_array(model.ridge.feature_stds.data(), std::size_t(dim));
  w.f64_array(model.ridge.weights.data(), std::size_t(dim));
  w.f64(model.ridge.intercept);
  w.f64(model.ridge.lambda);
  w.close();
}

RocketModel load_rocket_model(const std::string& path) {
  BinaryReader r(path);
  r.expect_magic("EDR1");
  const std::uint32_t version = r.u32();
  if (version != 1)
    throw DataError(path + ": unsupported model version " +
                    std::to_string(version));
  RocketModel model;
  const std::uint32_t count = r.u32();
  model.seed = r.u64();
  model.input_len = static_cast<int>(r.u32());
  model.channels = static_cast<int>(r.u32());
  model.kernels.resize(count);
  for (RocketKernel& kernel : model.kernels) {
    kernel.length = static_cast<int>(r.u32());
    const std::uint32_t m = r.u32();
    kernel.channel_indices.resize(m);
    for (int& ch : kernel.channel_indices) ch = static_cast<int>(r.u32());
    kernel.weights = r.f64_vector(std::size_t(m) * std::size_t(kernel.length));
    kernel.bias = r.f64();
    kernel.dilation = static_cast<int>(r.u32());
    kernel.padding = r.u8() != 0;
  }
  const std::uint32_t dim = r.u32();
  model.ridge.feature_means = Eigen::VectorXd(dim);
  model.ridge.feature_stds = Eigen::VectorXd(dim);
  model.ridge.weights = Eigen::VectorXd(dim);
  r.f64_array(model.ridge.feature_means.data(), dim);
  r.f64_array(model.ridge.feature_stds.data(), dim);
  r.f64_array(model.ridge.weights.data(), dim);
  model.ridge.intercept = r.f64();
  model.ridge.lambda = r.f64();
  return model;
}

}  // namespace edd
