#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "edd/ridge.hpp"
#include "edd/segmentation.hpp"

namespace edd {

// One random convolutional kernel applied to a multivariate series. The 266
// feature dimensions act as channels; each kernel reads a random subset of
// them and sums per-channel responses inside the convolution.
struct RocketKernel {
  int length = 0;                         // 7, 9 or 11 taps
  std::vector<int> channel_indices;       // sorted, sampled without replacement
  std::vector<double> weights;            // channel-major, channels x length,
                                          // mean-centered over the whole kernel
  double bias = 0.0;                      // uniform on [-1, 1]
  int dilation = 1;                       // floor(2^x), keeps the receptive
                                          // field within the window
  bool padding = false;                   // zero-pad (length-1)*dilation/2

  double weight(int channel_slot, int tap) const {
    return weights[static_cast<std::size_t>(channel_slot) *
                       static_cast<std::size_t>(length) +
                   static_cast<std::size_t>(tap)];
  }
};

// Draws `count` kernels with a fixed per-kernel draw order (length, channel
// count, channel indices, weights, bias, dilation, padding) so the list is
// reproducible from the seed alone.
std::vector<RocketKernel> rocket_generate(int count, int input_len,
                                          int channels, std::uint64_t seed);

// Applies every kernel to every window and emits (PPV, max) per kernel:
// column 2k is the fraction of convolution outputs > 0, column 2k+1 the
// largest output. Each (window, kernel) pair writes to its own pre-assigned
// slot, so any future parallel fill stays bit-identical to the serial one.
Eigen::MatrixXd rocket_transform(const std::vector<Window>& windows,
                                 const std::vector<RocketKernel>& kernels);

// Kernels plus the ridge classifier fitted on their transform.
struct RocketModel {
  std::uint64_t seed = 0;
  int input_len = 0;
  int channels = 0;
  std::vector<RocketKernel> kernels;
  RidgeModel ridge;

  State predict(const Window& window) const;
  double score(const Window& window) const;
};

void save_rocket_model(const RocketModel& model, const std::string& path);
RocketModel load_rocket_model(const std::string& path);

}  // namespace edd
