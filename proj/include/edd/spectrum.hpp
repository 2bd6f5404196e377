#pragma once

#include <array>
#include <complex>
#include <vector>

#include "edd/bands.hpp"
#include "edd/common.hpp"

namespace edd {

inline constexpr int kFrameLen = 256;             // 2 s at 128 Hz
inline constexpr int kFrameStride = 32;           // 0.25 s at 128 Hz
inline constexpr int kNumBins = kFrameLen / 2 + 1;
inline constexpr double kBinHz = 0.5;             // fs / N

enum class WindowFn { Rect, Hann };

// One-sided power spectrum of a 256-sample frame: P_k = |X_k|^2 / N^2 at
// bin frequencies k * 0.5 Hz, k = 0..128.
struct PowerSpectrum {
  std::array<double, kNumBins> bins{};

  static constexpr double bin_frequency(int k) { return k * kBinHz; }
};

// In-place iterative radix-2 Cooley-Tukey DFT; size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& data);

PowerSpectrum power_spectrum(const std::vector<double>& frame,
                             WindowFn window = WindowFn::Rect);

struct BandFeatures {
  double avg_power = 0.0;
  double peak_power = 0.0;
  double peak_freq = 0.0;
};

// Mean/max/argmax over the bins whose center frequency lies in [lo, hi).
// Ties break toward the lowest frequency; an all-zero band reports the
// band's lower edge as its peak frequency.
BandFeatures band_features(const PowerSpectrum& spectrum,
                           const BandDefinition& band);

}  // namespace edd
