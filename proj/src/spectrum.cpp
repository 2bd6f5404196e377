#include "edd/spectrum.hpp"

#include <cmath>

namespace edd {

void fft_radix2(std::vector<std::complex<double>>& data) {
  const std::size_t n = data.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw DataError("fft_radix2: length must be a power of two");

  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * M_PI / double(len);
    const std::complex<double> wlen(std::cos(angle), std::sin(angle));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> u = data[i + j];
        const std::complex<double> v = data[i + j + len / 2] * w;
        data[i + j] = u + v;
        data[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

PowerSpectrum power_spectrum(const std::vector<double>& frame, WindowFn window) {
  if (frame.size() != kFrameLen)
    throw DataError("power_spectrum: frame length must be 256, got " +
                    std::to_string(frame.size()));

  std::vector<std::complex<double>> x(kFrameLen);
  if (window == WindowFn::Rect) {
    for (int i = 0; i < kFrameLen; ++i) x[i] = frame[std::size_t(i)];
  } else {
    for (int i = 0; i < kFrameLen; ++i) {
      const double w =
          0.5 * (1.0 - std::cos(2.0 * M_PI * i / double(kFrameLen - 1)));
      x[i] = frame[std::size_t(i)] * w;
    }
  }
  fft_radix2(x);

  PowerSpectrum spec;
  const double n2 = double(kFrameLen) * double(kFrameLen);
  for (int k = 0; k < kNumBins; ++k) spec.bins[k] = std::norm(x[k]) / n2;
  return spec;
}

BandFeatures band_features(const PowerSpectrum& spectrum,
                           const BandDefinition& band) {
  double sum = 0.0;
  double peak = -1.0;
  int peak_bin = -1;
  int count = 0;
  for (int k = 0; k < kNumBins; ++k) {
    const double f = PowerSpectrum::bin_frequency(k);
    if (f < band.lo || f >= band.hi) continue;
    const double p = spectrum.bins[k];
    sum += p;
    ++count;
    if (p > peak) {  // strict: ties keep the lowest-frequency bin
      peak = p;
      peak_bin = k;
    }
  }
  if (count == 0)
    throw ConfigError("band " + band.name + " contains no spectrum bins");

  BandFeatures out;
  out.avg_power = sum / double(count);
  out.peak_power = peak;
  out.peak_freq = peak == 0.0 ? band.lo : PowerSpectrum::bin_frequency(peak_bin);
  return out;
}

}  // namespace edd
