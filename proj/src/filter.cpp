#include "edd/filter.hpp"

#include <cmath>

namespace edd {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

void check_cutoffs(double lo, double hi, double fs) {
  if (!(lo > 0.0 && lo < hi && hi < fs / 2.0))
    throw ConfigError("band-pass cutoffs must satisfy 0 < lo < hi < fs/2");
}

}  // namespace

Biquad butterworth_lowpass(double cutoff_hz, double fs_hz) {
  if (!(cutoff_hz > 0.0 && cutoff_hz < fs_hz / 2.0))
    throw ConfigError("low-pass cutoff must lie in (0, fs/2)");
  const double k = std::tan(M_PI * cutoff_hz / fs_hz);
  const double norm = 1.0 / (1.0 + kSqrt2 * k + k * k);
  Biquad q;
  q.b0 = k * k * norm;
  q.b1 = 2.0 * q.b0;
  q.b2 = q.b0;
  q.a1 = 2.0 * (k * k - 1.0) * norm;
  q.a2 = (1.0 - kSqrt2 * k + k * k) * norm;
  return q;
}

Biquad butterworth_highpass(double cutoff_hz, double fs_hz) {
  if (!(cutoff_hz > 0.0 && cutoff_hz < fs_hz / 2.0))
    throw ConfigError("high-pass cutoff must lie in (0, fs/2)");
  const double k = std::tan(M_PI * cutoff_hz / fs_hz);
  const double norm = 1.0 / (1.0 + kSqrt2 * k + k * k);
  Biquad q;
  q.b0 = norm;
  q.b1 = -2.0 * norm;
  q.b2 = norm;
  q.a1 = 2.0 * (k * k - 1.0) * norm;
  q.a2 = (1.0 - kSqrt2 * k + k * k) * norm;
  return q;
}

BandpassFilter::BandpassFilter(double lo_hz, double hi_hz, double fs_hz) {
  check_cutoffs(lo_hz, hi_hz, fs_hz);
  highpass = butterworth_highpass(lo_hz, fs_hz);
  lowpass = butterworth_lowpass(hi_hz, fs_hz);
}

std::vector<double> bandpass_filter(const std::vector<double>& signal,
                                    double lo_hz, double hi_hz, double fs_hz) {
  BandpassFilter f(lo_hz, hi_hz, fs_hz);
  std::vector<double> out(signal.size());
  for (std::size_t i = 0; i < signal.size(); ++i) out[i] = f.step(signal[i]);
  return out;
}

}  // namespace edd
