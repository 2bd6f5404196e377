#pragma once

#include <vector>

#include "edd/common.hpp"

namespace edd {

// Second-order IIR section, direct form II transposed, zero initial state.
struct Biquad {
  double b0 = 0, b1 = 0, b2 = 0;  // feedforward
  double a1 = 0, a2 = 0;          // feedback (a0 normalized to 1)
  double z1 = 0, z2 = 0;

  double step(double x) {
    const double y = b0 * x + z1;
    z1 = b1 * x - a1 * y + z2;
    z2 = b2 * x - a2 * y;
    return y;
  }

  void reset() { z1 = z2 = 0; }
};

// 2nd-order Butterworth designs via bilinear transform with prewarping.
Biquad butterworth_lowpass(double cutoff_hz, double fs_hz);
Biquad butterworth_highpass(double cutoff_hz, double fs_hz);

// Causal band-pass: high-pass at lo cascaded with low-pass at hi. Streaming
// and batch paths share this state machine so their outputs are identical.
struct BandpassFilter {
  Biquad highpass;
  Biquad lowpass;

  BandpassFilter(double lo_hz, double hi_hz, double fs_hz);

  double step(double x) { return lowpass.step(highpass.step(x)); }
  void reset() {
    highpass.reset();
    lowpass.reset();
  }
};

// Filters a whole channel, output length equals input length.
std::vector<double> bandpass_filter(const std::vector<double>& signal,
                                    double lo_hz, double hi_hz, double fs_hz);

}  // namespace edd
