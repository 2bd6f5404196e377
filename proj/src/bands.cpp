#include "edd/bands.hpp"

namespace edd {

BandTable default_band_table() {
  return BandTable{{{"theta", 4.0, 8.0},
                    {"alpha", 8.0, 12.0},
                    {"low-beta", 12.0, 16.0},
                    {"high-beta", 16.0, 25.0},
                    {"gamma", 25.0, 40.5}}};
}

std::array<int, kNumMainBands> main_band_indices(const BandTable& bands) {
  std::array<int, kNumMainBands> idx{-1, -1, -1};
  for (int i = 0; i < kNumBands; ++i) {
    if (bands[i].name == "low-beta") idx[0] = i;
    if (bands[i].name == "high-beta") idx[1] = i;
    if (bands[i].name == "gamma") idx[2] = i;
  }
  for (int i : idx) {
    if (i < 0)
      throw ConfigError(
          "band table must contain low-beta, high-beta and gamma");
  }
  return idx;
}

void validate_band_table(const BandTable& bands) {
  double prev_hi = 4.0;
  for (const auto& b : bands) {
    if (!(b.lo >= 4.0 && b.lo < b.hi && b.hi <= 40.5))
      throw ConfigError("band " + b.name + ": edges must satisfy 4 <= lo < hi <= 40.5");
    if (b.lo != prev_hi)
      throw ConfigError("band " + b.name + ": bands must tile [4, 40.5) contiguously");
    prev_hi = b.hi;
  }
  if (!(prev_hi > 40.0))
    throw ConfigError("band table must extend past 40 Hz to cover the 40 Hz bin");
  main_band_indices(bands);
}

}  // namespace edd
