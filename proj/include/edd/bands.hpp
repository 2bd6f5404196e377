#pragma once

#include <array>
#include <string>
#include <vector>

#include "edd/common.hpp"

namespace edd {

inline constexpr int kNumBands = 5;
inline constexpr int kNumMainBands = 3;  // low-beta, high-beta, gamma

// Half-open frequency band [lo, hi); a spectrum bin belongs to the band
// whose interval contains its center frequency.
struct BandDefinition {
  std::string name;
  double lo = 0.0;  // Hz, inclusive
  double hi = 0.0;  // Hz, exclusive
};

using BandTable = std::array<BandDefinition, kNumBands>;

// theta/alpha/low-beta/high-beta/gamma. The edges follow the headset
// vendor's conventional bands clipped to the 4-40 Hz analysis range; the
// gamma edge of 40.5 keeps the 40.0 Hz bin inside the tiling.
BandTable default_band_table();

// Indices into the band table of the three main processing bands.
std::array<int, kNumMainBands> main_band_indices(const BandTable& bands);

// Bands must tile [4, 40.5) contiguously without overlap.
void validate_band_table(const BandTable& bands);

}  // namespace edd
