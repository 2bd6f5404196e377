#pragma once

#include <array>
#include <string>
#include <vector>

#include "edd/common.hpp"

namespace edd {

inline constexpr int kNumChannels = 14;
inline constexpr int kNumRegions = 7;

// Electrode montage of the 14-channel headset plus the seven scalp regions
// used for the accumulated-power features. Region membership follows 10-20
// placement: odd suffixes are left hemisphere, even suffixes right.
struct ChannelLayout {
  std::array<std::string, kNumChannels> names;
  std::array<std::string, kNumRegions> region_names;
  std::array<std::vector<int>, kNumRegions> regions;

  static const ChannelLayout& standard();

  int channel_index(const std::string& name) const;
  void validate() const;
};

}  // namespace edd
