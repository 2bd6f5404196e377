#include "edd/channels.hpp"

#include <algorithm>

namespace edd {

const ChannelLayout& ChannelLayout::standard() {
  static const ChannelLayout layout = [] {
    ChannelLayout l;
    l.names = {"AF3", "F7", "F3", "FC5", "T7",  "P7", "O1",
               "O2",  "P8", "T8", "FC6", "F4",  "F8", "AF4"};
    l.region_names = {"left-frontal",
                      "right-frontal",
                      "left-hemisphere",
                      "right-hemisphere",
                      "left-temporal-parietal",
                      "right-temporal-parietal",
                      "occipital"};
    l.regions[0] = {0, 1, 2, 3};                // AF3 F7 F3 FC5
    l.regions[1] = {10, 11, 12, 13};            // FC6 F4 F8 AF4
    l.regions[2] = {0, 1, 2, 3, 4, 5, 6};       // left of midline
    l.regions[3] = {7, 8, 9, 10, 11, 12, 13};   // right of midline
    l.regions[4] = {4, 5};                      // T7 P7
    l.regions[5] = {8, 9};                      // P8 T8
    l.regions[6] = {6, 7};                      // O1 O2
    l.validate();
    return l;
  }();
  return layout;
}

int ChannelLayout::channel_index(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw DataError("unknown channel: " + name);
  return static_cast<int>(it - names.begin());
}

void ChannelLayout::validate() const {
  for (const auto& region : regions) {
    if (region.empty()) throw DataError("channel layout: empty region");
    for (int idx : region) {
      if (idx < 0 || idx >= kNumChannels)
        throw DataError("channel layout: region index out of range");
    }
  }
}

}  // namespace edd
