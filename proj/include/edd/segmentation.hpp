#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "edd/common.hpp"
#include "edd/features.hpp"
#include "edd/labels.hpp"

namespace edd {

inline constexpr int kWindowLen = 40;   // frames per window (11.75 s of signal)
inline constexpr int kWindowHop = 20;   // 50% overlap
inline constexpr int kSequenceLen = 4;  // windows per recurrent sequence

// One weakly-labeled training item: 40 consecutive feature frames with the
// majority state over the window. values is frame-major (t * 266 + f).
struct Window {
  std::vector<double> values;  // kWindowLen * kFeatureDim
  State state = State::FOCUSED;
  ParticipantId participant_id = 0;
  std::uint32_t start_frame = 0;

  double at(int t, int f) const {
    return values[std::size_t(t) * kFeatureDim + std::size_t(f)];
  }
};

// Four consecutive windows at hop 20 from one session, labeled by the last
// window; stored as indices into the owning window list.
struct WindowSequence {
  std::array<std::uint32_t, kSequenceLen> window_indices{};
  State state = State::FOCUSED;
  ParticipantId participant_id = 0;
};

struct SegmentResult {
  std::vector<Window> windows;
  bool too_short = false;  // series had fewer frames than one window
};

// Windows start at frames 0, hop, 2*hop, ...; each is labeled by the
// majority of its per-frame states (task mapped through the label map),
// a 20/20 tie resolving to DISTRACTED.
SegmentResult segment_series(const FeatureSeries& series, const LabelMap& map,
                             int win = kWindowLen, int hop = kWindowHop);

// Emits (i-3, i-2, i-1, i) for every window index i >= 3. Input must be one
// session's windows sorted by start with uniform hop.
std::vector<WindowSequence> build_sequences(const std::vector<Window>& windows,
                                            std::size_t base_index = 0,
                                            int hop = kWindowHop);

// Sequences for a multi-session window list (grouped by participant).
std::vector<WindowSequence> build_sequences_grouped(
    const std::vector<Window>& windows, int hop = kWindowHop);

// Windows file: magic EDW1, little-endian.
void save_windows(const std::vector<Window>& windows, const std::string& path);
std::vector<Window> load_windows(const std::string& path);

}  // namespace edd
