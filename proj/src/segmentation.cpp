#include "edd/segmentation.hpp"

#include "edd/binio.hpp"

namespace edd {

SegmentResult segment_series(const FeatureSeries& series, const LabelMap& map,
                             int win, int hop) {
  if (win <= 0 || hop <= 0) throw ConfigError("segment: win and hop must be positive");
  SegmentResult result;
  const std::size_t n_frames = series.frames.size();
  if (n_frames < std::size_t(win)) {
    result.too_short = true;
    return result;
  }
  const std::size_t count = (n_frames - std::size_t(win)) / std::size_t(hop) + 1;
  result.windows.reserve(count);
  for (std::size_t w = 0; w < count; ++w) {
    const std::size_t start = w * std::size_t(hop);
    Window window;
    window.participant_id = series.participant_id;
    window.start_frame = static_cast<std::uint32_t>(start);
    window.values.resize(std::size_t(win) * kFeatureDim);
    int distracted = 0;
    for (int t = 0; t < win; ++t) {
      const FeatureFrame& frame = series.frames[start + std::size_t(t)];
      std::copy(frame.values.begin(), frame.values.end(),
                window.values.begin() + std::size_t(t) * kFeatureDim);
      if (map.state_of(frame.task) == State::DISTRACTED) ++distracted;
    }
    // majority vote; exact tie goes to DISTRACTED (missed distractions cost more)
    window.state = (2 * distracted >= win) ? State::DISTRACTED : State::FOCUSED;
    result.windows.push_back(std::move(window));
  }
  return result;
}

std::vector<WindowSequence> build_sequences(const std::vector<Window>& windows,
                                            std::size_t base_index, int hop) {
  std::vector<WindowSequence> sequences;
  if (windows.size() < kSequenceLen) return sequences;
  for (std::size_t i = 1; i < windows.size(); ++i) {
    if (windows[i].participant_id != windows[0].participant_id)
      throw DataError("build_sequences: windows span multiple participants");
    if (windows[i].start_frame !=
        windows[i - 1].start_frame + std::uint32_t(hop))
      throw DataError("build_sequences: non-uniform hop in window stream");
  }
  sequences.reserve(windows.size() - kSequenceLen + 1);
  for (std::size_t i = kSequenceLen - 1; i < windows.size(); ++i) {
    WindowSequence seq;
    for (int j = 0; j < kSequenceLen; ++j)
      seq.window_indices[std::size_t(j)] =
          static_cast<std::uint32_t>(base_index + i - kSequenceLen + 1 + std::size_t(j));
    seq.state = windows[i].state;
    seq.participant_id = windows[i].participant_id;
    sequences.push_back(seq);
  }
  return sequences;
}

std::vector<WindowSequence> build_sequences_grouped(
    const std::vector<Window>& windows, int hop) {
  std::vector<WindowSequence> all;
  std::size_t begin = 0;
  while (begin < windows.size()) {
    std::size_t end = begin + 1;
    while (end < windows.size() &&
           windows[end].participant_id == windows[begin].participant_id &&
           windows[end].start_frame > windows[end - 1].start_frame)
      ++end;
    const std::vector<Window> group(windows.begin() + std::ptrdiff_t(begin),
                                    windows.begin() + std::ptrdiff_t(end));
    auto seqs = build_sequences(group, begin, hop);
    all.insert(all.end(), seqs.begin(), seqs.end());
    begin = end;
  }
  return all;
}

void save_windows(const std::vector<Window>& windows, const std::string& path) {
  BinaryWriter w(path);
  w.magic("EDW1");
  w.u32(kFeatureDim);
  w.u32(kWindowLen);
  w.u64(windows.size());
  for (const auto& win : windows) {
    if (win.values.size() != std::size_t(kWindowLen) * kFeatureDim)
      throw DataError("save_windows: malformed window payload");
    w.u32(win.participant_id);
    w.u32(win.start_frame);
    w.u8(static_cast<std::uint8_t>(win.state));
    w.f64_array(win.values);
  }
  w.close();
}

std::vector<Window> load_windows(const std::string& path) {
  BinaryReader r(path);
  r.expect_magic("EDW1");
  const std::uint32_t dim = r.u32();
  const std::uint32_t win_len = r.u32();
  if (dim != kFeatureDim || win_len != kWindowLen)
    throw DataError(path + ": unsupported window geometry " +
                    std::to_string(win_len) + "x" + std::to_string(dim));
  const std::uint64_t count = r.u64();
  std::vector<Window> windows(count);
  for (auto& win : windows) {
    win.participant_id = r.u32();
    win.start_frame = r.u32();
    const std::uint8_t s = r.u8();
    if (s > 1) throw DataError(path + ": invalid state byte");
    win.state = static_cast<State>(s);
    win.values = r.f64_vector(std::size_t(kWindowLen) * kFeatureDim);
  }
  return windows;
}

}  // namespace edd
