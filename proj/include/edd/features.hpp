#pragma once

#include <array>
#include <string>
#include <vector>

#include "edd/bands.hpp"
#include "edd/channels.hpp"
#include "edd/common.hpp"
#include "edd/session.hpp"
#include "edd/spectrum.hpp"

namespace edd {

inline constexpr int kPerChannelFeatures = kNumChannels * kNumBands * 3;  // 210
inline constexpr int kRegionalFeatures = kNumRegions * kNumBands;         // 35
inline constexpr int kMainBandFeatures = kNumRegions * kNumMainBands;     // 21
inline constexpr int kFeatureDim =
    kPerChannelFeatures + kRegionalFeatures + kMainBandFeatures;          // 266

// Feature vector layout:
//   [ch*15 + band*3 + {avg,peak,freq}]          per-channel block (210)
//   [210 + region*5 + band]                     regional band sums (35)
//   [245 + region*3 + main_band]                main-band sums (21)
struct FeatureFrame {
  double t = 0.0;  // seconds, time of the raw 2 s window's first sample
  std::array<double, kFeatureDim> values{};
  int task = 0;
};

struct FeatureSeries {
  ParticipantId participant_id = 0;
  std::vector<FeatureFrame> frames;  // 0.25 s apart
};

inline std::size_t feature_frame_count(std::size_t num_samples) {
  return num_samples < kFrameLen
             ? 0
             : (num_samples - kFrameLen) / kFrameStride + 1;
}

// Regional accumulations from the 14x5 per-channel average-power matrix:
// 35 region-by-band sums followed by 21 main-band sums.
std::array<double, kRegionalFeatures + kMainBandFeatures> regional_aggregate(
    const std::array<std::array<double, kNumBands>, kNumChannels>&
        channel_band_avg,
    const ChannelLayout& layout, const BandTable& bands);

// One frame's 266 values from already-filtered samples. channel_frames[ch]
// points at kFrameLen contiguous samples of channel ch. Both the offline
// extractor and the streaming replay call this, so online and offline
// features are identical by construction.
std::array<double, kFeatureDim> compute_frame_features(
    const std::array<const double*, kNumChannels>& channel_frames,
    const BandTable& bands, const ChannelLayout& layout, WindowFn window);

// Full stage-1 transform: band-pass filter each channel once, then slide a
// 2 s frame in 0.25 s steps computing spectra and band features. The frame's
// task label is the majority over its 256 samples, last sample breaking ties.
FeatureSeries extract_feature_series(const RawSession& session,
                                     const BandTable& bands,
                                     const ChannelLayout& layout,
                                     double filter_lo_hz = 4.0,
                                     double filter_hi_hz = 40.0,
                                     WindowFn window = WindowFn::Rect);

// Feature CSV: header `t,f000,...,f265,task`, one row per frame.
void save_feature_csv(const FeatureSeries& series, const std::string& path);
FeatureSeries load_feature_csv(const std::string& path,
                               ParticipantId participant_id);

// index -> (kind, source, band, statistic) rows backing docs/feature_map.csv.
struct FeatureMapRow {
  int index;
  std::string kind;       // "channel" or "region"
  std::string source;     // channel or region name
  std::string band;
  std::string statistic;  // avg_power / peak_power / peak_freq / acc_power
};
std::vector<FeatureMapRow> feature_map(const ChannelLayout& layout,
                                       const BandTable& bands);
void save_feature_map_csv(const std::string& path);

}  // namespace edd
