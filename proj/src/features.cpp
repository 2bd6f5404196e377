#include "edd/features.hpp"

#include <fstream>

#include "edd/filter.hpp"
#include "edd/labels.hpp"
#include "edd/text.hpp"

namespace edd {

std::array<double, kRegionalFeatures + kMainBandFeatures> regional_aggregate(
    const std::array<std::array<double, kNumBands>, kNumChannels>&
        channel_band_avg,
    const ChannelLayout& layout, const BandTable& bands) {
  std::array<double, kRegionalFeatures + kMainBandFeatures> out{};
  double region_band[kNumRegions][kNumBands];
  for (int r = 0; r < kNumRegions; ++r) {
    for (int b = 0; b < kNumBands; ++b) {
      double sum = 0.0;
      for (int ch : layout.regions[std::size_t(r)])
        sum += channel_band_avg[std::size_t(ch)][std::size_t(b)];
      region_band[r][b] = sum;
      out[std::size_t(r * kNumBands + b)] = sum;
    }
  }
  const auto main_idx = main_band_indices(bands);
  for (int r = 0; r < kNumRegions; ++r)
    for (int m = 0; m < kNumMainBands; ++m)
      out[std::size_t(kRegionalFeatures + r * kNumMainBands + m)] =
          region_band[r][main_idx[std::size_t(m)]];
  return out;
}

namespace {

int majority_task(const std::vector<int>& tasks, std::size_t begin,
                  std::size_t end) {
  std::array<int, kNumTasks> counts{};
  for (std::size_t i = begin; i < end; ++i) ++counts[std::size_t(tasks[i])];
  int best = 0;
  for (int t = 1; t < kNumTasks; ++t)
    if (counts[std::size_t(t)] > counts[std::size_t(best)]) best = t;
  // A tie means a task transition inside the frame; the most recent task wins.
  const int last = tasks[end - 1];
  if (counts[std::size_t(last)] == counts[std::size_t(best)]) return last;
  return best;
}

}  // namespace

FeatureSeries extract_feature_series(const RawSession& session,
                                     const BandTable& bands,
                                     const ChannelLayout& layout,
                                     double filter_lo_hz, double filter_hi_hz,
                                     WindowFn window) {
  session.validate();
  validate_band_table(bands);
  const std::size_t total = std::size_t(session.num_samples());
  if (total < kFrameLen) throw DataError("session too short");

  // One causal filter pass per channel; frames read from the filtered signal.
  std::vector<std::vector<double>> filtered(kNumChannels);
  for (int ch = 0; ch < kNumChannels; ++ch) {
    BandpassFilter f(filter_lo_hz, filter_hi_hz, session.sample_rate);
    auto& out = filtered[std::size_t(ch)];
    out.resize(total);
    for (std::size_t i = 0; i < total; ++i)
      out[i] = f.step(session.samples(Eigen::Index(i), ch));
  }

  const std::size_t n_frames = feature_frame_count(total);
  FeatureSeries series;
  series.participant_id = session.participant_id;
  series.frames.resize(n_frames);

  std::array<const double*, kNumChannels> slab{};
  for (std::size_t fi = 0; fi < n_frames; ++fi) {
    const std::size_t off = fi * kFrameStride;
    FeatureFrame& ff = series.frames[fi];
    ff.t = double(off) / session.sample_rate;
    ff.task = majority_task(session.tasks, off, off + kFrameLen);
    for (int ch = 0; ch < kNumChannels; ++ch)
      slab[std::size_t(ch)] = filtered[std::size_t(ch)].data() + off;
    ff.values = compute_frame_features(slab, bands, layout, window);
  }
  return series;
}

std::array<double, kFeatureDim> compute_frame_features(
    const std::array<const double*, kNumChannels>& channel_frames,
    const BandTable& bands, const ChannelLayout& layout, WindowFn window) {
  std::array<double, kFeatureDim> values{};
  std::vector<double> frame(kFrameLen);
  std::array<std::array<double, kNumBands>, kNumChannels> avg{};
  for (int ch = 0; ch < kNumChannels; ++ch) {
    const double* sig = channel_frames[std::size_t(ch)];
    for (int i = 0; i < kFrameLen; ++i) frame[std::size_t(i)] = sig[i];
    const PowerSpectrum spec = power_spectrum(frame, window);
    for (int b = 0; b < kNumBands; ++b) {
      const BandFeatures bf = band_features(spec, bands[std::size_t(b)]);
      const int base = ch * kNumBands * 3 + b * 3;
      values[std::size_t(base + 0)] = bf.avg_power;
      values[std::size_t(base + 1)] = bf.peak_power;
      values[std::size_t(base + 2)] = bf.peak_freq;
      avg[std::size_t(ch)][std::size_t(b)] = bf.avg_power;
    }
  }
  const auto regional = regional_aggregate(avg, layout, bands);
  for (int i = 0; i < kRegionalFeatures + kMainBandFeatures; ++i)
    values[std::size_t(kPerChannelFeatures + i)] = regional[std::size_t(i)];
  return values;
}

void save_feature_csv(const FeatureSeries& series, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << "t";
  for (int i = 0; i < kFeatureDim; ++i) {
    char col[8];
    std::snprintf(col, sizeof(col), ",f%03d", i);
    out << col;
  }
  out << ",task\n";
  std::string line;
  for (const auto& f : series.frames) {
    line = format_double(f.t);
    for (double v : f.values) {
      line += ',';
      line += format_double(v);
    }
    line += ',';
    line += std::to_string(f.task);
    line += '\n';
    out << line;
  }
  if (!out) throw DataError("write failed: " + path);
}

FeatureSeries load_feature_csv(const std::string& path,
                               ParticipantId participant_id) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");

  FeatureSeries series;
  series.participant_id = participant_id;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string ctx = path + ":" + std::to_string(lineno);
    FeatureFrame f;
    std::size_t pos = 0;
    int field = 0;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      const std::string tok = line.substr(pos, comma - pos);
      if (field == 0) {
        f.t = parse_double(tok, ctx);
      } else if (field <= kFeatureDim) {
        f.values[std::size_t(field - 1)] = parse_double(tok, ctx);
      } else if (field == kFeatureDim + 1) {
        f.task = static_cast<int>(parse_long(tok, ctx));
      } else {
        throw DataError(ctx + ": too many columns");
      }
      ++field;
      pos = comma + 1;
      if (comma == line.size()) break;
    }
    if (field != kFeatureDim + 2)
      throw DataError(ctx + ": expected " + std::to_string(kFeatureDim + 2) +
                      " columns, got " + std::to_string(field));
    series.frames.push_back(f);
  }
  return series;
}

std::vector<FeatureMapRow> feature_map(const ChannelLayout& layout,
                                       const BandTable& bands) {
  std::vector<FeatureMapRow> rows;
  rows.reserve(kFeatureDim);
  const char* stats[3] = {"avg_power", "peak_power", "peak_freq"};
  int idx = 0;
  for (int ch = 0; ch < kNumChannels; ++ch)
    for (int b = 0; b < kNumBands; ++b)
      for (int s = 0; s < 3; ++s)
        rows.push_back({idx++, "channel", layout.names[std::size_t(ch)],
                        bands[std::size_t(b)].name, stats[s]});
  for (int r = 0; r < kNumRegions; ++r)
    for (int b = 0; b < kNumBands; ++b)
      rows.push_back({idx++, "region", layout.region_names[std::size_t(r)],
                      bands[std::size_t(b)].name, "acc_power"});
  const auto main_idx = main_band_indices(bands);
  for (int r = 0; r < kNumRegions; ++r)
    for (int m = 0; m < kNumMainBands; ++m)
      rows.push_back({idx++, "region", layout.region_names[std::size_t(r)],
                      bands[std::size_t(main_idx[std::size_t(m)])].name,
                      "main_acc_power"});
  return rows;
}

void save_feature_map_csv(const std::string& path) {
  const auto rows = feature_map(ChannelLayout::standard(), default_band_table());
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << "index,kind,source,band,statistic\n";
  for (const auto& r : rows)
    out << r.index << ',' << r.kind << ',' << r.source << ',' << r.band << ','
        << r.statistic << "\n";
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace edd
