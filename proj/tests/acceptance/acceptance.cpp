// Acceptance gate for the pipeline. Each release criterion is one check that
// prints a single [PASS]/[FAIL] line with the measured values next to the
// pinned bounds; the process exits nonzero if any check fails.
//
// Usage: edd_acceptance <path-to-edd-cli>
//
// The end-to-end checks drive the real CLI binary; everything else exercises
// the library in-process against independent oracles (naive DFT, brute-force
// scans, finite differences) so a regression cannot hide behind shared code.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "../helpers.hpp"
#include "edd/experiment.hpp"
#include "edd/features.hpp"
#include "edd/filter.hpp"
#include "edd/model.hpp"
#include "edd/nn1.hpp"
#include "edd/ridge.hpp"
#include "edd/rng.hpp"
#include "edd/rocket.hpp"
#include "edd/segmentation.hpp"
#include "edd/session.hpp"
#include "edd/spectrum.hpp"
#include "edd/text.hpp"
#include "edd/train.hpp"

namespace fs = std::filesystem;
using namespace edd;

namespace {

// ---------------------------------------------------------------- harness --

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string g_cli;        // path to the edd binary (argv[1])
std::string g_repo;       // source tree, for configs/desk.cfg
fs::path g_work;          // scratch directory for all artifacts
fs::path g_desk_a;        // first desk-profile run
fs::path g_desk_b;        // second desk-profile run (determinism)
bool g_desk_ok = false;   // set once the first desk run succeeded
double g_desk_seconds = 0.0;

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd =
      g_cli + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1) throw std::runtime_error("system() failed");
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, ',')) fields.push_back(item);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

// ----------------------------------------------------- independent oracles --

std::vector<std::complex<double>> naive_dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t t = 0; t < n; ++t) {
      const double angle = -2.0 * M_PI * double(k) * double(t) / double(n);
      acc += x[t] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    out[k] = acc;
  }
  return out;
}

std::array<double, kNumBins> naive_power(const std::vector<double>& x) {
  const auto spectrum = naive_dft(x);
  const double n = double(x.size());
  std::array<double, kNumBins> bins{};
  for (int k = 0; k < kNumBins; ++k)
    bins[std::size_t(k)] = std::norm(spectrum[std::size_t(k)]) / (n * n);
  return bins;
}

// Steady-state sinusoid gain of the pipeline's 4-40 Hz filter: drive for
// 40 s, discard 20 s of transient, then project onto the in-phase and
// quadrature components.
double filter_gain_db(double freq_hz) {
  const double fs = kSampleRate;
  const int total = int(40.0 * fs);
  const int settle = int(20.0 * fs);
  BandpassFilter filter(4.0, 40.0, fs);
  double ys = 0.0, yc = 0.0, ss = 0.0, cc = 0.0;
  for (int n = 0; n < total; ++n) {
    const double phase = 2.0 * M_PI * freq_hz * double(n) / fs;
    const double s = std::sin(phase);
    const double c = std::cos(phase);
    const double y = filter.step(s);
    if (n < settle) continue;
    ys += y * s;
    yc += y * c;
    ss += s * s;
    cc += c * c;
  }
  const double amp = std::hypot(ys / ss, yc / cc);
  return 20.0 * std::log10(amp);
}

State brute_force_nn1(const std::vector<Window>& train, const Window& query) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < train.size(); ++i) {
    double d = 0.0;
    for (std::size_t v = 0; v < query.values.size(); ++v) {
      const double diff = train[i].values[v] - query.values[v];
      d += diff * diff;
    }
    if (d < best) {
      best = d;
      best_i = i;
    }
  }
  return train[best_i].state;
}

// ------------------------------------------------------------ toy fixtures --

ModelSpec toy_spec(ModelKind kind) {
  ModelSpec spec;
  spec.kind = kind;
  spec.input_channels = 5;
  spec.input_len = 16;
  spec.sequence_len = 2;
  spec.conv_filters = {8, 10, 8};
  spec.conv_kernels = {8, 5, 3};
  spec.res_filters = {6, 8, 8};
  spec.lstm_hidden = 6;
  if (kind == ModelKind::FCN_LSTM) spec.conv_filters = {6, 8, 6};
  return spec;
}

// Linearly separable toy items: class 1 gets a +2 bump on channel 0.
MemoryBatchSource toy_source(const ModelSpec& spec, int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Tensor> items;
  std::vector<int> targets;
  const bool seq = spec.kind == ModelKind::FCN_LSTM;
  for (int i = 0; i < n; ++i) {
    const int target = i % 2;
    Tensor item(seq ? std::vector<int>{spec.sequence_len, spec.input_channels,
                                       spec.input_len}
                    : std::vector<int>{spec.input_channels, spec.input_len});
    for (double& v : item.data) v = rng.normal();
    const std::size_t stride =
        std::size_t(spec.input_channels) * std::size_t(spec.input_len);
    for (std::size_t off = 0; off < item.data.size(); off += stride)
      for (int t = 0; t < spec.input_len && target == 1; ++t)
        item.data[off + std::size_t(t)] += 2.0;
    items.push_back(std::move(item));
    targets.push_back(target);
  }
  return MemoryBatchSource(std::move(items), std::move(targets));
}

Tensor random_input(const ModelSpec& spec, int n, std::uint64_t seed) {
  Rng rng(seed);
  Tensor x(spec.kind == ModelKind::FCN_LSTM
               ? std::vector<int>{n, spec.sequence_len, spec.input_channels,
                                  spec.input_len}
               : std::vector<int>{n, spec.input_channels, spec.input_len});
  for (double& v : x.data) v = rng.normal();
  return x;
}

// --------------------------------------------------------------- criteria --

// Criterion 1: power_spectrum equals a naive O(N^2) DFT on random frames and
// satisfies Parseval's identity. Bounds: 1e-9 relative, < 5 s.
Outcome check_spectral_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(2026);
  double worst_rel = 0.0;
  double worst_parseval = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> frame(kFrameLen);
    for (double& v : frame) v = 30.0 * rng.normal();
    const PowerSpectrum spectrum = power_spectrum(frame);
    const auto oracle = naive_power(frame);
    double scale = 1.0;
    for (double b : oracle) scale = std::max(scale, std::abs(b));
    for (int k = 0; k < kNumBins; ++k)
      worst_rel = std::max(worst_rel,
                           std::abs(spectrum.bins[std::size_t(k)] -
                                    oracle[std::size_t(k)]) /
                               scale);
    double mean_sq = 0.0;
    for (double v : frame) mean_sq += v * v;
    mean_sq /= double(kFrameLen);
    double total = spectrum.bins[0] + spectrum.bins[kNumBins - 1];
    for (int k = 1; k < kNumBins - 1; ++k)
      total += 2.0 * spectrum.bins[std::size_t(k)];
    worst_parseval =
        std::max(worst_parseval, std::abs(total - mean_sq) / mean_sq);
  }
  const double elapsed = seconds_since(t0);
  const bool pass =
      worst_rel <= 1e-9 && worst_parseval <= 1e-9 && elapsed < 5.0;
  return {pass, fmt("max DFT err %.2e, parseval err %.2e (bound 1e-9), %.1f s "
                    "(bound 5 s)",
                    worst_rel, worst_parseval, elapsed)};
}

// Criterion 2: frequency response of the 4-40 Hz filter at the pinned probes.
Outcome check_filter_response() {
  const auto t0 = std::chrono::steady_clock::now();
  const double g10 = filter_gain_db(10.0);
  const double g20 = filter_gain_db(20.0);
  const double g1 = filter_gain_db(1.0);
  const double g60 = filter_gain_db(60.0);
  const double elapsed = seconds_since(t0);
  const bool pass = g10 >= -3.0 && g10 <= 0.5 && g20 >= -3.0 && g20 <= 0.5 &&
                    g1 <= -20.0 && g60 <= -6.0 && elapsed < 5.0;
  return {pass, fmt("10 Hz %+.2f dB, 20 Hz %+.2f dB (bounds [-3,+0.5]); "
                    "1 Hz %+.1f dB (<= -20); 60 Hz %+.1f dB (<= -6); %.1f s",
                    g10, g20, g1, g60, elapsed)};
}

// Criterion 3: 266 = 210+35+21 feature partition; scaling the raw signal by
// c multiplies every power feature by c^2 and leaves peak frequencies fixed.
Outcome check_feature_contract() {
  if (kPerChannelFeatures != 210 || kRegionalFeatures != 35 ||
      kMainBandFeatures != 21 || kFeatureDim != 266)
    return {false, "feature partition is not 210+35+21=266"};

  const double c = 3.0;
  RawSession base = testutil::random_session(4 * kFrameLen, 77);
  RawSession scaled = base;
  scaled.samples *= c;
  const BandTable bands = default_band_table();
  const ChannelLayout& layout = ChannelLayout::standard();
  const FeatureSeries fb = extract_feature_series(base, bands, layout);
  const FeatureSeries fs_ = extract_feature_series(scaled, bands, layout);
  if (fb.frames.size() != feature_frame_count(std::size_t(4 * kFrameLen)) ||
      fb.frames.size() != fs_.frames.size())
    return {false, "frame count does not match the frame formula"};

  double worst_power = 0.0;
  double worst_freq = 0.0;
  for (std::size_t i = 0; i < fb.frames.size(); ++i) {
    for (int f = 0; f < kFeatureDim; ++f) {
      const double a = fb.frames[i].values[std::size_t(f)];
      const double b = fs_.frames[i].values[std::size_t(f)];
      const bool is_freq = f < kPerChannelFeatures && f % 3 == 2;
      if (is_freq)
        worst_freq = std::max(worst_freq, std::abs(a - b));
      else
        worst_power = std::max(
            worst_power, std::abs(a * c * c - b) / std::max(std::abs(b), 1e-12));
    }
  }
  const bool pass = worst_power <= 1e-9 && worst_freq == 0.0;
  return {pass, fmt("partition 210+35+21; c^2 power err %.2e (bound 1e-9), "
                    "peak-freq drift %.1e (bound 0)",
                    worst_power, worst_freq)};
}

// Criterion 4: window counts match floor((F-40)/20)+1, consecutive windows
// share exactly 20 frames, and one window spans 11.75 s of raw signal.
Outcome check_segmentation_arithmetic() {
  const LabelMap map = LabelMap::default_synthetic();
  for (const int frames : {40, 59, 60, 100, 9593}) {
    FeatureSeries series;
    series.participant_id = 1;
    for (int i = 0; i < frames; ++i) {
      FeatureFrame frame;
      frame.t = 0.25 * i;
      frame.task = 0;
      frame.values[0] = double(i);  // frame marker
      series.frames.push_back(frame);
    }
    const SegmentResult result = segment_series(series, map);
    const std::size_t expected = std::size_t((frames - 40) / 20) + 1;
    if (result.windows.size() != expected)
      return {false, fmt("F=%d gave %zu windows, expected %zu", frames,
                         result.windows.size(), expected)};
    for (std::size_t w = 0; w + 1 < result.windows.size(); ++w)
      for (int t = 0; t < kWindowHop; ++t)
        if (result.windows[w].at(kWindowHop + t, 0) !=
            result.windows[w + 1].at(t, 0))
          return {false, fmt("windows %zu and %zu do not share 20 frames", w,
                             w + 1)};
  }
  const double span_s =
      ((kWindowLen - 1) * kFrameStride + kFrameLen) / kSampleRate;
  if (span_s != 11.75)
    return {false, fmt("window span %.4f s, expected 11.75", span_s)};
  return {true, "counts match floor((F-40)/20)+1 for F in {40,59,60,100,9593}; "
                "20-frame overlap; span 11.75 s"};
}

// Criterion 5: the 1-NN classifier agrees with an exhaustive brute-force scan.
Outcome check_nn1_oracle() {
  Rng rng(501);
  std::vector<Window> train;
  for (int i = 0; i < 200; ++i)
    train.push_back(testutil::random_window(
        rng.next_u64(), i % 2 ? State::DISTRACTED : State::FOCUSED, 1, 0));
  std::vector<Window> queries;
  for (int i = 0; i < 50; ++i)
    queries.push_back(
        testutil::random_window(rng.next_u64(), State::FOCUSED, 2, 0));
  const std::vector<State> got = nn1_classify_batch(train, queries);
  int mismatches = 0;
  for (std::size_t i = 0; i < queries.size(); ++i)
    if (got[i] != brute_force_nn1(train, queries[i])) ++mismatches;
  return {mismatches == 0,
          fmt("%d/50 disagreements with the brute-force scan", mismatches)};
}

// Criterion 6: ridge normal-equation residual at the selected lambda,
// perfect separation of a separable set, and shrinkage monotonicity.
Outcome check_ridge_correctness() {
  Rng rng(601);
  const int n = 120, d = 12;
  Eigen::MatrixXd x(n, d);
  std::vector<State> y;
  for (int i = 0; i < n; ++i) {
    const bool distracted = i % 2 == 0;
    y.push_back(distracted ? State::DISTRACTED : State::FOCUSED);
    for (int j = 0; j < d; ++j)
      x(i, j) = rng.normal() + (distracted && j < 4 ? 3.0 : 0.0);
  }
  const RidgeModel model = ridge_fit(x, y, default_lambda_grid());

  Eigen::MatrixXd z = x;
  for (int j = 0; j < d; ++j)
    z.col(j) = (z.col(j).array() - model.feature_means(j)) /
               model.feature_stds(j);
  Eigen::VectorXd yv(n);
  for (int i = 0; i < n; ++i)
    yv(i) = y[std::size_t(i)] == State::DISTRACTED ? 1.0 : -1.0;
  const Eigen::VectorXd centered = yv.array() - yv.mean();
  const Eigen::VectorXd rhs = z.transpose() * centered;
  const Eigen::VectorXd lhs =
      (z.transpose() * z +
       model.lambda * Eigen::MatrixXd::Identity(d, d)) *
      model.weights;
  const double residual =
      (lhs - rhs).norm() / std::max(1.0, rhs.norm());

  int errors = 0;
  for (int i = 0; i < n; ++i)
    if (model.predict(x.row(i).transpose()) != y[std::size_t(i)]) ++errors;

  bool shrinks = true;
  double prev_norm = std::numeric_limits<double>::infinity();
  for (double lambda : default_lambda_grid()) {
    const RidgeModel single = ridge_fit(x, y, {lambda});
    const double norm = single.weights.norm();
    if (norm >= prev_norm) shrinks = false;
    prev_norm = norm;
  }

  const bool pass = residual <= 1e-8 && errors == 0 && shrinks;
  return {pass, fmt("residual %.2e (bound 1e-8), training errors %d, "
                    "weight norm strictly decreasing across grid: %s",
                    residual, errors, shrinks ? "yes" : "no")};
}

// Criterion 7: analytic gradients vs central finite differences for the
// three architectures at toy scale. Bound 1e-4, runtime < 2 min.
Outcome check_gradient_checks() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::string per_model;
  for (const ModelKind kind :
       {ModelKind::FCN, ModelKind::RESNET, ModelKind::FCN_LSTM}) {
    const ModelSpec spec = toy_spec(kind);
    NeuralModel model(spec, 7001);
    const Tensor x = random_input(spec, 4, 7002);
    const std::vector<int> targets = {0, 1, 1, 0};
    const double err = grad_check(model, x, targets, 1e-5, 60, 7003);
    worst = std::max(worst, err);
    per_model += fmt("%s %.2e ", to_string(kind).c_str(), err);
  }
  const double elapsed = seconds_since(t0);
  const bool pass = worst <= 1e-4 && elapsed < 120.0;
  return {pass, fmt("%s(bound 1e-4), %.1f s (bound 120 s)", per_model.c_str(),
                    elapsed)};
}

// Criterion 8: each architecture overfits an 8-sample toy set to 100%
// training accuracy within 200 epochs.
Outcome check_overfit_sanity() {
  std::string per_model;
  bool pass = true;
  for (const ModelKind kind :
       {ModelKind::FCN, ModelKind::RESNET, ModelKind::FCN_LSTM}) {
    const ModelSpec spec = toy_spec(kind);
    NeuralModel model(spec, 8001);
    const MemoryBatchSource data = toy_source(spec, 8, 8002);
    TrainConfig tc;
    tc.seed = 8003;
    tc.batch_size = 8;
    tc.max_epochs = 200;
    const TrainResult result = train_model(model, data, nullptr, tc);
    const auto [loss, acc] = evaluate_model(model, data, 8);
    (void)loss;
    if (acc != 1.0) pass = false;
    per_model += fmt("%s %.0f%% after %d epochs; ", to_string(kind).c_str(),
                     100.0 * acc, result.epochs_run);
  }
  return {pass, per_model + "(need 100% within 200 epochs)"};
}

// Criterion 9: the desk profile completes run-all under 10 minutes and the
// rocket and fcn_lstm aggregate means clear accuracy 0.90 / distracted F1
// 0.85 on the deliberately separable synthetic corpus.
Outcome check_desk_run() {
  g_desk_a = g_work / "desk_a";
  const auto t0 = std::chrono::steady_clock::now();
  const int rc = run_cli("--config " + g_repo + "/configs/desk.cfg --set "
                         "paths.out_dir=" + g_desk_a.string() + " run-all",
                         g_work / "desk_a.log");
  g_desk_seconds = seconds_since(t0);
  if (rc != 0)
    return {false, fmt("run-all exited %d (see desk_a.log)", rc)};
  g_desk_ok = true;

  const auto lines = lines_of(read_file(g_desk_a / "report.csv"));
  double rocket_acc = -1.0, rocket_f1 = -1.0;
  double lstm_acc = -1.0, lstm_f1 = -1.0;
  for (const std::string& line : lines) {
    const auto fields = split_csv(line);
    if (fields.size() != 10 || fields[1] != "mean") continue;
    const double acc = parse_double(fields[3], "report");
    const double f1 = parse_double(fields[6], "report");
    if (fields[0] == "rocket") {
      rocket_acc = acc;
      rocket_f1 = f1;
    } else if (fields[0] == "fcn_lstm") {
      lstm_acc = acc;
      lstm_f1 = f1;
    }
  }
  const bool pass = g_desk_seconds < 600.0 && rocket_acc >= 0.90 &&
                    rocket_f1 >= 0.85 && lstm_acc >= 0.90 && lstm_f1 >= 0.85;
  return {pass, fmt("%.0f s (bound 600); rocket acc %.3f f1 %.3f, fcn_lstm "
                    "acc %.3f f1 %.3f (bounds 0.90 / 0.85)",
                    g_desk_seconds, rocket_acc, rocket_f1, lstm_acc, lstm_f1)};
}

// Criterion 10: the generator's 0.36 distracted-fraction target survives
// windowing within +/-0.05.
Outcome check_imbalance_regime() {
  if (!g_desk_ok) return {false, "desk run unavailable"};
  const auto manifest =
      lines_of(read_file(g_desk_a / "windows" / "manifest.csv"));
  std::size_t distracted = 0, total = 0;
  for (std::size_t i = 1; i < manifest.size(); ++i) {
    const auto fields = split_csv(manifest[i]);
    if (fields.size() < 2) continue;
    const std::vector<Window> windows =
        load_windows((g_desk_a / "windows" / fields[1]).string());
    for (const Window& w : windows)
      if (w.state == State::DISTRACTED) ++distracted;
    total += windows.size();
  }
  const double fraction = double(distracted) / double(total);
  const bool pass = total > 0 && std::abs(fraction - 0.36) <= 0.05;
  return {pass, fmt("windowed distracted fraction %.3f over %zu windows "
                    "(target 0.36 +/- 0.05)",
                    fraction, total)};
}

// Criterion 11: a second run-all is byte-identical, and every model
// serialization round-trips with outputs equal within 1e-15.
Outcome check_determinism() {
  if (!g_desk_ok) return {false, "desk run unavailable"};
  g_desk_b = g_work / "desk_b";
  const int rc = run_cli("--config " + g_repo + "/configs/desk.cfg --set "
                         "paths.out_dir=" + g_desk_b.string() + " run-all",
                         g_work / "desk_b.log");
  if (rc != 0) return {false, fmt("second run-all exited %d", rc)};
  for (const char* artifact : {"report.csv", "split.csv", "corpus.csv"})
    if (read_file(g_desk_a / artifact) != read_file(g_desk_b / artifact))
      return {false, fmt("%s differs between identical runs", artifact)};

  double worst = 0.0;
  const fs::path dir = g_work / "roundtrip";
  fs::create_directories(dir);

  // Rocket: kernels + ridge through the EDR file.
  {
    const std::vector<Window> windows =
        testutil::separable_windows(12, 3.0, 1101);
    std::vector<State> states;
    for (const Window& w : windows) states.push_back(w.state);
    RocketModel model;
    model.seed = 1102;
    model.input_len = kWindowLen;
    model.channels = kFeatureDim;
    model.kernels = rocket_generate(50, kWindowLen, kFeatureDim, 1102);
    const Eigen::MatrixXd x = rocket_transform(windows, model.kernels);
    model.ridge = ridge_fit(x, states, default_lambda_grid());
    const std::string path = (dir / "m.edr").string();
    save_rocket_model(model, path);
    const RocketModel loaded = load_rocket_model(path);
    for (const Window& w : windows)
      worst = std::max(worst, std::abs(model.score(w) - loaded.score(w)));
  }

  // The three networks through the EDN file, compared in inference mode.
  for (const ModelKind kind :
       {ModelKind::FCN, ModelKind::RESNET, ModelKind::FCN_LSTM}) {
    const ModelSpec spec = toy_spec(kind);
    NeuralModel model(spec, 1103);
    const MemoryBatchSource data = toy_source(spec, 8, 1104);
    TrainConfig tc;
    tc.seed = 1105;
    tc.batch_size = 8;
    tc.max_epochs = 2;
    train_model(model, data, nullptr, tc);
    const std::string path = (dir / "m.edn").string();
    save_neural_model(model, path);
    NeuralModel loaded = load_neural_model(path);
    const Tensor x = random_input(spec, 3, 1106);
    const Eigen::MatrixXd pa = model.forward_probs(x, false);
    const Eigen::MatrixXd pb = loaded.forward_probs(x, false);
    worst = std::max(worst, (pa - pb).cwiseAbs().maxCoeff());
  }

  const bool pass = worst <= 1e-15;
  return {pass, fmt("report/split/corpus byte-identical across runs; "
                    "round-trip output diff %.1e (bound 1e-15)",
                    worst)};
}

// Criterion 12: `stream` replays a raw session into exactly the predictions
// the batch pipeline makes on the saved windows, for every model family.
Outcome check_stream_equivalence() {
  if (!g_desk_ok) return {false, "desk run unavailable"};
  const std::string session_csv = (g_desk_a / "raw" / "p01.csv").string();
  const std::vector<Window> windows =
      load_windows((g_desk_a / "windows" / "p01.edw").string());
  const RawSession session = load_raw_csv(session_csv);

  const auto t_end_of = [&](const Window& w) {
    return ((double(w.start_frame) + kWindowLen - 1) * kFrameStride +
            kFrameLen) /
           session.sample_rate;
  };

  const std::string base = "--config " + g_repo + "/configs/desk.cfg --set " +
                           "paths.out_dir=" + g_desk_a.string();
  std::string detail;
  for (const std::string name : {"rocket", "fcn", "fcn_lstm"}) {
    const fs::path model_path = g_work / (name + ".edm");
    std::string train_args = base + " train --model " + name + " --out " +
                             model_path.string();
    if (name != "rocket") train_args += " --set train.max_epochs=2";
    int rc = run_cli(train_args, g_work / (name + "_train.log"));
    if (rc != 0) return {false, fmt("train %s exited %d", name.c_str(), rc)};

    const fs::path lines_path = g_work / (name + "_stream.txt");
    rc = run_cli("stream --session " + session_csv + " --model-file " +
                     model_path.string() + " --out " + lines_path.string(),
                 g_work / (name + "_stream.log"));
    if (rc != 0) return {false, fmt("stream %s exited %d", name.c_str(), rc)};
    const auto lines = lines_of(read_file(lines_path));

    // Batch-side predictions from the windows the segment stage persisted.
    std::vector<std::string> expected;
    if (name == "rocket") {
      const RocketModel model = load_rocket_model(model_path.string());
      for (const Window& w : windows) {
        const double score = model.score(w);
        const State st = score >= 0.0 ? State::DISTRACTED : State::FOCUSED;
        const double prob = 1.0 / (1.0 + std::exp(-score));
        expected.push_back(format_double(t_end_of(w)) + "," + to_string(st) +
                           "," + format_double(prob));
      }
    } else {
      NeuralModel model = load_neural_model(model_path.string());
      const bool seq = name == "fcn_lstm";
      for (std::size_t i = seq ? 3 : 0; i < windows.size(); ++i) {
        Tensor x(seq ? std::vector<int>{1, kSequenceLen, kFeatureDim,
                                        kWindowLen}
                     : std::vector<int>{1, kFeatureDim, kWindowLen});
        double* dst = x.data.data();
        for (std::size_t j = seq ? i - 3 : i; j <= i; ++j)
          for (int f = 0; f < kFeatureDim; ++f)
            for (int t = 0; t < kWindowLen; ++t)
              *dst++ = windows[j].at(t, f);
        const Eigen::MatrixXd probs = model.forward_probs(x, false);
        const State st = probs(0, 1) >= probs(0, 0) ? State::DISTRACTED
                                                    : State::FOCUSED;
        expected.push_back(format_double(t_end_of(windows[i])) + "," +
                           to_string(st) + "," + format_double(probs(0, 1)));
      }
    }

    if (lines.size() != expected.size())
      return {false, fmt("%s: %zu stream lines vs %zu batch predictions",
                         name.c_str(), lines.size(), expected.size())};
    for (std::size_t i = 0; i < expected.size(); ++i)
      if (lines[i] != expected[i])
        return {false, fmt("%s line %zu: stream '%s' vs batch '%s'",
                           name.c_str(), i, lines[i].c_str(),
                           expected[i].c_str())};
    detail += fmt("%s %zu lines exact; ", name.c_str(), lines.size());
  }
  return {true, detail + "(t_end, state and probability all byte-equal)"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: edd_acceptance <path-to-edd-cli>\n";
    return 2;
  }
  g_cli = argv[1];
  g_repo = EDD_SOURCE_DIR;
  g_work = fs::temp_directory_path() / "edd_acceptance";
  fs::remove_all(g_work);
  fs::create_directories(g_work);
  if (!fs::exists(g_cli)) {
    std::cerr << "error: CLI binary '" << g_cli << "' not found\n";
    return 2;
  }

  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"spectral oracle", check_spectral_oracle},
      {"filter response", check_filter_response},
      {"feature contract", check_feature_contract},
      {"segmentation arithmetic", check_segmentation_arithmetic},
      {"1-nn oracle equivalence", check_nn1_oracle},
      {"ridge correctness", check_ridge_correctness},
      {"gradient checks", check_gradient_checks},
      {"overfit sanity", check_overfit_sanity},
      {"end-to-end synthetic run", check_desk_run},
      {"imbalance regime", check_imbalance_regime},
      {"determinism", check_determinism},
      {"online/offline equivalence", check_stream_equivalence},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::printf("[%s] %02zu %-26s %s\n", outcome.pass ? "PASS" : "FAIL",
                i + 1, criteria[i].name, outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %zu/%zu criteria passed\n",
              criteria.size() - std::size_t(failures), criteria.size());
  return failures == 0 ? 0 : 1;
}
