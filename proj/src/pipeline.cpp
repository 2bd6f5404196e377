#include "edd/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

#include "edd/features.hpp"
#include "edd/filter.hpp"
#include "edd/model.hpp"
#include "edd/report.hpp"
#include "edd/rng.hpp"
#include "edd/rocket.hpp"
#include "edd/split.hpp"
#include "edd/synthgen.hpp"
#include "edd/text.hpp"

namespace edd {

namespace {

namespace fs = std::filesystem;

std::string participant_stem(ParticipantId id) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "p%02u", unsigned(id));
  return buf;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw DataError("cannot create directory '" + dir.string() +
                    "': " + ec.message());
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw DataError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, ',')) fields.push_back(item);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

struct ManifestEntry {
  ParticipantId participant_id = 0;
  std::string path;  // resolved against the manifest directory
};

// Reads `participant_id,path[,...]` manifests; extra columns (corpus.csv's
// seed and duration) are ignored here. Entries come back sorted by id.
std::vector<ManifestEntry> load_manifest(const fs::path& manifest_path,
                                         const std::string& producer) {
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in)
    throw DataError("cannot open manifest '" + manifest_path.string() +
                    "' (run the " + producer + " stage first)");
  std::string line;
  if (!std::getline(in, line))
    throw DataError("manifest '" + manifest_path.string() + "' is empty");
  if (line.rfind("participant_id,path", 0) != 0)
    throw DataError("manifest '" + manifest_path.string() +
                    "' has unexpected header '" + line + "'");
  std::vector<ManifestEntry> entries;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string loc =
        manifest_path.string() + ":" + std::to_string(lineno);
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() < 2 || fields[1].empty())
      throw DataError(loc + ": expected 'participant_id,path,...'");
    ManifestEntry e;
    e.participant_id = ParticipantId(parse_long(fields[0], loc));
    e.path = (manifest_path.parent_path() / fields[1]).string();
    entries.push_back(std::move(e));
  }
  if (entries.empty())
    throw DataError("manifest '" + manifest_path.string() + "' has no entries");
  std::sort(entries.begin(), entries.end(),
            [](const ManifestEntry& a, const ManifestEntry& b) {
              return a.participant_id < b.participant_id;
            });
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].participant_id == entries[i - 1].participant_id)
      throw DataError("manifest '" + manifest_path.string() +
                      "' lists participant " +
                      std::to_string(entries[i].participant_id) + " twice");
  return entries;
}

LabelMap resolve_label_map(const PipelineConfig& config) {
  return config.labels_file.empty() ? LabelMap::default_synthetic()
                                    : load_label_map(config.labels_file);
}

// The split is drawn from split.seed unless split.file pins an existing
// assignment; evaluate (write_artifact=true) records the drawn split.
DatasetSplit resolve_split(const PipelineConfig& config,
                           const std::vector<ParticipantId>& ids,
                           bool write_artifact) {
  if (!config.split.file.empty()) {
    DatasetSplit split = load_split(config.split.file);
    split.validate(ids);
    return split;
  }
  const SplitCounts counts{config.split.n_train, config.split.n_val,
                           config.split.n_test};
  DatasetSplit split = split_by_participant(ids, counts, config.split.seed);
  if (write_artifact)
    save_split(split, (fs::path(config.out_dir) / "split.csv").string());
  return split;
}

ExperimentData assemble_data(const std::vector<ManifestEntry>& entries,
                             const DatasetSplit& split) {
  ExperimentData data;
  for (const ManifestEntry& e : entries) {
    std::vector<Window> windows = load_windows(e.path);
    for (const Window& w : windows)
      if (w.participant_id != e.participant_id)
        throw DataError("'" + e.path + "' holds windows of participant " +
                        std::to_string(w.participant_id) +
                        " but the manifest says " +
                        std::to_string(e.participant_id));
    std::vector<Window>* dst = nullptr;
    switch (split.role_of(e.participant_id)) {
      case DatasetSplit::Role::Train: dst = &data.train_windows; break;
      case DatasetSplit::Role::Val: dst = &data.val_windows; break;
      case DatasetSplit::Role::Test: dst = &data.test_windows; break;
      case DatasetSplit::Role::None: continue;  // not part of this split
    }
    dst->insert(dst->end(), std::make_move_iterator(windows.begin()),
                std::make_move_iterator(windows.end()));
  }
  return data;
}

std::vector<ParticipantId> manifest_ids(
    const std::vector<ManifestEntry>& entries) {
  std::vector<ParticipantId> ids;
  ids.reserve(entries.size());
  for (const ManifestEntry& e : entries) ids.push_back(e.participant_id);
  return ids;
}

Tensor window_tensor(const Window& w) {
  Tensor x({1, kFeatureDim, kWindowLen});
  for (int f = 0; f < kFeatureDim; ++f)
    for (int t = 0; t < kWindowLen; ++t) x.at3(0, f, t) = w.at(t, f);
  return x;
}

std::string magic_of(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file '" + path + "'");
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() != 4)
    throw DataError("model file '" + path + "' is truncated");
  return std::string(magic, 4);
}

}  // namespace

void stage_synth(const PipelineConfig& config) {
  const fs::path out_dir = config.out_dir;
  ensure_dir(out_dir / "raw");
  const std::vector<RawSession> corpus =
      generate_corpus(config.generator, config.generator_seed);
  std::ostringstream manifest;
  manifest << "participant_id,path,seed,duration_s\n";
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const RawSession& session = corpus[i];
    const std::string rel =
        "raw/" + participant_stem(session.participant_id) + ".csv";
    save_raw_csv(session, (out_dir / rel).string());
    manifest << session.participant_id << ',' << rel << ','
             << derive_seed(config.generator_seed, std::uint64_t(i)) << ','
             << format_double(double(session.num_samples()) /
                              session.sample_rate)
             << '\n';
  }
  write_text_file(out_dir / "corpus.csv", manifest.str());
  std::cout << "synth: wrote " << corpus.size() << " sessions under "
            << (out_dir / "raw").string() << "\n";
}

void stage_extract(const PipelineConfig& config) {
  const fs::path out_dir = config.out_dir;
  const std::vector<ManifestEntry> entries =
      load_manifest(out_dir / "corpus.csv", "synth");
  ensure_dir(out_dir / "features");
  const BandTable bands = default_band_table();
  const ChannelLayout& layout = ChannelLayout::standard();
  std::ostringstream manifest;
  manifest << "participant_id,path\n";
  std::size_t total_frames = 0;
  for (const ManifestEntry& e : entries) {
    // Raw CSVs are anonymous (`t,<channels>,task`); identity comes from the
    // manifest row.
    RawSession session = load_raw_csv(e.path);
    session.participant_id = e.participant_id;
    const FeatureSeries series = extract_feature_series(session, bands, layout);
    const std::string rel = participant_stem(e.participant_id) + ".csv";
    save_feature_csv(series, (out_dir / "features" / rel).string());
    manifest << e.participant_id << ',' << rel << '\n';
    total_frames += series.frames.size();
  }
  write_text_file(out_dir / "features" / "manifest.csv", manifest.str());
  std::cout << "extract: wrote " << total_frames << " feature frames for "
            << entries.size() << " sessions\n";
}

void stage_segment(const PipelineConfig& config) {
  const fs::path out_dir = config.out_dir;
  const std::vector<ManifestEntry> entries =
      load_manifest(out_dir / "features" / "manifest.csv", "extract");
  ensure_dir(out_dir / "windows");
  const LabelMap map = resolve_label_map(config);
  std::ostringstream manifest;
  manifest << "participant_id,path\n";
  std::size_t total_windows = 0;
  for (const ManifestEntry& e : entries) {
    const FeatureSeries series = load_feature_csv(e.path, e.participant_id);
    const SegmentResult result = segment_series(series, map);
    if (result.too_short)
      throw DataError("'" + e.path + "' has " +
                      std::to_string(series.frames.size()) +
                      " frames, fewer than one " +
                      std::to_string(kWindowLen) + "-frame window");
    const std::string rel = participant_stem(e.participant_id) + ".edw";
    save_windows(result.windows, (out_dir / "windows" / rel).string());
    manifest << e.participant_id << ',' << rel << '\n';
    total_windows += result.windows.size();
  }
  write_text_file(out_dir / "windows" / "manifest.csv", manifest.str());
  std::cout << "segment: wrote " << total_windows << " windows for "
            << entries.size() << " sessions\n";
}

void stage_train(const PipelineConfig& config, const std::string& model_name,
                 const std::string& model_path) {
  if (model_name == "nn1")
    throw ConfigError(
        "nn1 keeps the training windows verbatim and has no artifact to "
        "train; run evaluate instead");
  if (std::find(kAllModelNames.begin(), kAllModelNames.end(), model_name) ==
      kAllModelNames.end())
    throw ConfigError("unknown model '" + model_name + "'");
  config.experiment.train.validate();

  const fs::path out_dir = config.out_dir;
  const std::vector<ManifestEntry> entries =
      load_manifest(out_dir / "windows" / "manifest.csv", "segment");
  const DatasetSplit split =
      resolve_split(config, manifest_ids(entries), /*write_artifact=*/false);
  const ExperimentData data = assemble_data(entries, split);
  if (data.train_windows.empty())
    throw DataError("training split is empty");

  const std::uint64_t seed = config.experiment.base_seed;
  const fs::path out_path = model_path;
  if (out_path.has_parent_path()) ensure_dir(out_path.parent_path());

  std::vector<State> train_states, val_states;
  for (const Window& w : data.train_windows) train_states.push_back(w.state);
  for (const Window& w : data.val_windows) val_states.push_back(w.state);

  if (model_name == "rocket") {
    if (config.experiment.rocket_kernels < 1)
      throw ConfigError("rocket.kernels must be >= 1");
    RocketModel model;
    model.seed = seed;
    model.input_len = kWindowLen;
    model.channels = kFeatureDim;
    model.kernels = rocket_generate(config.experiment.rocket_kernels,
                                    kWindowLen, kFeatureDim, seed);
    const Eigen::MatrixXd x_train =
        rocket_transform(data.train_windows, model.kernels);
    Eigen::MatrixXd x_val;
    if (!data.val_windows.empty())
      x_val = rocket_transform(data.val_windows, model.kernels);
    model.ridge = ridge_fit(x_train, train_states,
                            config.experiment.lambda_grid,
                            data.val_windows.empty() ? nullptr : &x_val,
                            data.val_windows.empty() ? nullptr : &val_states);
    save_rocket_model(model, model_path);
  } else {
    const ModelSpec& spec = model_name == "fcn"      ? config.experiment.fcn
                            : model_name == "resnet" ? config.experiment.resnet
                                                     : config.experiment.fcn_lstm;
    NeuralModel model(spec, seed);
    TrainConfig tc = config.experiment.train;
    tc.seed = seed;
    if (model_name == "fcn_lstm") {
      const std::vector<WindowSequence> train_seqs =
          build_sequences_grouped(data.train_windows);
      const std::vector<WindowSequence> val_seqs =
          build_sequences_grouped(data.val_windows);
      if (train_seqs.empty())
        throw DataError("training split yields no 4-window sequences");
      const SequenceBatchSource train_src(data.train_windows, train_seqs);
      const SequenceBatchSource val_src(data.val_windows, val_seqs);
      train_model(model, train_src, val_seqs.empty() ? nullptr : &val_src, tc);
    } else {
      const WindowBatchSource train_src(data.train_windows);
      const WindowBatchSource val_src(data.val_windows);
      train_model(model, train_src,
                  data.val_windows.empty() ? nullptr : &val_src, tc);
    }
    save_neural_model(model, model_path);
  }
  std::cout << "train: wrote " << model_path << "\n";
}

void stage_evaluate(const PipelineConfig& config) {
  config.experiment.validate();
  const fs::path out_dir = config.out_dir;
  const std::vector<ManifestEntry> entries =
      load_manifest(out_dir / "windows" / "manifest.csv", "segment");
  ensure_dir(out_dir);
  const DatasetSplit split = resolve_split(
      config, manifest_ids(entries),
      /*write_artifact=*/config.split.file.empty());
  const ExperimentData data = assemble_data(entries, split);
  const EvalReport report = run_experiment(data, config.experiment);
  emit_report(report, (out_dir / "report.csv").string(),
              (out_dir / "report.svg").string());
  for (const EvalAggregate& agg : report.aggregates) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "evaluate: %-8s accuracy %.3f +/- %.3f  distracted F1 %.3f",
                  agg.model.c_str(), agg.mean.accuracy, agg.stddev.accuracy,
                  agg.mean.f1_distracted);
    std::cout << buf << "\n";
  }
  std::cout << "evaluate: wrote " << (out_dir / "report.csv").string()
            << " and " << (out_dir / "report.svg").string() << "\n";
}

void stage_stream(const PipelineConfig& config, const std::string& session_csv,
                  const std::string& model_path, std::ostream& out) {
  const RawSession session = load_raw_csv(session_csv);
  const BandTable bands = default_band_table();
  const ChannelLayout& layout = ChannelLayout::standard();

  // Model dispatch by file magic; each predictor maps a completed window
  // (plus, for the recurrent model, its three predecessors) to a state and
  // P(distracted).
  const std::string magic = magic_of(model_path);
  RocketModel rocket;
  std::optional<NeuralModel> neural;
  if (magic == "EDR1") {
    rocket = load_rocket_model(model_path);
    if (rocket.input_len != kWindowLen || rocket.channels != kFeatureDim)
      throw DataError("model '" + model_path + "' expects " +
                      std::to_string(rocket.channels) + "x" +
                      std::to_string(rocket.input_len) +
                      " windows, not the pipeline's");
  } else if (magic == "EDN1") {
    neural.emplace(load_neural_model(model_path));
  } else {
    throw DataError("model file '" + model_path +
                    "' has unrecognized format (magic '" + magic + "')");
  }
  const bool sequence_model =
      neural.has_value() && neural->spec().kind == ModelKind::FCN_LSTM;

  // Causal replay: one filter per channel, a frame every kFrameStride
  // samples once kFrameLen have arrived, a window every kWindowHop frames
  // once kWindowLen have arrived — the same recurrences, in the same order,
  // as the batch pipeline, so the feature values are identical bit for bit.
  std::vector<BandpassFilter> filters;
  filters.reserve(kNumChannels);
  for (int ch = 0; ch < kNumChannels; ++ch)
    filters.emplace_back(4.0, 40.0, session.sample_rate);
  std::vector<std::vector<double>> filtered(kNumChannels);
  std::vector<std::array<double, kFeatureDim>> frames;
  std::deque<Window> recent;

  const auto emit = [&](const Window& window, State state, double prob) {
    // Completion time: the last sample of the window's final frame.
    const double t_end =
        ((double(window.start_frame) + kWindowLen - 1) * kFrameStride +
         kFrameLen) /
        session.sample_rate;
    out << format_double(t_end) << ',' << to_string(state) << ','
        << format_double(prob) << '\n';
  };

  const auto predict_window = [&](const Window& window) {
    if (magic == "EDR1") {
      const double score = rocket.score(window);
      emit(window, score >= 0.0 ? State::DISTRACTED : State::FOCUSED,
           1.0 / (1.0 + std::exp(-score)));
      return;
    }
    if (!sequence_model) {
      const Eigen::MatrixXd probs =
          neural->forward_probs(window_tensor(window), /*train=*/false);
      emit(window, probs(0, 1) >= probs(0, 0) ? State::DISTRACTED
                                              : State::FOCUSED,
           probs(0, 1));
      return;
    }
    recent.push_back(window);
    if (recent.size() > std::size_t(kSequenceLen)) recent.pop_front();
    if (recent.size() < std::size_t(kSequenceLen)) return;
    Tensor x({1, kSequenceLen, kFeatureDim, kWindowLen});
    double* dst = x.data.data();
    for (const Window& w : recent)
      for (int f = 0; f < kFeatureDim; ++f)
        for (int t = 0; t < kWindowLen; ++t)
          *dst++ = w.at(t, f);
    const Eigen::MatrixXd probs = neural->forward_probs(x, /*train=*/false);
    emit(window,
         probs(0, 1) >= probs(0, 0) ? State::DISTRACTED : State::FOCUSED,
         probs(0, 1));
  };

  const std::size_t total = std::size_t(session.num_samples());
  std::array<const double*, kNumChannels> slab{};
  for (std::size_t s = 0; s < total; ++s) {
    for (int ch = 0; ch < kNumChannels; ++ch)
      filtered[std::size_t(ch)].push_back(
          filters[std::size_t(ch)].step(session.samples(Eigen::Index(s), ch)));
    const std::size_t n = s + 1;
    if (n < kFrameLen || (n - kFrameLen) % kFrameStride != 0) continue;
    const std::size_t off = n - kFrameLen;
    for (int ch = 0; ch < kNumChannels; ++ch)
      slab[std::size_t(ch)] = filtered[std::size_t(ch)].data() + off;
    frames.push_back(compute_frame_features(slab, bands, layout,
                                            WindowFn::Rect));
    if (frames.size() < std::size_t(kWindowLen) ||
        (frames.size() - kWindowLen) % kWindowHop != 0)
      continue;
    Window window;
    window.participant_id = session.participant_id;
    window.start_frame = std::uint32_t(frames.size() - kWindowLen);
    window.values.resize(std::size_t(kWindowLen) * kFeatureDim);
    for (int t = 0; t < kWindowLen; ++t)
      for (int f = 0; f < kFeatureDim; ++f)
        window.values[std::size_t(t) * kFeatureDim + std::size_t(f)] =
            frames[window.start_frame + std::size_t(t)][std::size_t(f)];
    predict_window(window);
  }
}

void run_all(const PipelineConfig& config) {
  const auto run_stage = [](const char* name, auto&& fn) {
    const std::string tag = std::string(name) + ": ";
    try {
      fn();
    } catch (const ConfigError& e) {
      throw ConfigError(tag + e.what());
    } catch (const TrainingDiverged& e) {
      throw TrainingDiverged(tag + e.what());
    } catch (const DataError& e) {
      throw DataError(tag + e.what());
    }
  };
  run_stage("synth", [&] { stage_synth(config); });
  run_stage("extract", [&] { stage_extract(config); });
  run_stage("segment", [&] { stage_segment(config); });
  run_stage("evaluate", [&] { stage_evaluate(config); });
}

}  // namespace edd
