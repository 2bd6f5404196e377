#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "edd/experiment.hpp"
#include "edd/features.hpp"
#include "edd/filter.hpp"
#include "edd/metrics.hpp"
#include "edd/model.hpp"
#include "edd/nn1.hpp"
#include "edd/rocket.hpp"
#include "edd/segmentation.hpp"
#include "edd/spectrum.hpp"
#include "edd/synthgen.hpp"
#include "edd/train.hpp"

namespace py = pybind11;
using namespace edd;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using IntArray = py::array_t<int, py::array::c_style | py::array::forcecast>;

std::vector<Window> windows_from_array(const Array& values,
                                       const IntArray* states) {
  if (values.ndim() != 3 || values.shape(1) != kWindowLen ||
      values.shape(2) != kFeatureDim)
    throw DataError("windows must have shape (n, 40, 266)");
  const auto n = values.shape(0);
  if (states != nullptr && states->ndim() != 1)
    throw DataError("states must be one-dimensional");
  if (states != nullptr && states->shape(0) != n)
    throw DataError("states length must match the window count");
  std::vector<Window> out(static_cast<std::size_t>(n));
  const double* src = values.data();
  for (py::ssize_t i = 0; i < n; ++i) {
    Window& w = out[std::size_t(i)];
    w.values.assign(src + i * kWindowLen * kFeatureDim,
                    src + (i + 1) * kWindowLen * kFeatureDim);
    if (states != nullptr)
      w.state = states->data()[i] != 0 ? State::DISTRACTED : State::FOCUSED;
    w.start_frame = std::uint32_t(i) * std::uint32_t(kWindowHop);
  }
  return out;
}

IntArray states_to_array(const std::vector<State>& states) {
  IntArray out(py::ssize_t(states.size()));
  for (std::size_t i = 0; i < states.size(); ++i)
    out.mutable_data()[i] = int(states[i]);
  return out;
}

Tensor window_batch(const std::vector<Window>& windows) {
  const WindowBatchSource src(windows);
  std::vector<std::size_t> idx(windows.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return src.batch(idx);
}

// In-memory dataset handle for the neural trainer.
struct PyDataset {
  std::vector<Window> windows;
  std::vector<int> targets;
};

class PyNeuralNet {
 public:
  PyNeuralNet(const std::string& kind, std::uint64_t seed) {
    const ModelKind k = model_kind_from_string(kind);
    if (k == ModelKind::FCN_LSTM)
      throw ConfigError(
          "the python wrapper trains single-window models (fcn, resnet)");
    ModelSpec spec = k == ModelKind::FCN ? ModelSpec::fcn()
                                         : ModelSpec::resnet();
    model_ = std::make_unique<NeuralModel>(spec, seed);
  }
  explicit PyNeuralNet(NeuralModel&& model)
      : model_(std::make_unique<NeuralModel>(std::move(model))) {}

  void fit(const Array& values, const IntArray& states, int epochs,
           int batch_size, double learning_rate) {
    const std::vector<Window> windows = windows_from_array(values, &states);
    const WindowBatchSource src(windows);
    TrainConfig tc;
    tc.seed = model_->seed();
    tc.max_epochs = epochs;
    tc.batch_size = batch_size;
    tc.learning_rate = learning_rate;
    tc.patience = epochs;  // no early stopping without a validation set
    train_model(*model_, src, nullptr, tc);
  }

  IntArray predict(const Array& values) {
    const std::vector<Window> windows = windows_from_array(values, nullptr);
    return states_to_array(model_->predict(window_batch(windows)));
  }

  Array predict_proba(const Array& values) {
    const std::vector<Window> windows = windows_from_array(values, nullptr);
    const Eigen::MatrixXd probs =
        model_->forward_probs(window_batch(windows), /*train=*/false);
    Array out({probs.rows(), probs.cols()});
    for (Eigen::Index i = 0; i < probs.rows(); ++i)
      for (Eigen::Index j = 0; j < probs.cols(); ++j)
        out.mutable_data()[i * probs.cols() + j] = probs(i, j);
    return out;
  }

  std::vector<std::vector<double>> history() const {
    std::vector<std::vector<double>> rows;
    for (const EpochStats& e : model_->history)
      rows.push_back({double(e.epoch), e.train_loss, e.train_acc, e.val_loss,
                      e.val_acc});
    return rows;
  }

  void save(const std::string& path) const {
    save_neural_model(*model_, path);
  }
  static PyNeuralNet load(const std::string& path) {
    return PyNeuralNet(load_neural_model(path));
  }

  std::string kind() const { return to_string(model_->spec().kind); }

 private:
  std::unique_ptr<NeuralModel> model_;
};

class PyRocket {
 public:
  PyRocket(int num_kernels, std::uint64_t seed)
      : num_kernels_(num_kernels), seed_(seed) {}
  explicit PyRocket(RocketModel&& model)
      : num_kernels_(int(model.kernels.size())),
        seed_(model.seed),
        model_(std::move(model)),
        fitted_(true) {}

  void fit(const Array& values, const IntArray& states) {
    const std::vector<Window> windows = windows_from_array(values, &states);
    std::vector<State> y;
    for (const Window& w : windows) y.push_back(w.state);
    model_.seed = seed_;
    model_.input_len = kWindowLen;
    model_.channels = kFeatureDim;
    model_.kernels =
        rocket_generate(num_kernels_, kWindowLen, kFeatureDim, seed_);
    const Eigen::MatrixXd x = rocket_transform(windows, model_.kernels);
    model_.ridge = ridge_fit(x, y, default_lambda_grid());
    fitted_ = true;
  }

  IntArray predict(const Array& values) {
    require_fitted();
    const std::vector<Window> windows = windows_from_array(values, nullptr);
    std::vector<State> pred;
    for (const Window& w : windows) pred.push_back(model_.predict(w));
    return states_to_array(pred);
  }

  Array decision_scores(const Array& values) {
    require_fitted();
    const std::vector<Window> windows = windows_from_array(values, nullptr);
    Array out(py::ssize_t(windows.size()));
    for (std::size_t i = 0; i < windows.size(); ++i)
      out.mutable_data()[i] = model_.score(windows[i]);
    return out;
  }

  void save(const std::string& path) const {
    require_fitted();
    save_rocket_model(model_, path);
  }
  static PyRocket load(const std::string& path) {
    return PyRocket(load_rocket_model(path));
  }

 private:
  void require_fitted() const {
    if (!fitted_) throw DataError("rocket model is not fitted");
  }

  int num_kernels_;
  std::uint64_t seed_;
  RocketModel model_;
  bool fitted_ = false;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "EEG driver-distraction toolkit: synthetic corpus generation, "
      "band-power features, windowing and the classifier suite";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<TrainingDiverged>(m, "TrainingDiverged",
                                           PyExc_RuntimeError);

  m.attr("SAMPLE_RATE") = kSampleRate;
  m.attr("NUM_CHANNELS") = kNumChannels;
  m.attr("FRAME_LEN") = kFrameLen;
  m.attr("FRAME_STRIDE") = kFrameStride;
  m.attr("FEATURE_DIM") = kFeatureDim;
  m.attr("WINDOW_LEN") = kWindowLen;
  m.attr("WINDOW_HOP") = kWindowHop;
  m.attr("SEQUENCE_LEN") = kSequenceLen;

  m.def(
      "channel_names",
      [] {
        return ChannelLayout::standard().names;
      },
      "The 14 electrode names in storage order.");

  m.def(
      "power_spectrum",
      [](const Array& frame) {
        if (frame.ndim() != 1 || frame.shape(0) != kFrameLen)
          throw DataError("frame must have exactly 256 samples");
        const std::vector<double> x(frame.data(), frame.data() + kFrameLen);
        const PowerSpectrum spec = power_spectrum(x, WindowFn::Rect);
        Array out(py::ssize_t(spec.bins.size()));
        std::memcpy(out.mutable_data(), spec.bins.data(),
                    spec.bins.size() * sizeof(double));
        return out;
      },
      py::arg("frame"),
      "One-sided power spectrum of a 256-sample frame (129 bins, 0.5 Hz "
      "apart).");

  m.def(
      "bandpass_filter",
      [](const Array& x, double lo_hz, double hi_hz, double fs_hz) {
        if (x.ndim() != 1) throw DataError("signal must be one-dimensional");
        BandpassFilter f(lo_hz, hi_hz, fs_hz);
        Array out(x.shape(0));
        for (py::ssize_t i = 0; i < x.shape(0); ++i)
          out.mutable_data()[i] = f.step(x.data()[i]);
        return out;
      },
      py::arg("x"), py::arg("lo_hz") = 4.0, py::arg("hi_hz") = 40.0,
      py::arg("fs_hz") = double(kSampleRate),
      "Causal Butterworth band-pass, matching the feature extractor's "
      "filter.");

  m.def(
      "generate_session",
      [](double seconds, std::uint64_t seed, int participant_id,
         double distracted_fraction, double noise_sigma) {
        GeneratorProfile profile;
        profile.session_seconds = seconds;
        profile.distracted_fraction = distracted_fraction;
        profile.noise_sigma = noise_sigma;
        const RawSession s =
            generate_session(profile, ParticipantId(participant_id), seed);
        Array samples({s.samples.rows(), s.samples.cols()});
        for (Eigen::Index i = 0; i < s.samples.rows(); ++i)
          for (Eigen::Index j = 0; j < s.samples.cols(); ++j)
            samples.mutable_data()[i * s.samples.cols() + j] =
                s.samples(i, j);
        IntArray tasks(py::ssize_t(s.tasks.size()));
        std::memcpy(tasks.mutable_data(), s.tasks.data(),
                    s.tasks.size() * sizeof(int));
        return py::make_tuple(samples, tasks);
      },
      py::arg("seconds") = 300.0, py::arg("seed") = 1,
      py::arg("participant_id") = 1, py::arg("distracted_fraction") = 0.36,
      py::arg("noise_sigma") = 3.0,
      "Synthesize one EEG session; returns (samples[T,14] in uV, "
      "tasks[T]).");

  m.def(
      "extract_features",
      [](const Array& samples, const IntArray& tasks) {
        if (samples.ndim() != 2 || samples.shape(1) != kNumChannels)
          throw DataError("samples must have shape (T, 14)");
        if (tasks.ndim() != 1 || tasks.shape(0) != samples.shape(0))
          throw DataError("tasks must have one entry per sample");
        RawSession s;
        s.participant_id = 1;
        s.samples.resize(samples.shape(0), kNumChannels);
        for (Eigen::Index i = 0; i < s.samples.rows(); ++i)
          for (int j = 0; j < kNumChannels; ++j)
            s.samples(i, j) = samples.data()[i * kNumChannels + j];
        s.tasks.assign(tasks.data(), tasks.data() + tasks.shape(0));
        const FeatureSeries series = extract_feature_series(
            s, default_band_table(), ChannelLayout::standard());
        const py::ssize_t n = py::ssize_t(series.frames.size());
        Array times(n);
        Array values({n, py::ssize_t(kFeatureDim)});
        IntArray frame_tasks(n);
        for (py::ssize_t i = 0; i < n; ++i) {
          const FeatureFrame& f = series.frames[std::size_t(i)];
          times.mutable_data()[i] = f.t;
          frame_tasks.mutable_data()[i] = f.task;
          std::memcpy(values.mutable_data() + i * kFeatureDim,
                      f.values.data(), sizeof(double) * kFeatureDim);
        }
        return py::make_tuple(times, values, frame_tasks);
      },
      py::arg("samples"), py::arg("tasks"),
      "Filter + STFT feature extraction; returns (times[F], "
      "features[F,266], frame_tasks[F]).");

  m.def(
      "segment_windows",
      [](const Array& features, const IntArray& frame_tasks) {
        if (features.ndim() != 2 || features.shape(1) != kFeatureDim)
          throw DataError("features must have shape (F, 266)");
        if (frame_tasks.ndim() != 1 ||
            frame_tasks.shape(0) != features.shape(0))
          throw DataError("frame_tasks must have one entry per frame");
        FeatureSeries series;
        series.participant_id = 1;
        series.frames.resize(std::size_t(features.shape(0)));
        for (py::ssize_t i = 0; i < features.shape(0); ++i) {
          FeatureFrame& f = series.frames[std::size_t(i)];
          f.t = double(i) * kFrameStride / kSampleRate;
          f.task = frame_tasks.data()[i];
          std::memcpy(f.values.data(), features.data() + i * kFeatureDim,
                      sizeof(double) * kFeatureDim);
        }
        const SegmentResult result =
            segment_series(series, LabelMap::default_synthetic());
        const py::ssize_t n = py::ssize_t(result.windows.size());
        Array values({n, py::ssize_t(kWindowLen), py::ssize_t(kFeatureDim)});
        IntArray states(n);
        IntArray starts(n);
        for (py::ssize_t i = 0; i < n; ++i) {
          const Window& w = result.windows[std::size_t(i)];
          std::memcpy(values.mutable_data() + i * kWindowLen * kFeatureDim,
                      w.values.data(),
                      sizeof(double) * std::size_t(kWindowLen) * kFeatureDim);
          states.mutable_data()[i] = int(w.state);
          starts.mutable_data()[i] = int(w.start_frame);
        }
        return py::make_tuple(values, states, starts);
      },
      py::arg("features"), py::arg("frame_tasks"),
      "Cut a feature series into windows; returns (windows[n,40,266], "
      "states[n], start_frames[n]). State 1 = distracted.");

  m.def(
      "nn1_predict",
      [](const Array& train_values, const IntArray& train_states,
         const Array& query_values) {
        const std::vector<Window> train =
            windows_from_array(train_values, &train_states);
        const std::vector<Window> queries =
            windows_from_array(query_values, nullptr);
        return states_to_array(nn1_classify_batch(train, queries));
      },
      py::arg("train_windows"), py::arg("train_states"), py::arg("windows"),
      "1-nearest-neighbour prediction (squared Euclidean over the raw "
      "window).");

  m.def(
      "evaluate_metrics",
      [](const IntArray& truth, const IntArray& predicted) {
        if (truth.ndim() != 1 || predicted.ndim() != 1 ||
            truth.shape(0) != predicted.shape(0))
          throw DataError("truth and predicted must have equal length");
        std::vector<State> t, p;
        for (py::ssize_t i = 0; i < truth.shape(0); ++i) {
          t.push_back(truth.data()[i] != 0 ? State::DISTRACTED
                                           : State::FOCUSED);
          p.push_back(predicted.data()[i] != 0 ? State::DISTRACTED
                                               : State::FOCUSED);
        }
        const Metrics met = compute_metrics(t, p);
        py::dict d;
        d["accuracy"] = met.accuracy;
        d["precision_distracted"] = met.precision_distracted;
        d["recall_distracted"] = met.recall_distracted;
        d["f1_distracted"] = met.f1_distracted;
        d["precision_driving"] = met.precision_driving;
        d["recall_driving"] = met.recall_driving;
        d["f1_driving"] = met.f1_driving;
        return d;
      },
      py::arg("truth"), py::arg("predicted"),
      "Accuracy/precision/recall/F1 for both classes (1 = distracted).");

  py::class_<PyRocket>(m, "Rocket",
                       "Random convolutional kernels + ridge classifier.")
      .def(py::init<int, std::uint64_t>(), py::arg("num_kernels") = 500,
           py::arg("seed") = 0)
      .def("fit", &PyRocket::fit, py::arg("windows"), py::arg("states"))
      .def("predict", &PyRocket::predict, py::arg("windows"))
      .def("decision_scores", &PyRocket::decision_scores, py::arg("windows"),
           "Raw ridge scores; >= 0 means distracted.")
      .def("save", &PyRocket::save, py::arg("path"))
      .def_static("load", &PyRocket::load, py::arg("path"));

  py::class_<PyNeuralNet>(m, "NeuralNet",
                          "Single-window neural classifiers (fcn, resnet).")
      .def(py::init<const std::string&, std::uint64_t>(), py::arg("kind"),
           py::arg("seed") = 0)
      .def("fit", &PyNeuralNet::fit, py::arg("windows"), py::arg("states"),
           py::arg("epochs") = 20, py::arg("batch_size") = 32,
           py::arg("learning_rate") = 1e-3)
      .def("predict", &PyNeuralNet::predict, py::arg("windows"))
      .def("predict_proba", &PyNeuralNet::predict_proba, py::arg("windows"))
      .def("history", &PyNeuralNet::history,
           "Per-epoch [epoch, train_loss, train_acc, val_loss, val_acc].")
      .def("save", &PyNeuralNet::save, py::arg("path"))
      .def_static("load", &PyNeuralNet::load, py::arg("path"))
      .def_property_readonly("kind", &PyNeuralNet::kind);
}
