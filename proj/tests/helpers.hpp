#pragma once

// Shared fixtures for the unit tests: deterministic random data builders and
// a scratch directory that is wiped per use. Everything is seeded so a
// failing case can be replayed exactly.

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "edd/rng.hpp"
#include "edd/segmentation.hpp"
#include "edd/session.hpp"

namespace testutil {

// Fresh empty directory under the system temp root; removed and recreated on
// every call so tests never see a previous run's files.
inline std::string scratch_dir(const std::string& name) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("edd_tests_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

inline double db(double gain) { return 20.0 * std::log10(gain); }

// Random session with valid task ids; values roughly EEG-scaled.
inline edd::RawSession random_session(std::size_t samples, std::uint64_t seed,
                                      edd::ParticipantId id = 1) {
  edd::Rng rng(seed);
  edd::RawSession s;
  s.participant_id = id;
  s.sample_rate = edd::kSampleRate;
  s.samples.resize(static_cast<Eigen::Index>(samples), edd::kNumChannels);
  s.tasks.resize(samples);
  for (std::size_t t = 0; t < samples; ++t) {
    for (int c = 0; c < edd::kNumChannels; ++c)
      s.samples(static_cast<Eigen::Index>(t), c) = 30.0 * rng.normal();
    s.tasks[t] = rng.uniform_int(0, edd::kNumTasks - 1);
  }
  return s;
}

// Random window with a chosen label and position.
inline edd::Window random_window(std::uint64_t seed, edd::State state,
                                 edd::ParticipantId id, int start_frame) {
  edd::Rng rng(seed);
  edd::Window w;
  w.participant_id = id;
  w.state = state;
  w.start_frame = static_cast<std::uint32_t>(start_frame);
  w.values.resize(std::size_t(edd::kWindowLen) * edd::kFeatureDim);
  for (double& v : w.values) v = rng.normal();
  return w;
}

// Two-class window set that is linearly separable: DISTRACTED windows get a
// +delta shift on the first `k` features. Useful for classifier sanity tests.
inline std::vector<edd::Window> separable_windows(int per_class, double delta,
                                                  std::uint64_t seed,
                                                  edd::ParticipantId id = 1,
                                                  int k = 16) {
  std::vector<edd::Window> out;
  edd::Rng rng(seed);
  for (int i = 0; i < 2 * per_class; ++i) {
    const edd::State st =
        i < per_class ? edd::State::DISTRACTED : edd::State::FOCUSED;
    edd::Window w = random_window(rng.next_u64(), st, id, 20 * i);
    if (st == edd::State::DISTRACTED) {
      for (int t = 0; t < edd::kWindowLen; ++t)
        for (int f = 0; f < k; ++f)
          w.values[std::size_t(t) * edd::kFeatureDim + f] += delta;
    }
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace testutil
