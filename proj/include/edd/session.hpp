#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "edd/channels.hpp"
#include "edd/common.hpp"

namespace edd {

inline constexpr double kSampleRate = 128.0;
inline constexpr int kMinSessionSamples = 256;  // one spectral frame

// One participant's recording: T samples x 14 channels in microvolts plus a
// per-sample task id in 0..15. Immutable after construction.
struct RawSession {
  ParticipantId participant_id = 0;
  double sample_rate = kSampleRate;
  Eigen::MatrixXd samples;     // T x 14
  std::vector<int> tasks;      // length T

  Eigen::Index num_samples() const { return samples.rows(); }

  void validate() const;
};

// Raw CSV: header `t,AF3,...,AF4,task`, t in seconds, strictly increasing.
RawSession load_raw_csv(const std::string& path);
void save_raw_csv(const RawSession& session, const std::string& path);

}  // namespace edd
