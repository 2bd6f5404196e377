#include "edd/synthgen.hpp"

#include <cmath>

#include "edd/labels.hpp"
#include "edd/rng.hpp"

namespace edd {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

GeneratorProfile::GeneratorProfile() {
  for (auto& per_state : multipliers)
    for (auto& per_region : per_state) per_region.fill(1.0);
  // Distracted signature: frontal theta x1.8 and alpha x1.4, both
  // hemispheres. Chosen only to create a learnable signal.
  auto& distracted = multipliers[std::size_t(State::DISTRACTED)];
  distracted[0][0] = 1.8;  // left-frontal theta
  distracted[1][0] = 1.8;  // right-frontal theta
  distracted[0][1] = 1.4;  // left-frontal alpha
  distracted[1][1] = 1.4;  // right-frontal alpha
}

void GeneratorProfile::validate() const {
  if (participants < 1)
    throw ConfigError("generator: participants must be >= 1");
  if (!(session_seconds >= 4.0))
    throw ConfigError("generator: session duration must be >= 4 s");
  if (!(block_min_seconds > 0.0) || !(block_max_seconds >= block_min_seconds))
    throw ConfigError("generator: invalid block duration range");
  if (!(distracted_fraction > 0.0 && distracted_fraction < 1.0))
    throw ConfigError("generator: distracted fraction must be in (0, 1)");
  for (double a : base_amplitude)
    if (!(a >= 0.0)) throw ConfigError("generator: negative base amplitude");
  if (!(noise_sigma >= 0.0))
    throw ConfigError("generator: negative noise sigma");
  for (const auto& per_state : multipliers)
    for (const auto& per_region : per_state)
      for (double m : per_region)
        if (!(m > 0.0))
          throw ConfigError("generator: multipliers must be > 0");
}

double GeneratorProfile::amplitude(State state, int channel, int band) const {
  const ChannelLayout& layout = ChannelLayout::standard();
  double mult = 1.0;
  for (int r = 0; r < kNumRegions; ++r) {
    const auto& region = layout.regions[std::size_t(r)];
    for (int idx : region)
      if (idx == channel) {
        mult *= multipliers[std::size_t(state)][std::size_t(r)]
                           [std::size_t(band)];
        break;
      }
  }
  return base_amplitude[std::size_t(band)] * mult;
}

RawSession generate_session(const GeneratorProfile& profile,
                            ParticipantId participant_id, std::uint64_t seed) {
  profile.validate();
  const LabelMap labels = LabelMap::default_synthetic();
  const Eigen::Index total =
      Eigen::Index(std::llround(profile.session_seconds * kSampleRate));

  Rng rng(seed);

  // 1) Task schedule: alternating blocks; each block takes whichever state
  // keeps the running DISTRACTED share closest to the target.
  std::vector<int> tasks(std::size_t(total), 0);
  Eigen::Index t = 0;
  Eigen::Index distracted_samples = 0;
  while (t < total) {
    const double elapsed_fraction =
        t == 0 ? 0.0 : double(distracted_samples) / double(t);
    const bool distracted = elapsed_fraction < profile.distracted_fraction;
    const double seconds =
        rng.uniform(profile.block_min_seconds, profile.block_max_seconds);
    const Eigen::Index len = std::min<Eigen::Index>(
        total - t, std::max<Eigen::Index>(
                       1, Eigen::Index(std::llround(seconds * kSampleRate))));
    // Task 0 is the FOCUSED (plain driving) task; 1..15 are distractions.
    const int task = distracted ? rng.uniform_int(1, kNumTasks - 1) : 0;
    for (Eigen::Index i = t; i < t + len; ++i)
      tasks[std::size_t(i)] = task;
    if (distracted) distracted_samples += len;
    t += len;
  }

  // 2) One sinusoid per (channel, band): frequency inside the band (capped
  // at the 40 Hz analysis edge) and a persistent phase. Draws keep a margin
  // from the band edges: the outermost edges coincide with the 4/40 Hz
  // band-pass corners where gain falls off steeply, and edge draws would
  // give each participant an idiosyncratic power baseline that classifiers
  // trained on other participants cannot transfer across.
  const BandTable bands = default_band_table();
  constexpr double kEdgeMargin = 0.2;  // fraction of usable band width
  std::array<std::array<double, kNumBands>, kNumChannels> freq{};
  std::array<std::array<double, kNumBands>, kNumChannels> phase{};
  for (int c = 0; c < kNumChannels; ++c)
    for (int b = 0; b < kNumBands; ++b) {
      const double lo = bands[std::size_t(b)].lo;
      const double hi = std::min(bands[std::size_t(b)].hi, 40.0);
      const double margin = kEdgeMargin * (hi - lo);
      freq[std::size_t(c)][std::size_t(b)] =
          rng.uniform(lo + margin, hi - margin);
      phase[std::size_t(c)][std::size_t(b)] = rng.uniform(0.0, kTwoPi);
    }

  // Amplitude lookup per (state, channel, band).
  std::array<std::array<std::array<double, kNumBands>, kNumChannels>, 2> amp{};
  for (int s = 0; s < 2; ++s)
    for (int c = 0; c < kNumChannels; ++c)
      for (int b = 0; b < kNumBands; ++b)
        amp[std::size_t(s)][std::size_t(c)][std::size_t(b)] =
            profile.amplitude(State(s), c, b);

  // 3) Samples: sinusoid sum plus white noise, noise drawn sample-major.
  RawSession session;
  session.participant_id = participant_id;
  session.sample_rate = kSampleRate;
  session.tasks = std::move(tasks);
  session.samples.resize(total, kNumChannels);
  for (Eigen::Index i = 0; i < total; ++i) {
    const double time_s = double(i) / kSampleRate;
    const State state = labels.state_of(session.tasks[std::size_t(i)]);
    for (int c = 0; c < kNumChannels; ++c) {
      double v = 0.0;
      for (int b = 0; b < kNumBands; ++b)
        v += amp[std::size_t(state)][std::size_t(c)][std::size_t(b)] *
             std::sin(kTwoPi * freq[std::size_t(c)][std::size_t(b)] * time_s +
                      phase[std::size_t(c)][std::size_t(b)]);
      v += profile.noise_sigma * rng.normal();
      session.samples(i, c) = v;
    }
  }
  session.validate();
  return session;
}

std::vector<RawSession> generate_corpus(const GeneratorProfile& profile,
                                        std::uint64_t seed) {
  profile.validate();
  std::vector<RawSession> corpus;
  corpus.reserve(std::size_t(profile.participants));
  for (int p = 0; p < profile.participants; ++p)
    corpus.push_back(generate_session(profile, ParticipantId(p + 1),
                                      derive_seed(seed, std::uint64_t(p))));
  return corpus;
}

}  // namespace edd
