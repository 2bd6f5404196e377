#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "edd/bands.hpp"
#include "edd/channels.hpp"
#include "edd/session.hpp"

namespace edd {

// Recipe for the synthetic EEG corpus. Each channel is a sum of five
// band-limited sinusoids (one per frequency band, phase persistent across
// the whole session) plus white noise; task blocks alternate so that the
// DISTRACTED share of session time tracks `distracted_fraction`. State
// effects enter as per-region amplitude multipliers: a channel's band
// amplitude is the base amplitude times the product of the multipliers of
// every region containing that channel.
struct GeneratorProfile {
  int participants = 6;
  double session_seconds = 300.0;
  double block_min_seconds = 40.0;
  double block_max_seconds = 90.0;
  double distracted_fraction = 0.36;
  std::array<double, kNumBands> base_amplitude = {20.0, 18.0, 12.0, 8.0, 6.0};
  double noise_sigma = 3.0;
  // [state][region][band]; defaults are 1 except the distracted frontal
  // theta/alpha boost that makes the two states separable.
  std::array<std::array<std::array<double, kNumBands>, kNumRegions>, 2>
      multipliers;

  GeneratorProfile();

  void validate() const;  // ConfigError on out-of-range fields

  // Effective amplitude of `band` on `channel` in `state`.
  double amplitude(State state, int channel, int band) const;
};

// Deterministic session synthesis. Draw order from the seed: task schedule,
// then per-channel per-band frequency and phase, then the per-sample noise
// stream.
RawSession generate_session(const GeneratorProfile& profile,
                            ParticipantId participant_id, std::uint64_t seed);

// One session per participant (ids 1..N), each with a seed derived from
// (seed, participant index).
std::vector<RawSession> generate_corpus(const GeneratorProfile& profile,
                                        std::uint64_t seed);

}  // namespace edd
