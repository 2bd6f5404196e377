#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edd/common.hpp"

namespace edd {

// Participant-level split. Splitting by participant (not by window) is what
// prevents leakage: every window inherits its session's role.
struct DatasetSplit {
  std::vector<ParticipantId> train;
  std::vector<ParticipantId> val;
  std::vector<ParticipantId> test;
  std::uint64_t seed = 0;

  enum class Role { Train, Val, Test, None };
  Role role_of(ParticipantId id) const;
  void validate(const std::vector<ParticipantId>& participants) const;
};

struct SplitCounts {
  int n_train = 0;
  int n_val = 0;
  int n_test = 0;
};

// Uniformly random disjoint assignment, deterministic given seed.
DatasetSplit split_by_participant(std::vector<ParticipantId> participants,
                                  SplitCounts counts, std::uint64_t seed);

// File format: `participant_id,role` lines with role in {train,val,test}.
DatasetSplit load_split(const std::string& path);
void save_split(const DatasetSplit& split, const std::string& path);

}  // namespace edd
