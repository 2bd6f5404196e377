#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace edd {

// Driver state. DISTRACTED is the positive class everywhere (ridge target
// +1, softmax class int(State) = 1, confusion-matrix row 0) and wins all
// declared tie-breaks.
enum class State : std::uint8_t { DISTRACTED = 1, FOCUSED = 0 };

inline const char* to_string(State s) {
  return s == State::DISTRACTED ? "DISTRACTED" : "FOCUSED";
}

using ParticipantId = std::uint32_t;

// Error taxonomy, mapped to CLI exit codes: ConfigError -> 2,
// DataError -> 3, TrainingDiverged -> 4.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class TrainingDiverged : public std::runtime_error {
 public:
  explicit TrainingDiverged(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace edd
