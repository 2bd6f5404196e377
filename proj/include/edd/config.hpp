#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edd/experiment.hpp"
#include "edd/synthgen.hpp"

namespace edd {

// How participants are assigned to train/val/test. When `file` is set the
// assignment is read from that CSV instead of being drawn from `seed`.
struct SplitSettings {
  int n_train = 4;
  int n_val = 1;
  int n_test = 1;
  std::uint64_t seed = 7;
  std::string file;
};

// Everything the CLI stages need, with defaults matching the desk profile
// (6 participants x 300 s, 4/1/1 split, 5 repetitions).
struct PipelineConfig {
  std::string out_dir = "out";
  std::string labels_file;  // optional task->state map; built-in map otherwise
  GeneratorProfile generator;
  std::uint64_t generator_seed = 1;
  SplitSettings split;
  ExperimentConfig experiment;

  void validate() const;  // ConfigError on out-of-range fields
};

// Names every accepted `section.key`, for diagnostics and docs.
std::vector<std::string> config_key_names();

// Parses flat `key = value` text. Full-line `#` comments and blank lines are
// skipped; anything else must be a known key with a parseable value, and each
// key may appear once. Failures carry `source:line:` prefixes (ConfigError).
PipelineConfig parse_pipeline_config(const std::string& text,
                                     const std::string& source);
PipelineConfig load_pipeline_config(const std::string& path);

// Applies one `key=value` assignment (the CLI's --set flag). Unknown keys or
// bad values raise ConfigError naming the assignment.
void apply_config_override(PipelineConfig& config,
                           const std::string& assignment);

}  // namespace edd
