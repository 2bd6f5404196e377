#include "edd/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "edd/segmentation.hpp"
#include "edd/spectrum.hpp"

namespace edd {
namespace {

std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  const auto a = s.find_first_not_of(ws);
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(ws);
  return s.substr(a, b - a + 1);
}

long to_long(const std::string& v) {
  long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("cannot parse integer '" + v + "'");
  return out;
}

std::uint64_t to_seed(const std::string& v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("cannot parse seed '" + v + "'");
  return out;
}

double to_double(const std::string& v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("cannot parse number '" + v + "'");
  return out;
}

bool to_bool(const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("expected true or false, got '" + v + "'");
}

int to_count(const std::string& v, long lo) {
  const long n = to_long(v);
  if (n < lo)
    throw ConfigError("must be at least " + std::to_string(lo) + ", got '" +
                      v + "'");
  return int(n);
}

std::vector<std::string> to_name_list(const std::string& v) {
  std::vector<std::string> names;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty entry in list '" + v + "'");
    names.push_back(item);
  }
  if (names.empty()) throw ConfigError("empty list");
  return names;
}

// Boost dials rewrite the DISTRACTED multiplier of both frontal regions.
void set_frontal_boost(PipelineConfig& c, int band, double m) {
  if (!(m > 0.0)) throw ConfigError("multiplier must be > 0");
  auto& distracted = c.generator.multipliers[std::size_t(State::DISTRACTED)];
  distracted[0][std::size_t(band)] = m;
  distracted[1][std::size_t(band)] = m;
}

using Setter = std::function<void(PipelineConfig&, const std::string&)>;

struct KeyEntry {
  const char* name;
  Setter set;
};

// The framing geometry is compiled in; the keys exist so configs can state
// it, but any value other than the built-in one is an error.
Setter fixed_value(const char* what, int expected) {
  return [what, expected](PipelineConfig&, const std::string& v) {
    if (to_long(v) != expected)
      throw ConfigError(std::string(what) + " is fixed at " +
                        std::to_string(expected) + " in this build");
  };
}

const std::vector<KeyEntry>& key_table() {
  static const std::vector<KeyEntry> table = {
      {"paths.out_dir",
       [](PipelineConfig& c, const std::string& v) { c.out_dir = v; }},
      {"labels.file",
       [](PipelineConfig& c, const std::string& v) { c.labels_file = v; }},

      {"generator.participants",
       [](PipelineConfig& c, const std::string& v) {
         c.generator.participants = to_count(v, 1);
       }},
      {"generator.session_seconds",
       [](PipelineConfig& c, const std::string& v) {
         c.generator.session_seconds = to_double(v);
       }},
      {"generator.block_min_seconds",
       [](PipelineConfig& c, const std::string& v) {
         c.generator.block_min_seconds = to_double(v);
       }},
      {"generator.block_max_seconds",
       [](PipelineConfig& c, const std::string& v) {
         c.generator.block_max_seconds = to_double(v);
       }},
      {"generator.distracted_fraction",
       [](PipelineConfig& c, const std::string& v) {
         c.generator.distracted_fraction = to_double(v);
       }},
      {"generator.noise_sigma",
       [](PipelineConfig& c, const std::string& v) {
         c.generator.noise_sigma = to_double(v);
       }},
      {"generator.theta_boost",
       [](PipelineConfig& c, const std::string& v) {
         set_frontal_boost(c, 0, to_double(v));
       }},
      {"generator.alpha_boost",
       [](PipelineConfig& c, const std::string& v) {
         set_frontal_boost(c, 1, to_double(v));
       }},
      {"generator.seed",
       [](PipelineConfig& c, const std::string& v) {
         c.generator_seed = to_seed(v);
       }},

      {"split.train",
       [](PipelineConfig& c, const std::string& v) {
         c.split.n_train = to_count(v, 1);
       }},
      {"split.val",
       [](PipelineConfig& c, const std::string& v) {
         c.split.n_val = to_count(v, 0);
       }},
      {"split.test",
       [](PipelineConfig& c, const std::string& v) {
         c.split.n_test = to_count(v, 1);
       }},
      {"split.seed",
       [](PipelineConfig& c, const std::string& v) {
         c.split.seed = to_seed(v);
       }},
      {"split.file",
       [](PipelineConfig& c, const std::string& v) { c.split.file = v; }},

      {"experiment.reps",
       [](PipelineConfig& c, const std::string& v) {
         c.experiment.reps = to_count(v, 1);
       }},
      {"experiment.base_seed",
       [](PipelineConfig& c, const std::string& v) {
         c.experiment.base_seed = to_seed(v);
       }},
      {"experiment.models",
       [](PipelineConfig& c, const std::string& v) {
         c.experiment.models = to_name_list(v);
       }},
      {"rocket.kernels",
       [](PipelineConfig& c, const std::string& v) {
         c.experiment.rocket_kernels = to_count(v, 1);
       }},

      {"train.batch_size",
       [](PipelineConfig& c, const std::string& v) {
         c.experiment.train.batch_size = to_count(v, 1);
       }},
      {"train.max_epochs",
       [](PipelineConfig& c, const std::string& v) {
         c.experiment.train.max_epochs = to_count(v, 1);
       }},
      {"train.learning_rate",
       [](PipelineConfig& c, const std::string& v) {
         c.experiment.train.learning_rate = to_double(v);
       }},
      {"train.beta1",
       [](PipelineConfig& c, const std::string& v) {
         c.experiment.train.beta1 = to_double(v);
       }},
      {"train.beta2",
       [](PipelineConfig& c, const std::string& v) {
         c.experiment.train.beta2 = to_double(v);
       }},
      {"train.epsilon",
       [](PipelineConfig& c, const std::string& v) {
         c.experiment.train.epsilon = to_double(v);
       }},
      {"train.patience",
       [](PipelineConfig& c, const std::string& v) {
         c.experiment.train.patience = to_count(v, 1);
       }},
      {"train.restore_best",
       [](PipelineConfig& c, const std::string& v) {
         c.experiment.train.restore_best = to_bool(v);
       }},
      {"model.lstm_hidden",
       [](PipelineConfig& c, const std::string& v) {
         c.experiment.fcn_lstm.lstm_hidden = to_count(v, 1);
       }},

      {"stft.window_len", fixed_value("stft.window_len", kFrameLen)},
      {"stft.stride", fixed_value("stft.stride", kFrameStride)},
      {"window.len", fixed_value("window.len", kWindowLen)},
      {"window.hop", fixed_value("window.hop", kWindowHop)},
      {"window.sequence", fixed_value("window.sequence", kSequenceLen)},
  };
  return table;
}

const KeyEntry* find_key(const std::string& name) {
  for (const KeyEntry& e : key_table())
    if (name == e.name) return &e;
  return nullptr;
}

}  // namespace

void PipelineConfig::validate() const {
  if (out_dir.empty()) throw ConfigError("paths.out_dir must not be empty");
  generator.validate();
  experiment.validate();
}

std::vector<std::string> config_key_names() {
  std::vector<std::string> names;
  for (const KeyEntry& e : key_table()) names.emplace_back(e.name);
  return names;
}

PipelineConfig parse_pipeline_config(const std::string& text,
                                     const std::string& source) {
  PipelineConfig config;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string loc = source + ":" + std::to_string(lineno) + ": ";
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(loc + "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(loc + "missing key before '='");
    if (value.empty())
      throw ConfigError(loc + "missing value for key '" + key + "'");
    const auto [it, inserted] = seen.emplace(key, lineno);
    if (!inserted)
      throw ConfigError(loc + "duplicate key '" + key + "' (first set at line " +
                        std::to_string(it->second) + ")");
    const KeyEntry* entry = find_key(key);
    if (!entry) throw ConfigError(loc + "unknown key '" + key + "'");
    try {
      entry->set(config, value);
    } catch (const ConfigError& ex) {
      throw ConfigError(loc + key + ": " + ex.what());
    }
  }
  return config;
}

PipelineConfig load_pipeline_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_pipeline_config(buf.str(), path);
}

void apply_config_override(PipelineConfig& config,
                           const std::string& assignment) {
  const std::string loc = "override '" + assignment + "': ";
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError(loc + "expected key=value");
  const std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  if (key.empty()) throw ConfigError(loc + "missing key before '='");
  if (value.empty()) throw ConfigError(loc + "missing value");
  const KeyEntry* entry = find_key(key);
  if (!entry) throw ConfigError(loc + "unknown key '" + key + "'");
  try {
    entry->set(config, value);
  } catch (const ConfigError& ex) {
    throw ConfigError(loc + ex.what());
  }
}

}  // namespace edd
