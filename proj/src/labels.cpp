#include "edd/labels.hpp"

#include <fstream>
#include <sstream>

namespace edd {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

State map_task_to_state(int task, const LabelMap& map) {
  return map.state_of(task);
}

LabelMap load_label_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open label map: " + path);

  LabelMap map;
  std::array<bool, kNumTasks> seen{};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected task_id=STATE");
    int task = -1;
    try {
      task = std::stoi(trim(t.substr(0, eq)));
    } catch (const std::exception&) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": bad task id");
    }
    if (task < 0 || task >= kNumTasks)
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": task id out of range 0..15");
    const std::string state = trim(t.substr(eq + 1));
    if (state == "DISTRACTED") {
      map.entries[task] = State::DISTRACTED;
    } else if (state == "FOCUSED") {
      map.entries[task] = State::FOCUSED;
    } else {
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": state must be DISTRACTED or FOCUSED, got '" + state +
                        "'");
    }
    seen[task] = true;
  }
  for (int i = 0; i < kNumTasks; ++i) {
    if (!seen[i])
      throw ConfigError(path + ": label map incomplete, task " +
                        std::to_string(i) + " missing");
  }
  return map;
}

void save_label_map(const LabelMap& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write label map: " + path);
  for (int i = 0; i < kNumTasks; ++i)
    out << i << "=" << to_string(map.entries[i]) << "\n";
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace edd
