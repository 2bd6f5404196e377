#pragma once

#include <array>
#include <string>

#include "edd/common.hpp"

namespace edd {

inline constexpr int kNumTasks = 16;

// Total map from the 16 recorded task ids to the binary driver state.
// Which tasks count as distraction is session-design dependent, so the map
// is loadable from a config file; the default matches the bundled synthetic
// schedules (task 0 is plain driving, everything else a distraction task).
struct LabelMap {
  std::array<State, kNumTasks> entries;

  static LabelMap default_synthetic() {
    LabelMap m;
    m.entries[0] = State::FOCUSED;
    for (int i = 1; i < kNumTasks; ++i) m.entries[i] = State::DISTRACTED;
    return m;
  }

  State state_of(int task) const {
    if (task < 0 || task >= kNumTasks)
      throw ConfigError("task id out of range 0..15: " + std::to_string(task));
    return entries[static_cast<std::size_t>(task)];
  }
};

State map_task_to_state(int task, const LabelMap& map);

// File format: one `task_id=STATE` line per task, all 16 required.
LabelMap load_label_map(const std::string& path);
void save_label_map(const LabelMap& map, const std::string& path);

}  // namespace edd
