#include "edd/split.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "edd/rng.hpp"
#include "edd/text.hpp"

namespace edd {

DatasetSplit::Role DatasetSplit::role_of(ParticipantId id) const {
  auto contains = [id](const std::vector<ParticipantId>& v) {
    return std::find(v.begin(), v.end(), id) != v.end();
  };
  if (contains(train)) return Role::Train;
  if (contains(val)) return Role::Val;
  if (contains(test)) return Role::Test;
  return Role::None;
}

void DatasetSplit::validate(const std::vector<ParticipantId>& participants) const {
  std::set<ParticipantId> seen;
  for (const auto* group : {&train, &val, &test}) {
    for (ParticipantId id : *group) {
      if (!seen.insert(id).second)
        throw DataError("split: participant " + std::to_string(id) +
                        " assigned twice");
    }
  }
  for (ParticipantId id : participants) {
    if (!seen.count(id))
      throw DataError("split: participant " + std::to_string(id) +
                      " unassigned");
  }
  if (seen.size() != participants.size())
    throw DataError("split: contains unknown participants");
}

DatasetSplit split_by_participant(std::vector<ParticipantId> participants,
                                  SplitCounts counts, std::uint64_t seed) {
  const auto total = counts.n_train + counts.n_val + counts.n_test;
  if (counts.n_train < 0 || counts.n_val < 0 || counts.n_test < 0 ||
      std::size_t(total) != participants.size())
    throw ConfigError("split counts " + std::to_string(counts.n_train) + "/" +
                      std::to_string(counts.n_val) + "/" +
                      std::to_string(counts.n_test) + " do not sum to " +
                      std::to_string(participants.size()) + " participants");

  // Canonical order before shuffling so the result depends only on the set
  // of ids, the counts and the seed.
  std::sort(participants.begin(), participants.end());
  Rng rng(seed);
  rng.shuffle(participants);

  DatasetSplit split;
  split.seed = seed;
  auto it = participants.begin();
  split.train.assign(it, it + counts.n_train);
  it += counts.n_train;
  split.val.assign(it, it + counts.n_val);
  it += counts.n_val;
  split.test.assign(it, it + counts.n_test);
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.val.begin(), split.val.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

DatasetSplit load_split(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open split file: " + path);
  DatasetSplit split;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": expected participant_id,role");
    const std::string ctx = path + ":" + std::to_string(lineno);
    const long id = parse_long(line.substr(0, comma), ctx);
    const std::string role = line.substr(comma + 1);
    if (role == "train") {
      split.train.push_back(static_cast<ParticipantId>(id));
    } else if (role == "val") {
      split.val.push_back(static_cast<ParticipantId>(id));
    } else if (role == "test") {
      split.test.push_back(static_cast<ParticipantId>(id));
    } else {
      throw DataError(ctx + ": role must be train, val or test, got '" + role +
                      "'");
    }
  }
  return split;
}

void save_split(const DatasetSplit& split, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write split file: " + path);
  for (ParticipantId id : split.train) out << id << ",train\n";
  for (ParticipantId id : split.val) out << id << ",val\n";
  for (ParticipantId id : split.test) out << id << ",test\n";
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace edd
