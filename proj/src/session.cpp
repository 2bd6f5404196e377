#include "edd/session.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "edd/labels.hpp"
#include "edd/text.hpp"

namespace edd {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string expected_header() {
  const auto& layout = ChannelLayout::standard();
  std::string h = "t";
  for (const auto& name : layout.names) h += "," + name;
  h += ",task";
  return h;
}

}  // namespace

void RawSession::validate() const {
  if (samples.cols() != kNumChannels)
    throw DataError("session: channel count mismatch");
  if (samples.rows() < kMinSessionSamples)
    throw DataError("session too short: need at least 256 samples");
  if (tasks.size() != static_cast<std::size_t>(samples.rows()))
    throw DataError("session: task annotation length mismatch");
  if (sample_rate != kSampleRate)
    throw DataError("session: sample rate must be 128 Hz");
  for (int t : tasks) {
    if (t < 0 || t >= kNumTasks)
      throw DataError("session: task id outside 0..15");
  }
}

RawSession load_raw_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path);

  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  {
    // tolerate a trailing \r from CRLF files
    std::string header = line;
    if (!header.empty() && header.back() == '\r') header.pop_back();
    if (header != expected_header()) {
      const auto ncols = split_csv_line(line).size();
      if (ncols != std::size_t(kNumChannels) + 2)
        throw DataError(path + ": channel count mismatch in header (" +
                        std::to_string(ncols) + " columns)");
      throw DataError(path + ": unexpected header '" + header + "'");
    }
  }

  std::vector<double> t_col;
  std::vector<double> values;  // row-major T x 14
  std::vector<int> tasks;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != std::size_t(kNumChannels) + 2)
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": channel count mismatch (" +
                      std::to_string(fields.size()) + " columns)");
    const std::string ctx = path + ":" + std::to_string(lineno);
    const double t = parse_double(fields[0], ctx);
    if (!t_col.empty() && t <= t_col.back())
      throw DataError(ctx + ": non-monotonic time");
    t_col.push_back(t);
    for (int c = 0; c < kNumChannels; ++c)
      values.push_back(parse_double(fields[c + 1], ctx));
    const long task = parse_long(fields[kNumChannels + 1], ctx);
    if (task < 0 || task >= kNumTasks)
      throw DataError(ctx + ": task id outside 0..15");
    tasks.push_back(static_cast<int>(task));
  }

  const auto rows = static_cast<Eigen::Index>(t_col.size());
  if (rows < kMinSessionSamples)
    throw DataError(path + ": fewer than 256 data rows (" +
                    std::to_string(rows) + ")");

  RawSession s;
  s.samples.resize(rows, kNumChannels);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (int c = 0; c < kNumChannels; ++c)
      s.samples(r, c) = values[std::size_t(r) * kNumChannels + c];
  s.tasks = std::move(tasks);
  s.validate();
  return s;
}

void save_raw_csv(const RawSession& session, const std::string& path) {
  session.validate();
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << expected_header() << "\n";
  const Eigen::Index rows = session.num_samples();
  std::string linebuf;
  for (Eigen::Index r = 0; r < rows; ++r) {
    linebuf = format_double(double(r) / session.sample_rate);
    for (int c = 0; c < kNumChannels; ++c) {
      linebuf += ',';
      linebuf += format_double(session.samples(r, c));
    }
    linebuf += ',';
    linebuf += std::to_string(session.tasks[std::size_t(r)]);
    linebuf += '\n';
    out << linebuf;
  }
  if (!out) throw DataError("write failed: " + path);
}

}  // namespace edd
