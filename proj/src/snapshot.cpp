#include "fchlab/snapshot.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace fch {

namespace {

double parse_number(const std::string& s, const std::string& what) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw SnapshotError("snapshot: malformed " + what + " '" + s + "'");
  }
  return v;
}

std::string header_value(std::istringstream& in, const char* key, std::size_t& line_no) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::string prefix = std::string(key) + "=";
    if (line.rfind(prefix, 0) != 0) {
      throw SnapshotError("snapshot: malformed header at line " + std::to_string(line_no) + ", expected '" +
                          prefix + "...', got '" + line + "'");
    }
    return line.substr(prefix.size());
  }
  throw SnapshotError(std::string("snapshot: missing header line '") + key + "='");
}

}  // namespace

std::string format_snapshot(const Field& f, double a, double t) {
  std::string out;
  char buf[64];
  out += "N=" + std::to_string(f.size()) + "\n";
  std::snprintf(buf, sizeof buf, "L=%.17g\n", f.grid().length());
  out += buf;
  std::snprintf(buf, sizeof buf, "a=%.17g\n", a);
  out += buf;
  std::snprintf(buf, sizeof buf, "t=%.17g\n", t);
  out += buf;
  for (double v : f.samples()) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out += buf;
  }
  return out;
}

Snapshot parse_snapshot(const std::string& text) {
  std::istringstream in(text);
  std::size_t line_no = 0;
  const std::string n_str = header_value(in, "N", line_no);
  if (n_str.empty() || n_str.find_first_not_of("0123456789") != std::string::npos) {
    throw SnapshotError("snapshot: malformed header N='" + n_str + "'");
  }
  const auto n = static_cast<std::size_t>(std::strtoull(n_str.c_str(), nullptr, 10));
  const double length = parse_number(header_value(in, "L", line_no), "header L");
  const double a = parse_number(header_value(in, "a", line_no), "header a");
  const double t = parse_number(header_value(in, "t", line_no), "header t");

  std::vector<double> samples;
  samples.reserve(n);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    samples.push_back(parse_number(line, "sample at line " + std::to_string(line_no)));
  }
  if (samples.size() != n) {
    throw SnapshotError("snapshot: header declares N=" + std::to_string(n) + " samples, found " +
                        std::to_string(samples.size()));
  }
  PeriodicGrid grid = [&] {
    try {
      return PeriodicGrid(n, length);
    } catch (const std::exception& e) {
      throw SnapshotError(std::string("snapshot: invalid grid: ") + e.what());
    }
  }();
  return Snapshot{Field(grid, std::move(samples)), a, t};
}

void save_snapshot(const Field& f, double a, double t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SnapshotError("snapshot: cannot write " + path);
  out << format_snapshot(f, a, t);
  if (!out) throw SnapshotError("snapshot: write failed for " + path);
}

Snapshot load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("snapshot: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_snapshot(ss.str());
}

}  // namespace fch
