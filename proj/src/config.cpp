#include "fchlab/config.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace fch {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  // Shortest text that reads back to the same double.
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double to_double(const std::string& value, std::size_t line, const std::string& key) {
  if (value == "inf" || value == "infinity") return std::numeric_limits<double>::infinity();
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ConfigError(line, key, "expected a real number, got '" + value + "'");
  }
  return v;
}

std::uint64_t to_unsigned(const std::string& value, std::size_t line, const std::string& key) {
  if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError(line, key, "expected a non-negative integer, got '" + value + "'");
  }
  errno = 0;
  const unsigned long long v = std::strtoull(value.c_str(), nullptr, 10);
  if (errno == ERANGE) throw ConfigError(line, key, "integer out of range: '" + value + "'");
  return v;
}

bool to_bool(const std::string& value, std::size_t line, const std::string& key) {
  if (value == "true" || value == "on" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "off" || value == "0" || value == "no") return false;
  throw ConfigError(line, key, "expected true/false/on/off, got '" + value + "'");
}

struct KeySpec {
  const char* help;
  std::function<void(RunConfig&, const std::string&, std::size_t, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

BesovParams& besov_of(RunConfig& c) {
  if (!c.sim.besov) c.sim.besov = BesovParams{};
  return *c.sim.besov;
}

const std::map<std::string, KeySpec>& key_table() {
  static const std::map<std::string, KeySpec> table = {
      {"a", {"order of the inertia operator (1 - d_xx)^a",
             [](RunConfig& c, const std::string& v, std::size_t l, const std::string& k) {
               c.sim.a = c.picard.a = to_double(v, l, k);
             },
             [](const RunConfig& c) { return format_double(c.sim.a); }}},
      {"L", {"period of the domain",
             [](RunConfig& c, const std::string& v, std::size_t l, const std::string& k) {
               c.sim.length = c.picard.length = to_double(v, l, k);
             },
             [](const RunConfig& c) { return format_double(c.sim.length); }}},
      {"N", {"number of grid points (power of two, >= 8)",
             [](RunConfig& c, const std::string& v, std::size_t l, const std::string& k) {
               c.sim.n = c.picard.n = static_cast<std::size_t>(to_unsigned(v, l, k));
             },
             [](const RunConfig& c) { return std::to_string(c.sim.n); }}},
      {"T", {"time horizon of the direct simulation",
             [](RunConfig& c, const std::string& v, std::size_t l, const std::string& k) {
               c.sim.horizon = to_double(v, l, k);
             },
             [](const RunConfig& c) { return format_double(c.sim.horizon); }}},
      {"courant", {"Courant number of the adaptive step, in (0, 1]",
                   [](RunConfig& c, const std::string& v, std::size_t l, const std::string& k) {
                     c.sim.courant = to_double(v, l, k);
                   },
                   [](const RunConfig& c) { return format_double(c.sim.courant); }}},
      {"dt", {"fixed time step; 0 selects the CFL policy",
              [](RunConfig& c, const std::string& v, std::size_t l, const std::string& k) {
                c.sim.fixed_dt = to_double(v, l, k);
              },
              [](const RunConfig& c) { return format_double(c.sim.fixed_dt); }}},
      {"dealias", {"2/3-rule dealiasing of the nonlinear term (true/false)",
                   [](RunConfig& c, const std::string& v, std::size_t l, const std::string& k) {
                     c.sim.dealias = to_bool(v, l, k);
                   },
                   [](const RunConfig& c) { return std::string(c.sim.dealias ? "true" : "false"); }}},
      {"blowup_threshold", {"run stops when ||u_x||_inf exceeds this value",
                            [](RunConfig& c, const std::string& v, std::size_t l, const std::string& k) {
                              c.sim.blowup_threshold = to_double(v, l, k);
                            },
                            [](const RunConfig& c) { return format_double(c.sim.blowup_threshold); }}},
      {"snapshot_every", {"time between stored snapshots",
                          [](RunConfig& c, const std::string& v, std::size_t l, const std::string& k) {
                            c.sim.snapshot_every = to_double(v, l, k);
                          },
                          [](const RunConfig& c) { return format_double(c.sim.snapshot_every); }}},
      {"diagnostics_every", {"time between diagnostic rows",
                             [](RunConfig& c, const std::string& v, std::size_t l, const std::string& k) {
                               c.sim.diagnostics_every = to_double(v, l, k);
                             },
                             [](const RunConfig& c) { return format_double(c.sim.diagnostics_every); }}},
      {"preset", {"initial data generator (see `fchlab preset --list`)",
                  [](RunConfig& c, const std::string& v, std::size_t l, const std::string& k) {
                    if (v.empty()) throw ConfigError(l, k, "preset name is empty");
                    c.sim.preset = v;
                  },
                  [](const RunConfig& c) { return c.sim.preset; }}},
      {"seed", {"seed of the SplitMix64 generator",
                [](RunConfig& c, const std::string& v, std::size_t l, const std::string& k) {
                  c.sim.seed = to_unsigned(v, l, k);
                },
                [](const RunConfig& c) { return std::to_string(c.sim.seed); }}},
      {"besov_s", {"regularity index of the optional Besov diagnostic column",
                   [](RunConfig& c, const std::string& v, std::size_t l, const std::string& k) {
                     besov_of(c).s = to_double(v, l, k);
                   },
                   [](const RunConfig& c) { return c.sim.besov ? format_double(c.sim.besov->s) : ""; }}},
      {"besov_p", {"integrability index p of the Besov diagnostic (inf allowed)",
                   [](RunConfig& c, const std::string& v, std::size_t l, const std::string& k) {
                     besov_of(c).p = to_double(v, l, k);
                   },
                   [](const RunConfig& c) { return c.sim.besov ? format_double(c.sim.besov->p) : ""; }}},
      {"besov_r", {"summability index r of the Besov diagnostic (inf allowed)",
                   [](RunConfig& c, const std::string& v, std::size_t l, const std::string& k) {
                     besov_of(c).r = to_double(v, l, k);
                   },
                   [](const RunConfig& c) { return c.sim.besov ? format_double(c.sim.besov->r) : ""; }}},
      {"picard_T", {"horizon of the successive-approximation scheme",
                    [](RunConfig& c, const std::string& v, std::size_t l, const std::string& k) {
                      c.picard.horizon = to_double(v, l, k);
                    },
                    [](const RunConfig& c) { return format_double(c.picard.horizon); }}},
      {"picard_iterations", {"number of successive approximations (>= 2)",
                             [](RunConfig& c, const std::string& v, std::size_t l, const std::string& k) {
                               c.picard.iterations = static_cast<int>(to_unsigned(v, l, k));
                             },
                             [](const RunConfig& c) { return std::to_string(c.picard.iterations); }}},
      {"picard_dt", {"time step of each linear transport solve",
                     [](RunConfig& c, const std::string& v, std::size_t l, const std::string& k) {
                       c.picard.dt = to_double(v, l, k);
                     },
                     [](const RunConfig& c) { return format_double(c.picard.dt); }}},
      {"picard_tol", {"differences below tol * sup-norm count as converged",
                      [](RunConfig& c, const std::string& v, std::size_t l, const std::string& k) {
                        c.picard.tolerance = to_double(v, l, k);
                      },
                      [](const RunConfig& c) { return format_double(c.picard.tolerance); }}},
  };
  return table;
}

const std::vector<std::string>& key_order() {
  static const std::vector<std::string> order = {
      "preset", "a", "L", "N", "T", "courant", "dt", "dealias", "blowup_threshold",
      "snapshot_every", "diagnostics_every", "seed", "besov_s", "besov_p", "besov_r",
      "picard_T", "picard_iterations", "picard_dt", "picard_tol"};
  return order;
}

}  // namespace

ConfigError::ConfigError(std::size_t line, std::string key, const std::string& message)
    : std::runtime_error(line > 0 ? "config line " + std::to_string(line) + ", key '" + key + "': " + message
                                  : "config key '" + key + "': " + message),
      line_(line),
      key_(std::move(key)) {}

RunConfig parse_config(std::string_view text, const std::vector<std::string>& required) {
  RunConfig cfg;
  const auto& table = key_table();
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(line_no, trim(line), "expected key=value");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError(line_no, key, "unknown key");
    if (std::find(cfg.keys.begin(), cfg.keys.end(), key) != cfg.keys.end()) {
      throw ConfigError(line_no, key, "key given twice");
    }
    it->second.set(cfg, value, line_no, key);
    cfg.keys.push_back(key);
  }
  for (const auto& key : required) {
    if (std::find(cfg.keys.begin(), cfg.keys.end(), key) == cfg.keys.end()) {
      throw ConfigError(0, key, "missing mandatory key");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& required) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), required);
}

std::string format_config(const RunConfig& config) {
  const auto& table = key_table();
  std::string out;
  for (const auto& key : key_order()) {
    const std::string v = table.at(key).get(config);
    if (v.empty()) continue;
    out += key + "=" + v + "\n";
  }
  return out;
}

std::string config_help() {
  const RunConfig defaults;
  const auto& table = key_table();
  std::string out = "Config keys (key=value, '#' comments):\n";
  for (const auto& key : key_order()) {
    const auto& spec = table.at(key);
    std::string def = spec.get(defaults);
    if (def.empty()) def = "unset";
    char buf[256];
    std::snprintf(buf, sizeof buf, "  %-18s %s [default %s]\n", key.c_str(), spec.help, def.c_str());
    out += buf;
  }
  return out;
}

}  // namespace fch
