#include "fchlab/report_io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fchlab/snapshot.hpp"

namespace fch {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string indexed_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "m_%05zu.txt", i);
  return buf;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::ordered_json verdict_json(const Verdict& v) {
  nlohmann::ordered_json j;
  j["name"] = v.name;
  j["passed"] = v.passed;
  j["measured"] = v.measured;
  j["tolerance"] = v.tolerance;
  if (!v.notice.empty()) j["notice"] = v.notice;
  if (!v.details.empty()) {
    nlohmann::ordered_json d;
    for (const auto& [k, val] : v.details) d[k] = val;
    j["details"] = d;
  }
  return j;
}

nlohmann::ordered_json events_json(const RunReport& run) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& e : run.events) {
    nlohmann::ordered_json j;
    j["t"] = e.t;
    j["x"] = std::isfinite(e.x) ? nlohmann::ordered_json(e.x) : nlohmann::ordered_json(nullptr);
    j["value"] = std::isfinite(e.value) ? nlohmann::ordered_json(e.value) : nlohmann::ordered_json(nullptr);
    j["reason"] = e.reason;
    arr.push_back(j);
  }
  return arr;
}

void write_states(const std::string& dir, const std::vector<StepState>& states, double a) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < states.size(); ++i) {
    save_snapshot(states[i].m, a, states[i].t, (fs::path(dir) / indexed_name(i)).string());
  }
}

}  // namespace

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string diagnostics_csv(const RunReport& run) {
  std::string out = "t,l1_m,int_m,energy_um,min_m,max_m,min_ux,max_ux,odd_defect";
  if (run.config.besov) {
    const auto& b = *run.config.besov;
    out += ",besov_" + num(b.s) + "_" + num(b.p) + "_" + num(b.r);
  }
  out += "\n";
  for (const auto& r : run.diagnostics) {
    out += num(r.t) + "," + num(r.l1_m) + "," + num(r.int_m) + "," + num(r.energy_um) + "," + num(r.min_m) +
           "," + num(r.max_m) + "," + num(r.min_ux) + "," + num(r.max_ux) + "," + num(r.odd_defect);
    if (run.config.besov) out += "," + num(r.besov.value_or(0.0));
    out += "\n";
  }
  return out;
}

std::string events_csv(const RunReport& run) {
  std::string out = "t,x,value,reason\n";
  for (const auto& e : run.events) {
    std::string reason = e.reason;
    std::replace(reason.begin(), reason.end(), '"', '\'');
    out += num(e.t) + "," + num(e.x) + "," + num(e.value) + ",\"" + reason + "\"\n";
  }
  return out;
}

std::string characteristics_csv(const FlowMap& flow, const std::vector<std::vector<double>>& defects,
                                std::size_t stride) {
  if (stride == 0) stride = 1;
  std::string out = "t,xi,q,q_xi,defect\n";
  for (std::size_t i = 0; i < flow.times.size(); ++i) {
    for (std::size_t k = 0; k < flow.labels.size(); k += stride) {
      out += num(flow.times[i]) + "," + num(flow.labels[k]) + "," + num(flow.q[i][k]) + "," +
             num(flow.q_xi[i][k]) + "," + num(defects.at(i).at(k)) + "\n";
    }
  }
  return out;
}

std::string picard_csv(const PicardResult& result) {
  std::string out = "n,d_n,ratio,sup_norm\n";
  for (std::size_t n = 0; n < result.differences.size(); ++n) {
    const double ratio = n > 0 && result.differences[n - 1] > 0.0
                             ? result.differences[n] / result.differences[n - 1]
                             : 0.0;
    const double sup = n + 1 < result.iterates.size() ? result.iterates[n + 1].sup_norm : 0.0;
    out += std::to_string(n) + "," + num(result.differences[n]) + "," + num(ratio) + "," + num(sup) + "\n";
  }
  return out;
}

std::string verdicts_json(const std::vector<Verdict>& verdicts) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& v : verdicts) arr.push_back(verdict_json(v));
  return arr.dump(2);
}

std::string write_report(const std::string& dir, const PipelineResult& result) {
  fs::create_directories(dir);
  const auto& run = result.run;
  const double a = run.config.a;
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  auto emit = [&](const std::string& name, const std::string& text) {
    write_text((fs::path(dir) / name).string(), text);
    files.push_back(name);
  };
  emit("config.txt", format_config(result.config));
  emit("diagnostics.csv", diagnostics_csv(run));
  emit("events.csv", events_csv(run));
  write_states((fs::path(dir) / "trajectory").string(), run.trajectory, a);
  files.push_back("trajectory/");
  write_states((fs::path(dir) / "snapshots").string(), run.snapshots, a);
  files.push_back("snapshots/");
  if (result.flow) {
    const auto defects = lagrangian_defects(*result.flow, run.trajectory, run.trajectory.front().m);
    const std::size_t stride = std::max<std::size_t>(1, result.flow->labels.size() / 128);
    emit("characteristics.csv", characteristics_csv(*result.flow, defects, stride));
  }
  if (result.picard) emit("picard.csv", picard_csv(*result.picard));
  if (result.contrast) {
    emit("contrast_diagnostics.csv", diagnostics_csv(*result.contrast));
  }

  nlohmann::ordered_json j;
  j["preset"] = run.config.preset;
  nlohmann::ordered_json cfg;
  for (const auto& line : [&] {
         std::vector<std::string> lines;
         std::istringstream in(format_config(result.config));
         for (std::string l; std::getline(in, l);) lines.push_back(l);
         return lines;
       }()) {
    const auto eq = line.find('=');
    cfg[line.substr(0, eq)] = line.substr(eq + 1);
  }
  j["config"] = cfg;
  j["steps"] = run.steps;
  j["final_time"] = run.final_state ? run.final_state->t : 0.0;
  j["events"] = events_json(run);
  j["expects_blowup"] = result.expects_blowup;
  auto verdicts = nlohmann::ordered_json::array();
  for (const auto& v : result.verdicts) verdicts.push_back(verdict_json(v));
  j["verdicts"] = verdicts;
  j["passed"] = result.audits_passed();
  if (!result.lagrangian.empty()) {
    j["lagrangian_defect_max"] = *std::max_element(result.lagrangian.begin(), result.lagrangian.end());
  }
  if (result.picard) {
    const auto& p = *result.picard;
    nlohmann::ordered_json pj;
    pj["differences"] = p.differences;
    pj["ratios"] = p.ratios;
    pj["tail_ratio"] = p.tail_ratio;
    pj["geometric"] = p.geometric;
    pj["diverged"] = p.diverged;
    pj["fitted_constant"] = p.fitted_constant;
    pj["initial_norm"] = p.initial_norm;
    pj["existence_window"] = p.existence_window;
    if (!p.notice.empty()) pj["notice"] = p.notice;
    j["picard"] = pj;
  }
  if (result.peakon) {
    j["peakon"] = {{"shift", result.peakon->shift},
                   {"speed", result.peakon->speed},
                   {"shape_error_l2", result.peakon->shape_error}};
  }
  if (result.contrast) j["contrast_events"] = events_json(*result.contrast);
  files.push_back("report.json");
  j["files"] = files;
  const std::string text = j.dump(2) + "\n";
  write_text((fs::path(dir) / "report.json").string(), text);
  return text;
}

RunConfig load_run_config(const std::string& dir) {
  return parse_config(read_text((fs::path(dir) / "config.txt").string()));
}

RunReport load_run(const std::string& dir) {
  RunReport run;
  run.config = load_run_config(dir).sim;
  const fs::path traj = fs::path(dir) / "trajectory";
  for (std::size_t i = 0;; ++i) {
    const fs::path p = traj / indexed_name(i);
    if (!fs::exists(p)) break;
    auto snap = load_snapshot(p.string());
    run.trajectory.push_back(StepState{snap.t, std::move(snap.field)});
  }
  if (run.trajectory.empty()) throw std::runtime_error("no trajectory states under " + traj.string());
  for (const auto& s : run.trajectory) {
    run.diagnostics.push_back(compute_diagnostics(s.t, s.m, run.config.a, run.config.besov));
  }
  const fs::path snaps = fs::path(dir) / "snapshots";
  for (std::size_t i = 0;; ++i) {
    const fs::path p = snaps / indexed_name(i);
    if (!fs::exists(p)) break;
    auto snap = load_snapshot(p.string());
    run.snapshots.push_back(StepState{snap.t, std::move(snap.field)});
  }
  const fs::path ev = fs::path(dir) / "events.csv";
  if (fs::exists(ev)) {
    std::istringstream in(read_text(ev.string()));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      BlowupEvent e;
      std::size_t pos = 0;
      double* fields[3] = {&e.t, &e.x, &e.value};
      for (double* f : fields) {
        const auto comma = line.find(',', pos);
        if (comma == std::string::npos) throw std::runtime_error("malformed events.csv line: " + line);
        *f = std::strtod(line.substr(pos, comma - pos).c_str(), nullptr);
        pos = comma + 1;
      }
      e.reason = line.substr(pos);
      if (e.reason.size() >= 2 && e.reason.front() == '"') e.reason = e.reason.substr(1, e.reason.size() - 2);
      run.events.push_back(e);
    }
  }
  run.final_state = run.trajectory.back();
  return run;
}

std::string output_dir(const std::string& name) {
  const char* root = std::getenv("FCHLAB_OUTPUT_ROOT");
  const fs::path base = root && *root ? fs::path(root) : fs::path("fchlab_out");
  return (base / name).string();
}

}  // namespace fch
