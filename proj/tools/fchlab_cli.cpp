// fchlab command-line driver.
//
// Exit codes: 0 success, 1 usage or input error, 2 audit failure,
// 3 run stopped by a blow-up event the preset did not expect.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "fchlab/characteristics.hpp"
#include "fchlab/config.hpp"
#include "fchlab/invariants_audit.hpp"
#include "fchlab/kernel.hpp"
#include "fchlab/littlewood_paley.hpp"
#include "fchlab/picard.hpp"
#include "fchlab/presets.hpp"
#include "fchlab/report_io.hpp"
#include "fchlab/snapshot.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitAudit = 2;
constexpr int kExitBlowup = 3;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int exit_code(const fch::PipelineResult& r) {
  if (r.unexpected_blowup()) return kExitBlowup;
  return r.audits_passed() ? kExitOk : kExitAudit;
}

void print_summary(const fch::PipelineResult& r, const std::string& dir) {
  std::printf("preset %s: %zu steps, t_end = %s, %zu event(s)\n", r.run.config.preset.c_str(), r.run.steps,
              fmt(r.run.last_state().t).c_str(), r.run.events.size());
  for (const auto& e : r.run.events) {
    std::printf("  event t=%s x=%s value=%s (%s)\n", fmt(e.t).c_str(), fmt(e.x).c_str(), fmt(e.value).c_str(),
                e.reason.c_str());
  }
  for (const auto& v : r.verdicts) {
    std::printf("  %-4s %-22s measured=%s tolerance=%s%s%s\n", v.passed ? "ok" : "FAIL", v.name.c_str(),
                fmt(v.measured).c_str(), fmt(v.tolerance).c_str(), v.notice.empty() ? "" : "  # ",
                v.notice.c_str());
  }
  std::printf("report: %s\n", dir.c_str());
}

int cmd_pipeline(const fch::RunConfig& cfg, const std::string& out) {
  const auto result = fch::run_pipeline(cfg);
  const std::string dir = out.empty() ? fch::output_dir(cfg.sim.preset) : out;
  fch::write_report(dir, result);
  print_summary(result, dir);
  return exit_code(result);
}

struct ProbeArgs {
  double eps = 0.0;
  int trials = 3;
};

ProbeArgs parse_probe(const std::vector<std::string>& items) {
  ProbeArgs p;
  bool have_eps = false;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--probe", "expected key=value, got " + item);
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "eps") {
      p.eps = std::stod(value);
      have_eps = true;
    } else if (key == "trials") {
      p.trials = std::stoi(value);
    } else {
      throw CLI::ValidationError("--probe", "unknown probe key " + key);
    }
  }
  if (!have_eps) throw CLI::ValidationError("--probe", "eps=<value> is required");
  return p;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fchlab: higher-order Camassa-Holm experiments with fractional inertia (1 - d_xx)^a"};
  app.footer(fch::config_help() +
             "\nOutput root: $FCHLAB_OUTPUT_ROOT (default ./fchlab_out).\n"
             "Exit codes: 0 ok, 1 input error, 2 audit failure, 3 unexpected blow-up.");
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "simulate the configured experiment and audit it");
  run->add_option("--config", config_path, "key=value configuration file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "report directory (default: <output root>/<preset>)");

  auto* picard = app.add_subcommand("picard", "successive approximation by linear transport problems");
  picard->add_option("--config", config_path, "key=value configuration file")->required()->check(CLI::ExistingFile);
  picard->add_option("--out", out_dir, "directory for picard.csv");

  std::string run_dir;
  std::string advect = "u";
  std::size_t stride = 1;
  auto* chars = app.add_subcommand("characteristics", "flow map of a stored run");
  chars->add_option("--run", run_dir, "report directory written by `run`")->required()->check(CLI::ExistingDirectory);
  chars->add_option("--advect", advect, "transport field: u (velocity) or m (momentum)")
      ->check(CLI::IsMember({"u", "m"}));
  chars->add_option("--stride", stride, "use every stride-th grid point as a label")->check(CLI::PositiveNumber);

  std::vector<std::string> probe_items;
  auto* audit = app.add_subcommand("audit", "conservation and bound audits of a stored run");
  audit->add_option("--run", run_dir, "report directory written by `run`")->required()->check(CLI::ExistingDirectory);
  audit->add_option("--probe", probe_items, "continuous-dependence probe, e.g. --probe eps=1e-4 trials=3");

  std::string snapshot_path;
  double bs = 0.0;
  std::string bp = "2";
  std::string br = "2";
  auto* besov = app.add_subcommand("besov", "dyadic block table and Besov norm of a snapshot");
  besov->add_option("--snapshot", snapshot_path, "snapshot file")->required()->check(CLI::ExistingFile);
  besov->add_option("--s", bs, "regularity index");
  besov->add_option("--p", bp, "integrability index (number or inf)");
  besov->add_option("--r", br, "summability index (number or inf)");

  double ka = 1.5;
  double kx = 10.0;
  double kdx = 0.1;
  double kperiod = 0.0;
  auto* ktable = app.add_subcommand("kernel-table", "tabulate the kernel G_a and G_a'");
  ktable->add_option("--a", ka, "order a > 0");
  ktable->add_option("--xmax", kx, "largest x");
  ktable->add_option("--dx", kdx, "spacing")->check(CLI::PositiveNumber);
  ktable->add_option("--period", kperiod, "period of the heat kernel (0: line)");

  std::string sweep_param = "a";
  std::string sweep_values;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* sweep = app.add_subcommand("sweep", "run one configuration over a list of values of one key");
  sweep->add_option("--config", config_path, "base configuration")->required()->check(CLI::ExistingFile);
  sweep->add_option("--param", sweep_param, "config key to vary");
  sweep->add_option("--values", sweep_values, "comma-separated values")->required();
  sweep->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  std::string preset_name;
  bool list = false;
  auto* preset = app.add_subcommand("preset", "run a named experiment with its defaults");
  preset->add_option("name", preset_name, "preset name");
  preset->add_flag("--list", list, "list preset names");
  preset->add_option("--out", out_dir, "report directory (default: <output root>/<name>)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) return cmd_pipeline(fch::load_config(config_path), out_dir);

    if (*preset) {
      if (list || preset_name.empty()) {
        for (const auto& n : fch::preset_names()) std::printf("%s\n", n.c_str());
        return kExitOk;
      }
      return cmd_pipeline(fch::preset_config(preset_name), out_dir);
    }

    if (*picard) {
      const auto cfg = fch::load_config(config_path);
      const fch::Field m0 = fch::preset_initial_momentum(cfg.sim);
      const fch::Field u0 = fch::velocity(m0, cfg.sim.a);
      fch::PicardConfig pc = cfg.picard;
      const auto result = fch::iterate(u0, pc);
      fch::SimConfig sim = cfg.sim;
      sim.horizon = pc.horizon;
      const auto direct = fch::simulate(m0, sim);
      const std::string csv = fch::picard_csv(result);
      std::fputs(csv.c_str(), stdout);
      std::printf("# tail_ratio=%s geometric=%d fitted_C=%s window=%s\n", fmt(result.tail_ratio).c_str(),
                  result.geometric ? 1 : 0, fmt(result.fitted_constant).c_str(),
                  fmt(result.existence_window).c_str());
      if (!result.notice.empty()) std::printf("# notice: %s\n", result.notice.c_str());
      if (direct.blew_up()) {
        std::printf("# direct simulation stopped at t=%s\n", fmt(direct.events.front().t).c_str());
      } else {
        std::printf("# gap_vs_simulation=%s\n", fmt(fch::picard_gap(result, direct, cfg.sim.a)).c_str());
      }
      const std::string dir = out_dir.empty() ? fch::output_dir("picard") : out_dir;
      fs::create_directories(dir);
      fch::write_text((fs::path(dir) / "picard.csv").string(), csv);
      return result.diverged ? kExitAudit : kExitOk;
    }

    if (*chars) {
      const auto report = fch::load_run(run_dir);
      const auto& cfg = report.config;
      const auto mode = advect == "m" ? fch::Advection::momentum : fch::Advection::velocity;
      const auto series = fch::transport_series(report.trajectory, cfg.a, cfg.dealias, mode);
      const auto labels = fch::grid_labels(cfg.grid(), stride);
      const auto flow = fch::flow_map(series, labels, 0.5 * cfg.diagnostics_every);
      const auto defects = fch::lagrangian_defects(flow, report.trajectory, report.trajectory.front().m);
      const std::string path = (fs::path(run_dir) / (advect == "m" ? "characteristics_m.csv" : "characteristics.csv")).string();
      fch::write_text(path, fch::characteristics_csv(flow, defects));
      double worst = 0.0;
      for (const auto& row : defects) {
        for (double d : row) worst = std::max(worst, d);
      }
      std::printf("labels=%zu stamps=%zu max_defect=%s monotone=%d\n", labels.size(), flow.times.size(),
                  fmt(worst).c_str(), flow.monotone() ? 1 : 0);
      for (const auto& e : flow.events) std::printf("  event t=%s label=%zu (%s)\n", fmt(e.t).c_str(), e.label, e.reason.c_str());
      std::printf("csv: %s\n", path.c_str());
      return kExitOk;
    }

    if (*audit) {
      const auto report = fch::load_run(run_dir);
      const auto& cfg = report.config;
      std::vector<fch::Verdict> verdicts;
      verdicts.push_back(fch::audit_l1(report));
      verdicts.push_back(fch::audit_mean(report));
      verdicts.push_back(fch::audit_energy(report));
      if (cfg.a > 1.0) verdicts.push_back(fch::audit_ux_bound(report, cfg.a));
      if (!probe_items.empty()) {
        const auto probe = parse_probe(probe_items);
        const fch::Field u0 = fch::velocity(report.trajectory.front().m, cfg.a);
        verdicts.push_back(fch::two_scale_probe(u0, probe.eps, cfg, probe.trials));
      }
      std::printf("%s\n", fch::verdicts_json(verdicts).c_str());
      const bool ok = std::all_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.passed; });
      return ok ? kExitOk : kExitAudit;
    }

    if (*besov) {
      const auto snap = fch::load_snapshot(snapshot_path);
      auto idx = [](const std::string& s) {
        return s == "inf" ? std::numeric_limits<double>::infinity() : std::stod(s);
      };
      const fch::BesovParams params{bs, idx(bp), idx(br)};
      const auto table = fch::besov_table(snap.field, params, fch::DyadicPartition(snap.field.grid()));
      std::printf("j,weighted\n");
      for (std::size_t i = 0; i < table.index.size(); ++i) {
        std::printf("%d,%s\n", table.index[i], fmt(table.weighted[i]).c_str());
      }
      std::printf("# norm=%s\n", fmt(table.norm).c_str());
      return kExitOk;
    }

    if (*ktable) {
      fch::QuadSpec quad;
      if (kperiod > 0.0) quad.period = kperiod;
      std::printf("x,G,dG\n");
      const auto count = static_cast<long>(std::floor(kx / kdx + 1e-9));
      for (long i = 0; i <= count; ++i) {
        const double x = static_cast<double>(i) * kdx;
        if (x == 0.0 && ka <= 0.5) continue;
        const auto g = fch::green_kernel_with_derivative(ka, x, quad);
        std::printf("%s,%s,%s\n", fmt(x).c_str(), fmt(g.value).c_str(), fmt(g.derivative).c_str());
      }
      if (ka > 1.0) {
        const auto sup = fch::kernel_derivative_sup_detail(ka, quad.period);
        std::printf("# sup|G'|=%s at x=%s (refinement change %s)\n", fmt(sup.value).c_str(),
                    fmt(sup.argmax).c_str(), fmt(sup.refinement_change).c_str());
      }
      return kExitOk;
    }

    if (*sweep) {
      std::ifstream in(config_path);
      std::stringstream ss;
      ss << in.rdbuf();
      const std::string base_text = ss.str();
      const auto values = split_list(sweep_values);
      (void)fch::parse_config(base_text);  // reject a broken base file before starting workers
      std::vector<int> codes(values.size(), kExitOk);
      std::vector<std::string> lines(values.size());
      std::size_t next = 0;
      std::mutex lock;
      auto worker = [&] {
        for (;;) {
          std::size_t i;
          {
            std::lock_guard<std::mutex> g(lock);
            if (next >= values.size()) return;
            i = next++;
          }
          // The swept key replaces any assignment of it in the base file.
          std::string text;
          std::istringstream lines_in(base_text);
          for (std::string l; std::getline(lines_in, l);) {
            const auto eq = l.find('=');
            const auto hash = l.find('#');
            if (eq != std::string::npos && (hash == std::string::npos || eq < hash)) {
              std::string key = l.substr(0, eq);
              key.erase(0, key.find_first_not_of(" \t"));
              key.erase(key.find_last_not_of(" \t") + 1);
              if (key == sweep_param) {
                text += "\n";
                continue;
              }
            }
            text += l + "\n";
          }
          text += sweep_param + "=" + values[i] + "\n";
          try {
            const auto cfg = fch::parse_config(text);
            const auto result = fch::run_pipeline(cfg);
            const std::string dir = fch::output_dir(cfg.sim.preset + "_sweep/" + sweep_param + "_" + values[i]);
            fch::write_report(dir, result);
            codes[i] = exit_code(result);
            lines[i] = sweep_param + "=" + values[i] + " exit=" + std::to_string(codes[i]) + " dir=" + dir;
          } catch (const std::exception& e) {
            codes[i] = kExitInput;
            lines[i] = sweep_param + "=" + values[i] + " error: " + e.what();
          }
        }
      };
      std::vector<std::thread> pool;
      const unsigned n = std::min<unsigned>(jobs, static_cast<unsigned>(values.size()));
      for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
      for (const auto& l : lines) std::printf("%s\n", l.c_str());
      return *std::max_element(codes.begin(), codes.end());
    }
  } catch (const fch::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  }
  return kExitOk;
}
