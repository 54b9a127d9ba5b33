#pragma once

// Report directories:
//
//   config.txt          key=value echo, enough to rerun
//   diagnostics.csv     t,l1_m,int_m,energy_um,min_m,max_m,min_ux,max_ux,odd_defect[,besov_s_p_r]
//   events.csv          t,x,value,reason
//   trajectory/         one snapshot per diagnostic instant
//   snapshots/          one snapshot per snapshot instant
//   characteristics.csv t,xi,q,q_xi,defect (when computed)
//   picard.csv          n,d_n,ratio,sup_norm (picard runs)
//   report.json         verdicts, events, file list
//
// All numbers are written with %.17g so reruns are byte-identical.

#include <string>
#include <vector>

#include "fchlab/characteristics.hpp"
#include "fchlab/dynamics.hpp"
#include "fchlab/invariants_audit.hpp"
#include "fchlab/picard.hpp"
#include "fchlab/presets.hpp"

namespace fch {

std::string diagnostics_csv(const RunReport& run);
std::string events_csv(const RunReport& run);
/// Every `stride`-th label of the flow map.
std::string characteristics_csv(const FlowMap& flow, const std::vector<std::vector<double>>& defects,
                                std::size_t stride = 1);
std::string picard_csv(const PicardResult& result);
std::string verdicts_json(const std::vector<Verdict>& verdicts);

/// Writes the report directory and returns the JSON summary.
std::string write_report(const std::string& dir, const PipelineResult& result);

/// Reads config.txt, trajectory/ and events.csv back into a run report
/// (diagnostics are recomputed from the stored states).
RunReport load_run(const std::string& dir);
RunConfig load_run_config(const std::string& dir);

void write_text(const std::string& path, const std::string& text);

/// Output directory: $FCHLAB_OUTPUT_ROOT/<name>, or ./fchlab_out/<name>.
std::string output_dir(const std::string& name);

}  // namespace fch
