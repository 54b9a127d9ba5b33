#pragma once

// Text snapshots:
//
//   N=<samples>
//   L=<period>
//   a=<order>
//   t=<time>
//   <one sample per line, %.17g>
//
// Lines starting with '#' before the header are ignored.

#include <stdexcept>
#include <string>

#include "fchlab/grid_spectral.hpp"

namespace fch {

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Snapshot {
  Field field;
  double a = 0.0;
  double t = 0.0;
};

std::string format_snapshot(const Field& f, double a, double t);
Snapshot parse_snapshot(const std::string& text);

void save_snapshot(const Field& f, double a, double t, const std::string& path);
Snapshot load_snapshot(const std::string& path);

}  // namespace fch
