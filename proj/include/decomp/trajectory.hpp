#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "decomp/model.hpp"

namespace decomp {

struct TrajectoryEntry {
  double objective = std::numeric_limits<double>::quiet_NaN();
  ViolationMetrics violations;
  double step = 0.0;          // gamma used to leave this iterate
  double displacement = 0.0;  // ||iterate(k+1) - iterate(k)||_2
  double time_s = 0.0;        // cumulative wall time when this iterate was evaluated
};

// Entry k describes outer iterate k; entry 0 is the initial point.
struct Trajectory {
  std::vector<TrajectoryEntry> entries;
  double final_kkt_residual = std::numeric_limits<double>::quiet_NaN();
  double inner_gap = 0.0;  // last inner relative change (double-loop algorithms)
  bool converged = false;
  bool failed = false;
  std::string failure_reason;

  int iterations() const { return static_cast<int>(entries.size()) - 1; }
};

}  // namespace decomp
