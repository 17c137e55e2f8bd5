#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace minksplit {

using Point = Eigen::VectorXd;

// One probed target: where we aimed, and how far the base point is from the
// fiber over it. Targets whose fiber turned out empty are kept in the list
// with feasible=false so reports stay aligned with the input.
struct ProbeTarget {
  Point y;
  double dist = 0.0;
  bool feasible = true;
};

struct ProbeReport {
  enum class Verdict { OpenAt, NotOpenAt };

  Point base_point;
  std::vector<ProbeTarget> targets;
  Verdict verdict = Verdict::OpenAt;
  // For NotOpenAt: every target that converged to the image of the base
  // point kept its fiber at least this far away.
  double epsilon = 0.0;
};

struct ContinuityReport {
  std::vector<double> jumps;  // one per adjacency edge
  double max_jump = 0.0;
  // max jump at the finer resolution divided by max jump at the coarser
  // one, when two resolutions were compared
  std::optional<double> refinement_ratio;
};

}  // namespace minksplit
