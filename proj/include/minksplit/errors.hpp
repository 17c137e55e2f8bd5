#pragma once

#include <stdexcept>

namespace minksplit {

// Requested point/target is certifiably outside the feasible set
// (empty fiber, target outside the image, ...).
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An iterative solver hit its cap without meeting its tolerance.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace minksplit
