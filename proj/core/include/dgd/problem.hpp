#pragma once

#include "dgd/priors.hpp"
#include "dgd/tensor.hpp"

namespace dgd {

/// Observed data shared read-only by every block update of one run.
struct ProblemData {
  DynTensor adj;  // observed tensor M o A; unobserved entries are zero
  MaskTensor mask;
  Flattenings flat;
  SmoothCache cache;

  std::size_t n_nodes() const { return adj.n_nodes(); }
  std::size_t n_steps() const { return adj.n_steps(); }
};

/// Validates shapes, zeroes unobserved entries and builds the flattened views.
ProblemData make_problem(DynTensor adj, MaskTensor mask, SmoothCache cache);

}  // namespace dgd
