#include "dgd/problem.hpp"

#include <stdexcept>

namespace dgd {

ProblemData make_problem(DynTensor adj, MaskTensor mask, SmoothCache cache) {
  if (!adj.same_shape(mask.values())) throw std::invalid_argument("make_problem: adjacency and mask shapes differ");
  if (cache.n_steps() != adj.n_steps() ||
      (!cache.z.empty() && static_cast<std::size_t>(cache.z[0].rows()) != adj.n_nodes())) {
    throw std::invalid_argument("make_problem: signal cache does not match the adjacency tensor");
  }
  // Only M o A is ever visible to the solvers.
  DynTensor observed = adj.hadamard(mask.values());
  ProblemData p{std::move(observed), std::move(mask), {}, std::move(cache)};
  p.flat = build_flattenings(p.adj, p.mask);
  return p;
}

}  // namespace dgd
