#pragma once

#include <span>

#include "dgd/model.hpp"
#include "dgd/tensor.hpp"

namespace dgd {

/// Pairwise squared feature distances per time step.
struct SmoothCache {
  std::vector<Matrix> z;  // Z_t, [Z_t]_ij = ||x_i - x_j||^2
  Matrix z_bar;           // T x N^2, row t = vec(Z_t^T)^T

  std::size_t n_steps() const { return z.size(); }

  /// Cache for runs without signals: every Z_t is zero.
  static SmoothCache zeros(std::size_t n_nodes, std::size_t n_steps);
};

SmoothCache build_cache(const SignalTensor& x);

/// Xi_r = 1/2 sum_t c_r[t] Z_t.
Matrix xi_matrix(const SmoothCache& cache, const Vector& c_r);

/// sum_t sum_r C[t, r] tr(A_r Z_t) / 2 (unweighted).
double smoothness_g(const Decomposition& d, const SmoothCache& cache);

/// sum over ordered pairs r != s of tr(A_r^T A_s).
double overlap_h(std::span<const Matrix> latents);

/// (T-1) x T forward-difference operator.
Matrix diff_operator(std::size_t n_steps);

/// ||D C||_F^2; zero when T < 2.
double temporal_pi(const Matrix& c);

}  // namespace dgd
