#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "dgd/model.hpp"
#include "dgd/problem.hpp"

namespace dgd {

/// Splitting variables for the degree constraint A_r Phi_r + Gamma_r >= 0.
struct AWorkspace {
  Matrix phi;     // N x T, column t = C[t, r] * 1_N
  Matrix gamma;   // N x T, sum_{s != r} A_s (c_s^T kron 1_N) - zeta
  Matrix p;       // N x T auxiliary, nonnegative after each update
  Matrix lambda;  // T x N dual

  /// A_r Phi_r + Gamma_r: column t holds C[t, r] times the degrees of A_r,
  /// plus the other latents' contribution, minus zeta.
  Matrix constraint(const Matrix& a_r) const;
};

/// Phi_r and Gamma_r for latent r; p and lambda are left zero.
AWorkspace build_a_workspace(const Decomposition& d, std::size_t r, double zeta);

/// The latent-r block of the augmented Lagrangian with C and the other
/// latents frozen. Everything that does not depend on A_r is folded into a
/// fixed entrywise curvature and a fixed linear term at construction, so a
/// gradient evaluation costs O(N^2 + N T).
class LatentSubproblem {
 public:
  LatentSubproblem(const Decomposition& d, std::size_t r, const ProblemData& data, const Hyperparams& h);

  Matrix gradient(const Matrix& a_r, const AWorkspace& ws) const;

  /// Largest eigenvalue of the gradient's linear part (fit + ridge + penalty).
  double lipschitz() const { return lipschitz_; }
  /// Step used by solve(): explicit step_a, lambda_a in literal mode, else 1/L.
  double step() const;

  std::size_t index() const { return r_; }

 private:
  std::size_t r_;
  Hyperparams h_;
  Matrix curvature_;  // entrywise fit curvature (constant matrix in surrogate mode)
  Matrix linear_;     // constant part of the gradient
  double lipschitz_ = 0.0;
};

/// Gradient of the latent-r augmented Lagrangian at a_r.
Matrix grad_a_lagrangian(const Matrix& a_r, const AWorkspace& ws, const Decomposition& d, std::size_t r,
                         const ProblemData& data, const Hyperparams& h);

struct ASolveResult {
  Matrix latent;
  AWorkspace ws;
  std::vector<double> primal_residuals;  // ||A Phi + Gamma - P||_F per inner iteration
};

/// K projected-gradient ADMM iterations for latent r starting from
/// d.latents[r]. P and Lambda start from i.i.d. N(0, 1) draws from `rng`.
/// Throws NumericalAbort on a non-finite iterate.
ASolveResult solve_a_subproblem(const Decomposition& d, std::size_t r, const ProblemData& data,
                                const Hyperparams& h, std::mt19937_64& rng);

}  // namespace dgd
