#pragma once

#include <random>
#include <span>
#include <vector>

#include "dgd/model.hpp"
#include "dgd/problem.hpp"

namespace dgd {

/// Splitting variables for the degree constraint C Upsilon^T - zeta >= 0.
struct CWorkspace {
  Matrix upsilon;  // N x R, column r = A_r 1_N
  Matrix q;        // T x N auxiliary
  Matrix lambda;   // N x T dual

  Matrix constraint(const Matrix& c, double zeta) const;
};

/// Column r holds the degree vector of latent r.
Matrix build_upsilon(std::span<const Matrix> latents);

/// The signature block of the augmented Lagrangian with all latents frozen.
///
/// The fit term is kept as one R x R Gram matrix and one R-vector per time
/// step, so gradients do not touch N^2-sized data.
class SignatureSubproblem {
 public:
  SignatureSubproblem(std::span<const Matrix> latents, const ProblemData& data, const Hyperparams& h);

  Matrix gradient(const Matrix& c, const CWorkspace& ws) const;

  double lipschitz() const { return lipschitz_; }
  double step() const;
  const Matrix& upsilon() const { return upsilon_; }

 private:
  Hyperparams h_;
  std::vector<Matrix> gram_;  // per t: A_0^T diag(m_t) A_0, or w_t A_0^T A_0
  Matrix rhs_;                // T x R, row t: A_0^T diag(m_t) a_t, or w_t A_0^T a_t
  Matrix smooth_;             // T x R, delta/2 * Zbar A_0
  Matrix dtd_;                // D^T D
  Matrix upsilon_;
  double lipschitz_ = 0.0;
};

Matrix grad_c_lagrangian(const Matrix& c, const CWorkspace& ws, std::span<const Matrix> latents,
                         const ProblemData& data, const Hyperparams& h);

struct CSolveResult {
  Matrix signatures;
  CWorkspace ws;
  std::vector<double> primal_residuals;
};

/// K projected-gradient ADMM iterations for C starting from d.signatures.
/// Q and Lambda start from i.i.d. N(0, 1) draws. Throws NumericalAbort on a
/// non-finite iterate.
CSolveResult solve_c_subproblem(const Decomposition& d, const ProblemData& data, const Hyperparams& h,
                                std::mt19937_64& rng);

}  // namespace dgd
