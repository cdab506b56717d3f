#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "dgd/tensor.hpp"

namespace dgd {

struct SmoothCache;

/// R latent adjacency matrices and their T x R temporal signatures.
///
/// Slice t of the modelled tensor is sum_r signatures(t, r) * latents[r].
struct Decomposition {
  std::vector<Matrix> latents;
  Matrix signatures;

  std::size_t rank() const { return latents.size(); }
  std::size_t n_nodes() const { return latents.empty() ? 0 : static_cast<std::size_t>(latents[0].rows()); }
  std::size_t n_steps() const { return static_cast<std::size_t>(signatures.rows()); }

  /// Throws std::invalid_argument on inconsistent shapes.
  void check_shape() const;
  /// Every latent in S_A and every signature entry nonnegative.
  bool is_feasible() const;
};

enum class GradientMode {
  exact_mask,       // entrywise masked least squares
  paper_surrogate,  // per-slice weight 1^T m_t in place of the mask
};

std::string_view to_string(GradientMode mode);
GradientMode gradient_mode_from_string(std::string_view name);

struct Hyperparams {
  std::size_t rank = 2;

  double gamma = 1e-3;   // sparsity
  double delta = 1e-4;   // signal smoothness
  double beta = 1e-3;    // latent overlap
  double mu = 1.0;       // temporal smoothness of signatures
  double rho = 1e-3;     // ridge on signatures
  double zeta = 1e-3;    // minimum node degree
  double eta = 0.0;      // optional ridge on latents

  double lambda_a = 0.1;   // ADMM penalty, latent subproblems
  double lambda_c = 0.1;   // ADMM penalty, signature subproblem
  double step_a = 0.0;     // 0 selects the inverse-Lipschitz estimate
  double step_c = 0.0;
  bool literal_steps = false;  // use step = lambda as in the original updates

  std::size_t inner_iters = 300;  // K
  std::size_t outer_iters = 30;  // I
  double tol_outer = 1e-5;
  bool early_exit = false;  // stop inner loops once the primal residual is negligible

  GradientMode gradient_mode = GradientMode::exact_mask;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

struct ObjectiveBreakdown {
  double fit = 0.0;
  double sparsity = 0.0;
  double smoothness = 0.0;
  double temporal = 0.0;
  double overlap = 0.0;
  double ridge_c = 0.0;
  double ridge_a = 0.0;
  double total = 0.0;
};

/// Sum_r C[t, r] A_r. Throws std::out_of_range for t >= T.
Matrix reconstruct_slice(const Decomposition& d, std::size_t t);
DynTensor reconstruct(const Decomposition& d);

/// Weighted objective terms; every field already includes its hyperparameter.
ObjectiveBreakdown objective(const Decomposition& d, const DynTensor& adj, const MaskTensor& mask,
                             const SmoothCache& cache, const Hyperparams& h);

/// Euclidean projection onto symmetric, nonnegative, zero-diagonal matrices.
Matrix project_sa(const Matrix& x);
/// Euclidean projection onto the nonnegative orthant.
Matrix project_sc(const Matrix& x);

bool in_sa(const Matrix& x);

/// T x N matrix whose (t, i) entry is the degree of node i in slice t of the
/// reconstruction minus zeta.
Matrix degree_margin(const Decomposition& d, double zeta);

}  // namespace dgd
