#include "dgd/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dgd/errors.hpp"
#include "dgd/priors.hpp"

namespace dgd {

void Decomposition::check_shape() const {
  const auto n = static_cast<Eigen::Index>(n_nodes());
  for (std::size_t r = 0; r < latents.size(); ++r) {
    if (latents[r].rows() != n || latents[r].cols() != n) {
      throw std::invalid_argument("Decomposition: latent " + std::to_string(r) + " is not square N x N");
    }
  }
  if (static_cast<std::size_t>(signatures.cols()) != latents.size()) {
    throw std::invalid_argument("Decomposition: signatures have " + std::to_string(signatures.cols()) +
                                " columns for " + std::to_string(latents.size()) + " latents");
  }
}

bool Decomposition::is_feasible() const {
  for (const auto& a : latents) {
    if (!in_sa(a)) return false;
  }
  return (signatures.array() >= 0.0).all();
}

std::string_view to_string(GradientMode mode) {
  switch (mode) {
    case GradientMode::exact_mask: return "exact_mask";
    case GradientMode::paper_surrogate: return "paper_surrogate";
  }
  return "unknown";
}

GradientMode gradient_mode_from_string(std::string_view name) {
  if (name == "exact_mask") return GradientMode::exact_mask;
  if (name == "paper_surrogate") return GradientMode::paper_surrogate;
  throw ConfigError("gradient_mode", "unknown gradient mode '" + std::string(name) + "'");
}

void Hyperparams::validate() const {
  auto nonneg = [](const char* key, double v) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(key, "must be a finite nonnegative number");
  };
  auto positive = [](const char* key, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key, "must be a finite positive number");
  };
  if (rank == 0) throw ConfigError("rank", "must be at least 1");
  nonneg("gamma", gamma);
  nonneg("delta", delta);
  nonneg("beta", beta);
  nonneg("mu", mu);
  nonneg("rho", rho);
  positive("zeta", zeta);
  nonneg("eta", eta);
  positive("lambda_a", lambda_a);
  positive("lambda_c", lambda_c);
  nonneg("step_a", step_a);
  nonneg("step_c", step_c);
  if (inner_iters == 0) throw ConfigError("inner_iters", "must be at least 1");
  nonneg("tol_outer", tol_outer);
}

Matrix reconstruct_slice(const Decomposition& d, std::size_t t) {
  if (t >= d.n_steps()) throw std::out_of_range("reconstruct: time index out of range");
  const auto n = static_cast<Eigen::Index>(d.n_nodes());
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t r = 0; r < d.rank(); ++r) {
    out.noalias() += d.signatures(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(r)) * d.latents[r];
  }
  return out;
}

DynTensor reconstruct(const Decomposition& d) {
  d.check_shape();
  std::vector<Matrix> slices(d.n_steps());
  for (std::size_t t = 0; t < d.n_steps(); ++t) slices[t] = reconstruct_slice(d, t);
  if (slices.empty()) return DynTensor::zeros(d.n_nodes(), 0);
  return DynTensor(std::move(slices));
}

ObjectiveBreakdown objective(const Decomposition& d, const DynTensor& adj, const MaskTensor& mask,
                             const SmoothCache& cache, const Hyperparams& h) {
  d.check_shape();
  if (!adj.same_shape(mask.values()) || adj.n_nodes() != d.n_nodes() || adj.n_steps() != d.n_steps() ||
      cache.n_steps() != d.n_steps()) {
    throw std::invalid_argument("objective: shape mismatch");
  }

  ObjectiveBreakdown out;
  for (std::size_t t = 0; t < d.n_steps(); ++t) {
    const Matrix resid = adj[t] - reconstruct_slice(d, t);
    switch (h.gradient_mode) {
      case GradientMode::exact_mask:
        out.fit += 0.5 * mask[t].cwiseProduct(resid).squaredNorm();
        break;
      case GradientMode::paper_surrogate:
        out.fit += 0.5 * mask.observed_count(t) * resid.squaredNorm();
        break;
    }
  }

  double ones_sum = 0.0;
  double ridge = 0.0;
  for (const auto& a : d.latents) {
    ones_sum += a.sum();
    ridge += a.squaredNorm();
  }
  out.sparsity = h.gamma * ones_sum;
  out.smoothness = h.delta * smoothness_g(d, cache);
  out.temporal = h.mu * temporal_pi(d.signatures);
  out.overlap = h.beta * overlap_h(d.latents);
  out.ridge_c = 0.5 * h.rho * d.signatures.squaredNorm();
  out.ridge_a = 0.5 * h.eta * ridge;
  out.total = out.fit + out.sparsity + out.smoothness + out.temporal + out.overlap + out.ridge_c + out.ridge_a;
  return out;
}

Matrix project_sa(const Matrix& x) {
  if (x.rows() != x.cols()) throw std::invalid_argument("project_sa: matrix is not square");
  if (!x.allFinite()) throw NumericalAbort("project_sa: non-finite input");
  Matrix s = (0.5 * (x + x.transpose())).cwiseMax(0.0);
  s.diagonal().setZero();
  return s;
}

Matrix project_sc(const Matrix& x) {
  if (!x.allFinite()) throw NumericalAbort("project_sc: non-finite input");
  return x.cwiseMax(0.0);
}

bool in_sa(const Matrix& x) {
  return x.rows() == x.cols() && x == x.transpose() && (x.array() >= 0.0).all() &&
         (x.diagonal().array() == 0.0).all();
}

Matrix degree_margin(const Decomposition& d, double zeta) {
  d.check_shape();
  const auto T = static_cast<Eigen::Index>(d.n_steps());
  const auto n = static_cast<Eigen::Index>(d.n_nodes());
  Matrix out(T, n);
  for (Eigen::Index t = 0; t < T; ++t) {
    out.row(t) = (reconstruct_slice(d, static_cast<std::size_t>(t)).rowwise().sum().array() - zeta).transpose();
  }
  return out;
}

}  // namespace dgd
