#include "dgd/admm_a.hpp"

#include <string>

#include "dgd/errors.hpp"
#include "dgd/priors.hpp"

namespace dgd {

namespace {

Matrix standard_normal(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = dist(rng);
  }
  return m;
}

}  // namespace

Matrix AWorkspace::constraint(const Matrix& a_r) const {
  // A_r Phi_r has column t equal to C[t, r] * (A_r 1), computed as an outer product.
  const Vector deg = a_r.rowwise().sum();
  return deg * phi.row(0) + gamma;
}

AWorkspace build_a_workspace(const Decomposition& d, std::size_t r, double zeta) {
  d.check_shape();
  if (r >= d.rank()) throw std::out_of_range("build_a_workspace: latent index out of range");
  const auto n = static_cast<Eigen::Index>(d.n_nodes());
  const auto T = static_cast<Eigen::Index>(d.n_steps());
  AWorkspace ws;
  ws.phi = Matrix::Ones(n, 1) * d.signatures.col(static_cast<Eigen::Index>(r)).transpose();
  ws.gamma = Matrix::Constant(n, T, -zeta);
  for (std::size_t s = 0; s < d.rank(); ++s) {
    if (s == r) continue;
    const Vector deg = d.latents[s].rowwise().sum();
    ws.gamma.noalias() += deg * d.signatures.col(static_cast<Eigen::Index>(s)).transpose();
  }
  ws.p = Matrix::Zero(n, T);
  ws.lambda = Matrix::Zero(T, n);
  return ws;
}

LatentSubproblem::LatentSubproblem(const Decomposition& d, std::size_t r, const ProblemData& data,
                                   const Hyperparams& h)
    : r_(r), h_(h) {
  d.check_shape();
  if (r >= d.rank()) throw std::out_of_range("LatentSubproblem: latent index out of range");
  if (data.n_nodes() != d.n_nodes() || data.n_steps() != d.n_steps()) {
    throw std::invalid_argument("LatentSubproblem: data and decomposition shapes differ");
  }
  const auto n = static_cast<Eigen::Index>(d.n_nodes());
  const auto ri = static_cast<Eigen::Index>(r);

  curvature_ = Matrix::Zero(n, n);
  linear_ = Matrix::Zero(n, n);
  Matrix others(n, n);
  for (std::size_t t = 0; t < d.n_steps(); ++t) {
    const auto ti = static_cast<Eigen::Index>(t);
    const double c = d.signatures(ti, ri);
    if (c == 0.0) continue;
    others.setZero();
    for (std::size_t s = 0; s < d.rank(); ++s) {
      if (s != r) others.noalias() += d.signatures(ti, static_cast<Eigen::Index>(s)) * d.latents[s];
    }
    switch (h.gradient_mode) {
      case GradientMode::exact_mask:
        curvature_.noalias() += (c * c) * data.mask[t];
        linear_.noalias() += c * data.mask[t].cwiseProduct(others - data.adj[t]);
        break;
      case GradientMode::paper_surrogate: {
        const double w = data.flat.f_diag[ti];
        curvature_.array() += c * c * w;
        linear_.noalias() += (c * w) * (others - data.adj[t]);
        break;
      }
    }
  }

  const Vector c_r = d.signatures.col(ri);
  if (h.delta != 0.0) linear_.noalias() += h.delta * xi_matrix(data.cache, c_r).transpose();
  linear_.array() += h.gamma;
  for (std::size_t s = 0; s < d.rank(); ++s) {
    if (s != r) linear_.noalias() += 2.0 * h.beta * d.latents[s];
  }

  lipschitz_ = curvature_.maxCoeff() + h.eta + h.lambda_a * static_cast<double>(n) * c_r.squaredNorm();
}

Matrix LatentSubproblem::gradient(const Matrix& a_r, const AWorkspace& ws) const {
  Matrix g = curvature_.cwiseProduct(a_r) + linear_;
  if (h_.eta != 0.0) g.noalias() += h_.eta * a_r;
  // Lambda^T Phi^T + lambda (A Phi + Gamma - P) Phi^T; Phi^T = c_r 1^T, so
  // both terms are (N x T)(T) products broadcast along columns.
  const Vector c_r = ws.phi.row(0).transpose();
  const Matrix resid = ws.constraint(a_r) - ws.p;
  const Vector row_term = ws.lambda.transpose() * c_r + h_.lambda_a * (resid * c_r);
  g.colwise() += row_term;
  return g;
}

double LatentSubproblem::step() const {
  if (h_.step_a > 0.0) return h_.step_a;
  if (h_.literal_steps) return h_.lambda_a;
  return lipschitz_ > 0.0 ? 1.0 / lipschitz_ : 1.0;
}

Matrix grad_a_lagrangian(const Matrix& a_r, const AWorkspace& ws, const Decomposition& d, std::size_t r,
                         const ProblemData& data, const Hyperparams& h) {
  return LatentSubproblem(d, r, data, h).gradient(a_r, ws);
}

ASolveResult solve_a_subproblem(const Decomposition& d, std::size_t r, const ProblemData& data,
                                const Hyperparams& h, std::mt19937_64& rng) {
  if (h.inner_iters == 0) throw ConfigError("inner_iters", "must be at least 1");
  const LatentSubproblem sub(d, r, data, h);
  ASolveResult out;
  out.ws = build_a_workspace(d, r, h.zeta);
  const auto n = static_cast<Eigen::Index>(d.n_nodes());
  const auto T = static_cast<Eigen::Index>(d.n_steps());
  out.ws.p = standard_normal(n, T, rng);
  out.ws.lambda = standard_normal(T, n, rng);
  out.latent = d.latents[r];
  out.primal_residuals.reserve(h.inner_iters);

  const double step = sub.step();
  const double gamma_norm = out.ws.gamma.norm();
  for (std::size_t k = 0; k < h.inner_iters; ++k) {
    Matrix next = out.latent - step * sub.gradient(out.latent, out.ws);
    if (!next.allFinite()) {
      throw NumericalAbort("latent " + std::to_string(r) + " diverged at inner iteration " + std::to_string(k) +
                           " (step_a = " + std::to_string(step) + " is too large)");
    }
    out.latent = project_sa(next);
    const Matrix s = out.ws.constraint(out.latent);
    out.ws.p = (out.ws.lambda.transpose() / h.lambda_a + s).cwiseMax(0.0);
    const Matrix resid = s - out.ws.p;
    out.ws.lambda.noalias() += h.lambda_a * resid.transpose();
    out.primal_residuals.push_back(resid.norm());
    if (h.early_exit && out.primal_residuals.back() < 1e-6 * gamma_norm) break;
  }
  return out;
}

}  // namespace dgd
