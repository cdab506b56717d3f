#include "dgd/admm_c.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

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

double largest_eigenvalue(const Matrix& sym) {
  if (sym.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

}  // namespace

Matrix CWorkspace::constraint(const Matrix& c, double zeta) const {
  return (c * upsilon.transpose()).array() - zeta;
}

Matrix build_upsilon(std::span<const Matrix> latents) {
  if (latents.empty()) return {};
  const auto n = latents[0].rows();
  Matrix u(n, static_cast<Eigen::Index>(latents.size()));
  for (std::size_t r = 0; r < latents.size(); ++r) {
    if (latents[r].rows() != n || latents[r].cols() != n) {
      throw std::invalid_argument("build_upsilon: latent " + std::to_string(r) + " has inconsistent dimensions");
    }
    u.col(static_cast<Eigen::Index>(r)) = latents[r].rowwise().sum();
  }
  return u;
}

SignatureSubproblem::SignatureSubproblem(std::span<const Matrix> latents, const ProblemData& data,
                                         const Hyperparams& h)
    : h_(h) {
  const Matrix a0 = stack_latent(latents);
  const auto R = a0.cols();
  const auto T = static_cast<Eigen::Index>(data.n_steps());
  if (a0.rows() != data.flat.m0.rows()) {
    throw std::invalid_argument("SignatureSubproblem: latent size does not match the data");
  }

  gram_.resize(static_cast<std::size_t>(T));
  rhs_.resize(T, R);
  double max_gram = 0.0;
  const Matrix full_gram = a0.transpose() * a0;
  for (Eigen::Index t = 0; t < T; ++t) {
    auto& g = gram_[static_cast<std::size_t>(t)];
    switch (h.gradient_mode) {
      case GradientMode::exact_mask: {
        const Matrix masked = data.flat.m0.col(t).asDiagonal() * a0;
        g = a0.transpose() * masked;
        rhs_.row(t) = (masked.transpose() * data.flat.a_vec.col(t)).transpose();
        break;
      }
      case GradientMode::paper_surrogate: {
        const double w = data.flat.f_diag[t];
        g = w * full_gram;
        rhs_.row(t) = w * (a0.transpose() * data.flat.a_vec.col(t)).transpose();
        break;
      }
    }
    max_gram = std::max(max_gram, largest_eigenvalue(g));
  }

  smooth_ = (0.5 * h.delta) * (data.cache.z_bar * a0);
  const Matrix d = diff_operator(static_cast<std::size_t>(T));
  dtd_ = d.transpose() * d;
  upsilon_ = build_upsilon(latents);

  // lambda_max(D^T D) for the path-graph difference operator
  const double dtd_norm =
      T < 2 ? 0.0 : 4.0 * std::pow(std::sin(std::numbers::pi * static_cast<double>(T - 1) / (2.0 * T)), 2);
  lipschitz_ = max_gram + 2.0 * h.mu * dtd_norm + h.rho +
               h.lambda_c * largest_eigenvalue(upsilon_.transpose() * upsilon_);
}

Matrix SignatureSubproblem::gradient(const Matrix& c, const CWorkspace& ws) const {
  const auto T = c.rows();
  Matrix g(T, c.cols());
  for (Eigen::Index t = 0; t < T; ++t) {
    g.row(t) = (gram_[static_cast<std::size_t>(t)] * c.row(t).transpose()).transpose() - rhs_.row(t);
  }
  g += smooth_;
  if (h_.mu != 0.0) g.noalias() += (2.0 * h_.mu) * (dtd_ * c);
  g += h_.rho * c;
  g.noalias() += ws.lambda.transpose() * ws.upsilon;
  g.noalias() += h_.lambda_c * ((ws.constraint(c, h_.zeta) - ws.q) * ws.upsilon);
  return g;
}

double SignatureSubproblem::step() const {
  if (h_.step_c > 0.0) return h_.step_c;
  if (h_.literal_steps) return h_.lambda_c;
  return lipschitz_ > 0.0 ? 1.0 / lipschitz_ : 1.0;
}

Matrix grad_c_lagrangian(const Matrix& c, const CWorkspace& ws, std::span<const Matrix> latents,
                         const ProblemData& data, const Hyperparams& h) {
  return SignatureSubproblem(latents, data, h).gradient(c, ws);
}

CSolveResult solve_c_subproblem(const Decomposition& d, const ProblemData& data, const Hyperparams& h,
                                std::mt19937_64& rng) {
  if (h.inner_iters == 0) throw ConfigError("inner_iters", "must be at least 1");
  d.check_shape();
  const SignatureSubproblem sub(d.latents, data, h);
  const auto n = static_cast<Eigen::Index>(d.n_nodes());
  const auto T = static_cast<Eigen::Index>(d.n_steps());

  CSolveResult out;
  out.ws.upsilon = sub.upsilon();
  out.ws.q = standard_normal(T, n, rng);
  out.ws.lambda = standard_normal(n, T, rng);
  out.signatures = d.signatures;
  out.primal_residuals.reserve(h.inner_iters);

  const double step = sub.step();
  for (std::size_t k = 0; k < h.inner_iters; ++k) {
    Matrix next = out.signatures - step * sub.gradient(out.signatures, out.ws);
    if (!next.allFinite()) {
      throw NumericalAbort("signatures diverged at inner iteration " + std::to_string(k) +
                           " (step_c = " + std::to_string(step) + " is too large)");
    }
    out.signatures = project_sc(next);
    const Matrix s = out.ws.constraint(out.signatures, h.zeta);
    out.ws.q = (out.ws.lambda.transpose() / h.lambda_c + s).cwiseMax(0.0);
    const Matrix resid = s - out.ws.q;
    out.ws.lambda.noalias() += h.lambda_c * resid.transpose();
    out.primal_residuals.push_back(resid.norm());
    if (h.early_exit && out.primal_residuals.back() < 1e-6 * h.zeta * std::sqrt(static_cast<double>(n * T))) break;
  }
  return out;
}

}  // namespace dgd
