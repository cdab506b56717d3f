#include "dgd/baselines.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "dgd/errors.hpp"

namespace dgd {

namespace {

// Solves the SPD system g x = rhs, adding a tiny ridge when g is singular.
Vector solve_ls(const Matrix& g, const Vector& rhs, bool& fallback) {
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() == Eigen::Success) {
    Vector x = llt.solve(rhs);
    if (x.allFinite()) return x;
  }
  fallback = true;
  Matrix reg = g;
  reg.diagonal().array() += 1e-8;
  return reg.ldlt().solve(rhs);
}

double unc_fit(const Matrix& m0, const Matrix& a_vec, const Matrix& a0, const Matrix& c) {
  return m0.cwiseProduct(a_vec - a0 * c.transpose()).squaredNorm();
}

Matrix uniform(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = unif(rng);
  }
  return m;
}

}  // namespace

UncResult unc_solve(const DynTensor& adj, const MaskTensor& mask, std::size_t rank, std::size_t iters,
                    std::uint64_t seed) {
  if (rank == 0) throw ConfigError("rank", "must be at least 1");
  const Flattenings flat = build_flattenings(adj, mask);
  const auto n2 = flat.m0.rows();
  const auto T = flat.m0.cols();
  const auto R = static_cast<Eigen::Index>(rank);

  std::mt19937_64 rng(seed);
  UncResult out;
  out.c = uniform(T, R, rng);
  out.a0 = Matrix::Zero(n2, R);

  Matrix g(R, R);
  Vector rhs(R);
  for (std::size_t it = 0; it < iters; ++it) {
    for (Eigen::Index i = 0; i < n2; ++i) {
      g.setZero();
      rhs.setZero();
      for (Eigen::Index t = 0; t < T; ++t) {
        if (flat.m0(i, t) == 0.0) continue;
        const auto ct = out.c.row(t).transpose();
        g.noalias() += ct * ct.transpose();
        rhs.noalias() += flat.a_vec(i, t) * ct;
      }
      out.a0.row(i) = solve_ls(g, rhs, out.ridge_fallback).transpose();
    }
    out.fit_trace.push_back(unc_fit(flat.m0, flat.a_vec, out.a0, out.c));

    for (Eigen::Index t = 0; t < T; ++t) {
      const Matrix masked = flat.m0.col(t).asDiagonal() * out.a0;
      g.noalias() = out.a0.transpose() * masked;
      rhs.noalias() = masked.transpose() * flat.a_vec.col(t);
      out.c.row(t) = solve_ls(g, rhs, out.ridge_fallback).transpose();
    }
    out.fit_trace.push_back(unc_fit(flat.m0, flat.a_vec, out.a0, out.c));
  }
  return out;
}

DynTensor unc_reconstruct(const UncResult& res, std::size_t n_nodes) {
  const Matrix full = res.a0 * res.c.transpose();
  std::vector<Matrix> slices;
  slices.reserve(static_cast<std::size_t>(full.cols()));
  for (Eigen::Index t = 0; t < full.cols(); ++t) slices.push_back(unvec(full.col(t), n_nodes));
  if (slices.empty()) return DynTensor::zeros(n_nodes, 0);
  return DynTensor(std::move(slices));
}

RunResult nsdgd(const ProblemData& data, Hyperparams h, std::uint64_t seed, const RunOptions& opts) {
  h.delta = 0.0;
  return run_dgd(data, h, seed, opts);
}

namespace {

double cpd_residual(const DynTensor& x, const CpdResult& r) {
  const DynTensor est = cpd_reconstruct(r, false);
  double acc = 0.0;
  for (std::size_t t = 0; t < x.n_steps(); ++t) acc += (x[t] - est[t]).squaredNorm();
  return acc;
}

Matrix gram_solve(const Matrix& mttkrp, const Matrix& gram) {
  // Normal equations X G = M; G is symmetric PSD and may be singular.
  return gram.completeOrthogonalDecomposition().solve(mttkrp.transpose()).transpose();
}

bool cpd_attempt(const DynTensor& x, std::size_t rank, std::size_t iters, std::uint64_t seed, CpdResult& out) {
  const auto n = static_cast<Eigen::Index>(x.n_nodes());
  const auto T = static_cast<Eigen::Index>(x.n_steps());
  const auto F = static_cast<Eigen::Index>(rank);
  std::mt19937_64 rng(seed);
  out.a = uniform(n, F, rng);
  out.b = uniform(n, F, rng);
  out.c = uniform(T, F, rng);
  out.fit_trace.clear();

  Matrix m(n, F);
  for (std::size_t it = 0; it < iters; ++it) {
    // mode 1: M = sum_t (X_t B) diag(c_t)
    m.setZero();
    for (Eigen::Index t = 0; t < T; ++t) {
      m.noalias() += (x[static_cast<std::size_t>(t)] * out.b) * out.c.row(t).asDiagonal();
    }
    out.a = gram_solve(m, (out.b.transpose() * out.b).cwiseProduct(out.c.transpose() * out.c));

    m.setZero();
    for (Eigen::Index t = 0; t < T; ++t) {
      m.noalias() += (x[static_cast<std::size_t>(t)].transpose() * out.a) * out.c.row(t).asDiagonal();
    }
    out.b = gram_solve(m, (out.a.transpose() * out.a).cwiseProduct(out.c.transpose() * out.c));

    Matrix m3(T, F);
    for (Eigen::Index t = 0; t < T; ++t) {
      m3.row(t) = out.a.cwiseProduct(x[static_cast<std::size_t>(t)] * out.b).colwise().sum();
    }
    out.c = gram_solve(m3, (out.a.transpose() * out.a).cwiseProduct(out.b.transpose() * out.b));

    if (!out.a.allFinite() || !out.b.allFinite() || !out.c.allFinite()) return false;
    out.fit_trace.push_back(cpd_residual(x, out));
  }
  return true;
}

}  // namespace

CpdResult cpd_als(const DynTensor& x, std::size_t rank, std::size_t iters, std::uint64_t seed) {
  if (rank == 0) throw ConfigError("rank", "must be at least 1");
  CpdResult out;
  if (cpd_attempt(x, rank, iters, seed, out)) return out;
  out.restarts = 1;
  std::seed_seq reseed{static_cast<std::uint32_t>(seed), 0x9e3779b9u};
  std::uint32_t w[2];
  reseed.generate(w, w + 2);
  if (cpd_attempt(x, rank, iters, (static_cast<std::uint64_t>(w[0]) << 32) | w[1], out)) return out;
  throw NumericalAbort("cpd_als: non-finite factors after one restart");
}

DynTensor cpd_reconstruct(const CpdResult& res, bool symmetrize) {
  const auto T = res.c.rows();
  const auto n = static_cast<std::size_t>(res.a.rows());
  std::vector<Matrix> slices;
  slices.reserve(static_cast<std::size_t>(T));
  for (Eigen::Index t = 0; t < T; ++t) {
    Matrix s = res.a * res.c.row(t).asDiagonal() * res.b.transpose();
    if (symmetrize) s = (0.5 * (s + s.transpose())).eval();
    slices.push_back(std::move(s));
  }
  if (slices.empty()) return DynTensor::zeros(n, 0);
  return DynTensor(std::move(slices));
}

std::size_t matched_cpd_rank(std::size_t n_nodes, std::size_t n_steps, std::size_t dgd_rank) {
  const double n = static_cast<double>(n_nodes);
  const double dof = static_cast<double>(dgd_rank) * (n * (n - 1.0) / 2.0 + static_cast<double>(n_steps));
  const double per_term = 2.0 * n + static_cast<double>(n_steps);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(dof / per_term)));
}

DynTensor run_method(std::string_view method, const ProblemData& data, const Hyperparams& h, std::uint64_t seed,
                     std::size_t baseline_iters) {
  if (method == "dgd") {
    auto res = run_dgd(data, h, seed);
    if (res.history.status == RunStatus::aborted) throw NumericalAbort(res.history.message);
    return reconstruct(res.decomposition);
  }
  if (method == "nsdgd") {
    auto res = nsdgd(data, h, seed);
    if (res.history.status == RunStatus::aborted) throw NumericalAbort(res.history.message);
    return reconstruct(res.decomposition);
  }
  if (method == "unc") {
    return unc_reconstruct(unc_solve(data.adj, data.mask, h.rank, baseline_iters, seed), data.n_nodes());
  }
  if (method == "cpd") {
    const DynTensor observed = data.adj.hadamard(data.mask.values());
    const auto f = matched_cpd_rank(data.n_nodes(), data.n_steps(), h.rank);
    return cpd_reconstruct(cpd_als(observed, f, baseline_iters, seed));
  }
  throw std::invalid_argument("unknown method '" + std::string(method) + "'");
}

}  // namespace dgd
