#include "dgd/priors.hpp"

#include <stdexcept>

namespace dgd {

SmoothCache SmoothCache::zeros(std::size_t n_nodes, std::size_t n_steps) {
  const auto n = static_cast<Eigen::Index>(n_nodes);
  SmoothCache c;
  c.z.assign(n_steps, Matrix::Zero(n, n));
  c.z_bar = Matrix::Zero(static_cast<Eigen::Index>(n_steps), n * n);
  return c;
}

SmoothCache build_cache(const SignalTensor& x) {
  const auto n = static_cast<Eigen::Index>(x.n_nodes());
  const auto T = static_cast<Eigen::Index>(x.n_steps());
  SmoothCache c;
  c.z.reserve(x.n_steps());
  c.z_bar.resize(T, n * n);
  for (Eigen::Index t = 0; t < T; ++t) {
    const Matrix& xt = x[static_cast<std::size_t>(t)];
    // ||x_i||^2 + ||x_j||^2 - 2 x_i.x_j, then cleaned up so the diagonal is
    // exactly zero and round-off cannot produce negative distances.
    const Vector sq = xt.rowwise().squaredNorm();
    Matrix z = (-2.0 * xt * xt.transpose()).colwise() + sq;
    z.rowwise() += sq.transpose();
    z = (0.5 * (z + z.transpose())).cwiseMax(0.0).eval();
    z.diagonal().setZero();
    const Matrix zt = z.transpose();
    c.z_bar.row(t) = vec_mat(zt).transpose();
    c.z.push_back(std::move(z));
  }
  return c;
}

Matrix xi_matrix(const SmoothCache& cache, const Vector& c_r) {
  if (static_cast<std::size_t>(c_r.size()) != cache.n_steps()) {
    throw std::invalid_argument("xi_matrix: signature length does not match the number of time steps");
  }
  if (cache.z.empty()) return {};
  Matrix xi = Matrix::Zero(cache.z[0].rows(), cache.z[0].cols());
  for (std::size_t t = 0; t < cache.n_steps(); ++t) {
    xi.noalias() += 0.5 * c_r[static_cast<Eigen::Index>(t)] * cache.z[t];
  }
  return xi;
}

double smoothness_g(const Decomposition& d, const SmoothCache& cache) {
  if (cache.n_steps() != d.n_steps()) throw std::invalid_argument("smoothness_g: time dimension mismatch");
  double g = 0.0;
  for (std::size_t r = 0; r < d.rank(); ++r) {
    for (std::size_t t = 0; t < d.n_steps(); ++t) {
      // tr(A_r Z_t) with both symmetric is the entrywise inner product
      const double tr = (d.latents[r].transpose().cwiseProduct(cache.z[t])).sum();
      g += d.signatures(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(r)) * 0.5 * tr;
    }
  }
  return g;
}

double overlap_h(std::span<const Matrix> latents) {
  double h = 0.0;
  for (std::size_t r = 0; r < latents.size(); ++r) {
    for (std::size_t s = 0; s < latents.size(); ++s) {
      if (s != r) h += latents[r].cwiseProduct(latents[s]).sum();
    }
  }
  return h;
}

Matrix diff_operator(std::size_t n_steps) {
  if (n_steps < 2) return Matrix(0, static_cast<Eigen::Index>(n_steps));
  const auto T = static_cast<Eigen::Index>(n_steps);
  Matrix d = Matrix::Zero(T - 1, T);
  for (Eigen::Index t = 0; t + 1 < T; ++t) {
    d(t, t) = -1.0;
    d(t, t + 1) = 1.0;
  }
  return d;
}

double temporal_pi(const Matrix& c) {
  if (c.rows() < 2) return 0.0;
  return (c.bottomRows(c.rows() - 1) - c.topRows(c.rows() - 1)).squaredNorm();
}

}  // namespace dgd
