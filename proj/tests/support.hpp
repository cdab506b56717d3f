#pragma once

// Random instances and brute-force reference computations shared by the unit
// and acceptance tests. The reference objective and Lagrangians are written
// as explicit index sums, independently of the library's matrix formulations.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "dgd/admm_a.hpp"
#include "dgd/admm_c.hpp"
#include "dgd/model.hpp"
#include "dgd/priors.hpp"
#include "dgd/problem.hpp"
#include "dgd/tensor.hpp"

namespace dgd::test {

inline Matrix uniform_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng, double lo = 0.0,
                             double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = u(rng);
  }
  return m;
}

inline Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = g(rng);
  }
  return m;
}

/// Random member of S_A.
inline Matrix random_sa(std::size_t n, std::mt19937_64& rng) {
  const auto ni = static_cast<Eigen::Index>(n);
  Matrix a = uniform_matrix(ni, ni, rng);
  a = (a + a.transpose()).eval() * 0.5;
  a.diagonal().setZero();
  return a;
}

inline MaskTensor random_mask(std::size_t n, std::size_t t_steps, double frac, std::mt19937_64& rng) {
  std::bernoulli_distribution b(frac);
  std::vector<Matrix> slices;
  const auto ni = static_cast<Eigen::Index>(n);
  for (std::size_t t = 0; t < t_steps; ++t) {
    Matrix m = Matrix::Zero(ni, ni);
    for (Eigen::Index i = 0; i < ni; ++i) {
      m(i, i) = 1.0;
      for (Eigen::Index j = i + 1; j < ni; ++j) m(i, j) = m(j, i) = b(rng) ? 1.0 : 0.0;
    }
    slices.push_back(std::move(m));
  }
  return MaskTensor(DynTensor(std::move(slices)));
}

inline Decomposition random_decomposition(std::size_t n, std::size_t t_steps, std::size_t rank,
                                          std::mt19937_64& rng) {
  Decomposition d;
  for (std::size_t r = 0; r < rank; ++r) d.latents.push_back(random_sa(n, rng));
  d.signatures = uniform_matrix(static_cast<Eigen::Index>(t_steps), static_cast<Eigen::Index>(rank), rng);
  return d;
}

/// Small random problem: adjacency, mask, signals and a decomposition, with
/// every hyperparameter switched on.
struct Instance {
  std::size_t n = 0, t = 0, r = 0;
  ProblemData data;
  SignalTensor signals;
  Decomposition d;
  Hyperparams h;
};

inline Instance random_instance(std::size_t n, std::size_t t_steps, std::size_t rank, std::mt19937_64& rng,
                                GradientMode mode = GradientMode::exact_mask, double frac = 0.7) {
  Instance in;
  in.n = n;
  in.t = t_steps;
  in.r = rank;
  std::vector<Matrix> adj, sig;
  for (std::size_t t = 0; t < t_steps; ++t) {
    adj.push_back(random_sa(n, rng) * 2.0);
    sig.push_back(normal_matrix(static_cast<Eigen::Index>(n), 3, rng));
  }
  in.signals = SignalTensor(sig);
  in.data = make_problem(DynTensor(adj), random_mask(n, t_steps, frac, rng), build_cache(in.signals));
  in.d = random_decomposition(n, t_steps, rank, rng);
  in.h.rank = rank;
  in.h.gamma = 0.3;
  in.h.delta = 0.2;
  in.h.beta = 0.4;
  in.h.mu = 0.7;
  in.h.rho = 0.25;
  in.h.zeta = 0.5;
  in.h.eta = 0.15;
  in.h.lambda_a = 0.8;
  in.h.lambda_c = 0.6;
  in.h.gradient_mode = mode;
  return in;
}

// ---------------------------------------------------------------------------
// Reference computations.

/// [Z_t]_ij = sum_q (X_t[i, q] - X_t[j, q])^2 by explicit loops.
inline Matrix ref_distance(const Matrix& x) {
  Matrix z(x.rows(), x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.rows(); ++j) {
      double s = 0.0;
      for (Eigen::Index q = 0; q < x.cols(); ++q) s += (x(i, q) - x(j, q)) * (x(i, q) - x(j, q));
      z(i, j) = s;
    }
  }
  return z;
}

/// The full objective as an explicit index sum. Latents need not be
/// symmetric, so every entry is an independent coordinate.
inline double ref_objective(const Decomposition& d, const DynTensor& adj, const MaskTensor& mask,
                            const std::vector<Matrix>& z, const Hyperparams& h) {
  const auto N = static_cast<Eigen::Index>(adj.n_nodes());
  const auto T = static_cast<Eigen::Index>(adj.n_steps());
  const auto R = static_cast<Eigen::Index>(d.rank());
  double fit = 0.0, sparse = 0.0, smooth = 0.0, temporal = 0.0, overlap = 0.0, ridge_c = 0.0, ridge_a = 0.0;
  for (Eigen::Index t = 0; t < T; ++t) {
    double w = 0.0;
    for (Eigen::Index i = 0; i < N; ++i) {
      for (Eigen::Index j = 0; j < N; ++j) w += mask[static_cast<std::size_t>(t)](i, j);
    }
    for (Eigen::Index i = 0; i < N; ++i) {
      for (Eigen::Index j = 0; j < N; ++j) {
        double model = 0.0;
        for (Eigen::Index r = 0; r < R; ++r) model += d.signatures(t, r) * d.latents[static_cast<std::size_t>(r)](i, j);
        const double e = adj[static_cast<std::size_t>(t)](i, j) - model;
        const double weight =
            h.gradient_mode == GradientMode::exact_mask ? mask[static_cast<std::size_t>(t)](i, j) : w;
        fit += 0.5 * weight * e * e;
      }
    }
  }
  for (Eigen::Index r = 0; r < R; ++r) {
    const Matrix& a = d.latents[static_cast<std::size_t>(r)];
    for (Eigen::Index i = 0; i < N; ++i) {
      for (Eigen::Index j = 0; j < N; ++j) {
        sparse += a(i, j);
        ridge_a += a(i, j) * a(i, j);
        for (Eigen::Index t = 0; t < T; ++t) smooth += d.signatures(t, r) * a(i, j) * z[static_cast<std::size_t>(t)](j, i) / 2.0;
        for (Eigen::Index s = 0; s < R; ++s) {
          if (s != r) overlap += a(i, j) * d.latents[static_cast<std::size_t>(s)](i, j);
        }
      }
    }
    for (Eigen::Index t = 0; t < T; ++t) {
      ridge_c += d.signatures(t, r) * d.signatures(t, r);
      if (t > 0) {
        const double diff = d.signatures(t, r) - d.signatures(t - 1, r);
        temporal += diff * diff;
      }
    }
  }
  return fit + h.gamma * sparse + h.delta * smooth + h.mu * temporal + h.beta * overlap + 0.5 * h.rho * ridge_c +
         0.5 * h.eta * ridge_a;
}

/// Objective plus the latent-r augmented terms
/// tr(Lambda S) + lambda/2 ||S - P||^2 with S_it = sum_s C[t, s] deg_s(i) - zeta.
inline double ref_lagrangian_a(const Decomposition& d, const Matrix& p, const Matrix& lambda,
                               const ProblemData& data, const Hyperparams& h) {
  const auto N = static_cast<Eigen::Index>(d.n_nodes());
  const auto T = static_cast<Eigen::Index>(d.n_steps());
  double aug = 0.0;
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index t = 0; t < T; ++t) {
      double s = -h.zeta;
      for (std::size_t q = 0; q < d.rank(); ++q) {
        double deg = 0.0;
        for (Eigen::Index j = 0; j < N; ++j) deg += d.latents[q](i, j);
        s += d.signatures(t, static_cast<Eigen::Index>(q)) * deg;
      }
      aug += lambda(t, i) * s + 0.5 * h.lambda_a * (s - p(i, t)) * (s - p(i, t));
    }
  }
  return ref_objective(d, data.adj, data.mask, data.cache.z, h) + aug;
}

/// Objective plus the signature augmented terms
/// tr(Lambda S) + lambda_c/2 ||S - Q||^2 with S_ti = sum_r C[t, r] deg_r(i) - zeta.
inline double ref_lagrangian_c(const Decomposition& d, const Matrix& q, const Matrix& lambda, const ProblemData& data,
                               const Hyperparams& h) {
  const auto N = static_cast<Eigen::Index>(d.n_nodes());
  const auto T = static_cast<Eigen::Index>(d.n_steps());
  double aug = 0.0;
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index i = 0; i < N; ++i) {
      double s = -h.zeta;
      for (std::size_t r = 0; r < d.rank(); ++r) {
        double deg = 0.0;
        for (Eigen::Index j = 0; j < N; ++j) deg += d.latents[r](i, j);
        s += d.signatures(t, static_cast<Eigen::Index>(r)) * deg;
      }
      aug += lambda(i, t) * s + 0.5 * h.lambda_c * (s - q(t, i)) * (s - q(t, i));
    }
  }
  return ref_objective(d, data.adj, data.mask, data.cache.z, h) + aug;
}

/// Central differences of f over every entry of x.
inline Matrix central_difference(const std::function<double(const Matrix&)>& f, const Matrix& x, double step) {
  Matrix g(x.rows(), x.cols());
  Matrix probe = x;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      probe(i, j) = x(i, j) + step;
      const double up = f(probe);
      probe(i, j) = x(i, j) - step;
      const double down = f(probe);
      probe(i, j) = x(i, j);
      g(i, j) = (up - down) / (2.0 * step);
    }
  }
  return g;
}

inline double relative_difference(const Matrix& a, const Matrix& b) {
  const double scale = std::max({a.norm(), b.norm(), 1e-300});
  return (a - b).norm() / scale;
}

/// Worst relative FD error of the latent and signature gradients on one
/// random instance.
struct GradientCheck {
  double latent = 0.0;
  double signature = 0.0;
};

inline GradientCheck check_gradients(std::size_t n, std::size_t t_steps, std::size_t rank, GradientMode mode,
                                     std::mt19937_64& rng) {
  Instance in = random_instance(n, t_steps, rank, rng, mode);
  GradientCheck out;
  const auto ni = static_cast<Eigen::Index>(n);
  const auto ti = static_cast<Eigen::Index>(t_steps);
  for (std::size_t r = 0; r < rank; ++r) {
    AWorkspace ws = build_a_workspace(in.d, r, in.h.zeta);
    ws.p = normal_matrix(ni, ti, rng);
    ws.lambda = normal_matrix(ti, ni, rng);
    // Perturb off S_A so the check covers general matrices.
    const Matrix a = in.d.latents[r] + 0.1 * normal_matrix(ni, ni, rng);
    const Matrix g = grad_a_lagrangian(a, ws, in.d, r, in.data, in.h);
    auto f = [&](const Matrix& x) {
      Decomposition e = in.d;
      e.latents[r] = x;
      return ref_lagrangian_a(e, ws.p, ws.lambda, in.data, in.h);
    };
    out.latent = std::max(out.latent, relative_difference(g, central_difference(f, a, 1e-5)));
  }
  CWorkspace ws;
  ws.upsilon = build_upsilon(in.d.latents);
  ws.q = normal_matrix(ti, ni, rng);
  ws.lambda = normal_matrix(ni, ti, rng);
  const Matrix c = in.d.signatures + 0.1 * normal_matrix(ti, static_cast<Eigen::Index>(rank), rng);
  const Matrix g = grad_c_lagrangian(c, ws, in.d.latents, in.data, in.h);
  auto f = [&](const Matrix& x) {
    Decomposition e = in.d;
    e.signatures = x;
    return ref_lagrangian_c(e, ws.q, ws.lambda, in.data, in.h);
  };
  out.signature = relative_difference(g, central_difference(f, c, 1e-5));
  return out;
}

/// Sample Pearson correlation.
inline double correlation(const Vector& a, const Vector& b) {
  const Vector x = a.array() - a.mean();
  const Vector y = b.array() - b.mean();
  const double den = x.norm() * y.norm();
  return den > 0.0 ? x.dot(y) / den : 0.0;
}

/// Planted rank-R model with Erdos-Renyi supports (density 0.3, weights in
/// [0.5, 1.5]) and separable signatures: column r peaks at its own time step
/// where every other column is zero.
inline Decomposition planted_model(std::size_t n, std::size_t t_steps, std::size_t rank, std::mt19937_64& rng) {
  std::bernoulli_distribution edge(0.3);
  std::uniform_real_distribution<double> weight(0.5, 1.5);
  Decomposition d;
  const auto ni = static_cast<Eigen::Index>(n);
  for (std::size_t r = 0; r < rank; ++r) {
    Matrix a = Matrix::Zero(ni, ni);
    for (Eigen::Index i = 0; i < ni; ++i) {
      for (Eigen::Index j = i + 1; j < ni; ++j) {
        if (edge(rng)) a(i, j) = a(j, i) = weight(rng);
      }
    }
    d.latents.push_back(std::move(a));
  }
  const auto T = static_cast<Eigen::Index>(t_steps);
  const auto R = static_cast<Eigen::Index>(rank);
  d.signatures = Matrix::Zero(T, R);
  for (Eigen::Index r = 0; r < R; ++r) {
    const double peak = R == 1 ? 0.0 : static_cast<double>(r) * static_cast<double>(T - 1) / static_cast<double>(R - 1);
    const double width = R == 1 ? static_cast<double>(T) : static_cast<double>(T - 1) / static_cast<double>(R - 1);
    for (Eigen::Index t = 0; t < T; ++t) {
      d.signatures(t, r) = std::max(0.0, 1.0 - std::abs(static_cast<double>(t) - peak) / width) + (R == 1 ? 0.5 : 0.0);
    }
  }
  return d;
}

/// Best correlation of the fitted signature columns against the planted ones
/// over all column permutations (worst column reported).
inline double matched_signature_correlation(const Matrix& fitted, const Matrix& planted) {
  std::vector<int> perm(static_cast<std::size_t>(planted.cols()));
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  double best = -1.0;
  do {
    double worst = 1.0;
    for (Eigen::Index r = 0; r < planted.cols(); ++r) {
      worst = std::min(worst, correlation(fitted.col(perm[static_cast<std::size_t>(r)]), planted.col(r)));
    }
    best = std::max(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}


}  // namespace dgd::test
