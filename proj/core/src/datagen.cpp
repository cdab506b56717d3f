#include "dgd/datagen.hpp"

#include <random>
#include <string>

#include "dgd/errors.hpp"

namespace dgd {

namespace {

// Independent streams derived from one user seed.
std::uint64_t substream(std::uint64_t seed, std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

std::vector<std::size_t> equal_blocks(std::size_t n, std::size_t k) {
  return std::vector<std::size_t>(k, n / k);
}

}  // namespace

void SwDynSpec::validate() const {
  if (n_nodes < 2) throw ConfigError("n_nodes", "must be at least 2");
  if (n_steps < 2) throw ConfigError("n_steps", "must be at least 2");
  if (n_signals == 0) throw ConfigError("n_signals", "must be at least 1");
  if (communities_start == 0 || n_nodes % communities_start != 0) {
    throw ConfigError("communities_start", "must divide n_nodes");
  }
  if (communities_end == 0 || n_nodes % communities_end != 0) {
    throw ConfigError("communities_end", "must divide n_nodes");
  }
  if (!(p_in >= 0.0 && p_in <= 1.0)) throw ConfigError("p_in", "must lie in [0, 1]");
  if (!(p_out >= 0.0 && p_out <= 1.0)) throw ConfigError("p_out", "must lie in [0, 1]");
  if (!(alpha >= 0.0)) throw ConfigError("alpha", "must be nonnegative");
  if (!(noise_sigma >= 0.0)) throw ConfigError("noise_sigma", "must be nonnegative");
}

Matrix sbm_graph(const std::vector<std::size_t>& sizes, double p_in, double p_out, std::uint64_t seed) {
  if (!(p_in >= 0.0 && p_in <= 1.0)) throw ConfigError("p_in", "must lie in [0, 1]");
  if (!(p_out >= 0.0 && p_out <= 1.0)) throw ConfigError("p_out", "must lie in [0, 1]");
  std::vector<std::size_t> block;
  for (std::size_t b = 0; b < sizes.size(); ++b) block.insert(block.end(), sizes[b], b);
  const auto n = static_cast<Eigen::Index>(block.size());

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix a = Matrix::Zero(n, n);
  for (Eigen::Index j = 1; j < n; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double p = block[static_cast<std::size_t>(i)] == block[static_cast<std::size_t>(j)] ? p_in : p_out;
      if (unif(rng) < p) {
        a(i, j) = 1.0;
        a(j, i) = 1.0;
      }
    }
  }
  return a;
}

Matrix laplacian(const Matrix& adjacency) {
  Matrix l = -adjacency;
  l.diagonal() += adjacency.rowwise().sum();
  return l;
}

Matrix smooth_signals(const Matrix& adjacency, std::size_t q, double alpha, std::uint64_t seed) {
  if (!in_sa(adjacency)) throw std::invalid_argument("smooth_signals: adjacency must be symmetric, nonnegative, hollow");
  if (!(alpha >= 0.0)) throw ConfigError("alpha", "must be nonnegative");
  const auto n = adjacency.rows();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix w(n, static_cast<Eigen::Index>(q));
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    for (Eigen::Index i = 0; i < n; ++i) w(i, j) = normal(rng);
  }
  if (alpha == 0.0) return w;
  Matrix sys = alpha * laplacian(adjacency);
  sys.diagonal().array() += 1.0;
  return Eigen::LLT<Matrix>(sys).solve(w);
}

MaskTensor sample_mask(std::size_t n_nodes, std::size_t n_steps, double observed_frac, std::uint64_t seed) {
  if (!(observed_frac >= 0.0 && observed_frac <= 1.0)) {
    throw ConfigError("observed_frac", "must lie in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(n_nodes);
  std::vector<Matrix> slices(n_steps, Matrix::Identity(n, n));
  for (auto& m : slices) {
    for (Eigen::Index j = 1; j < n; ++j) {
      for (Eigen::Index i = 0; i < j; ++i) {
        if (unif(rng) < observed_frac) {
          m(i, j) = 1.0;
          m(j, i) = 1.0;
        }
      }
    }
  }
  if (slices.empty()) return MaskTensor(DynTensor::zeros(n_nodes, 0));
  return MaskTensor(DynTensor(std::move(slices)));
}

DynTensor symmetric_noise(std::size_t n_nodes, std::size_t n_steps, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma > 0.0 ? sigma : 1.0);
  DynTensor e = DynTensor::zeros(n_nodes, n_steps);
  if (sigma == 0.0) return e;
  const auto n = static_cast<Eigen::Index>(n_nodes);
  for (std::size_t t = 0; t < n_steps; ++t) {
    for (Eigen::Index j = 1; j < n; ++j) {
      for (Eigen::Index i = 0; i < j; ++i) {
        const double v = normal(rng);
        e[t](i, j) = v;
        e[t](j, i) = v;
      }
    }
  }
  return e;
}

SwDynData swdyn(const SwDynSpec& spec) {
  spec.validate();
  const auto T = static_cast<Eigen::Index>(spec.n_steps);
  SwDynData out;
  out.truth.latents.push_back(
      sbm_graph(equal_blocks(spec.n_nodes, spec.communities_start), spec.p_in, spec.p_out, substream(spec.seed, 1)));
  out.truth.latents.push_back(
      sbm_graph(equal_blocks(spec.n_nodes, spec.communities_end), spec.p_in, spec.p_out, substream(spec.seed, 2)));
  out.truth.signatures.resize(T, 2);
  for (Eigen::Index t = 0; t < T; ++t) {
    const double c1 = 1.0 - static_cast<double>(t) / static_cast<double>(T - 1);
    out.truth.signatures(t, 0) = c1;
    out.truth.signatures(t, 1) = 1.0 - c1;
  }
  out.clean = reconstruct(out.truth);

  std::vector<Matrix> x(spec.n_steps);
  const std::uint64_t signal_seed = substream(spec.seed, 3);
  for (std::size_t t = 0; t < spec.n_steps; ++t) {
    x[t] = smooth_signals(out.clean[t], spec.n_signals, spec.alpha, substream(signal_seed, t));
  }
  out.signals = SignalTensor(std::move(x));

  out.adj = out.clean;
  if (spec.noise_sigma > 0.0) {
    const DynTensor e = symmetric_noise(spec.n_nodes, spec.n_steps, spec.noise_sigma, substream(spec.seed, 4));
    for (std::size_t t = 0; t < spec.n_steps; ++t) {
      out.adj[t] += e[t];
      if (spec.clip_noise) out.adj[t] = out.adj[t].cwiseMax(0.0);
    }
  }
  return out;
}

double mean_edge_count(const DynTensor& adj) {
  if (adj.n_steps() == 0) return 0.0;
  double total = 0.0;
  for (const auto& s : adj.slices()) {
    total += static_cast<double>((s.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().array() != 0.0).count());
  }
  return total / static_cast<double>(adj.n_steps());
}

}  // namespace dgd
