#pragma once

#include <cstdint>
#include <vector>

#include "dgd/model.hpp"
#include "dgd/tensor.hpp"

namespace dgd {

/// Parameters of the synthetic switching dynamic network: a two-community
/// SBM graph blended linearly into a four-community one.
struct SwDynSpec {
  std::size_t n_nodes = 40;
  std::size_t n_steps = 50;
  std::size_t n_signals = 1000;
  std::size_t communities_start = 2;
  std::size_t communities_end = 4;
  double p_in = 0.22;
  double p_out = 0.02;
  double alpha = 10.0;        // Tikhonov filter strength
  double noise_sigma = 0.0;   // std of the symmetric additive error
  bool clip_noise = false;    // clip noisy entries at zero
  std::uint64_t seed = 0;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

struct SwDynData {
  DynTensor adj;    // true tensor plus noise (the observed tensor before masking)
  DynTensor clean;  // noiseless tensor, equal to reconstruct(truth)
  SignalTensor signals;
  Decomposition truth;
};

/// Symmetric 0/1 SBM adjacency with blocks of the given sizes.
Matrix sbm_graph(const std::vector<std::size_t>& sizes, double p_in, double p_out, std::uint64_t seed);

/// Combinatorial Laplacian diag(A 1) - A.
Matrix laplacian(const Matrix& adjacency);

/// X = (I + alpha L)^{-1} W with W i.i.d. standard normal (N x q).
Matrix smooth_signals(const Matrix& adjacency, std::size_t q, double alpha, std::uint64_t seed);

/// Each unordered pair of each slice is observed independently with
/// probability observed_frac; the diagonal is always observed.
MaskTensor sample_mask(std::size_t n_nodes, std::size_t n_steps, double observed_frac, std::uint64_t seed);

/// Symmetric, zero-diagonal Gaussian noise tensor.
DynTensor symmetric_noise(std::size_t n_nodes, std::size_t n_steps, double sigma, std::uint64_t seed);

SwDynData swdyn(const SwDynSpec& spec);

/// Mean number of undirected edges (nonzero upper-triangular entries) per slice.
double mean_edge_count(const DynTensor& adj);

}  // namespace dgd
