#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dgd/model.hpp"
#include "dgd/problem.hpp"

namespace dgd {

enum class RunStatus { converged, max_iters, aborted };

std::string_view to_string(RunStatus status);

struct IterationRecord {
  std::size_t iter = 0;  // 1-based outer iteration
  ObjectiveBreakdown objective;
  double rel_change = 0.0;
  std::vector<double> latent_residuals;  // final primal residual of each A_r solve
  double signature_residual = 0.0;
  double seconds = 0.0;
};

struct RunHistory {
  ObjectiveBreakdown initial;
  std::vector<IterationRecord> iterations;
  RunStatus status = RunStatus::max_iters;
  std::vector<std::size_t> unobserved_steps;  // time steps with an all-zero mask
  std::string message;
};

struct RunResult {
  Decomposition decomposition;
  RunHistory history;
};

struct RunOptions {
  /// When set, one `iter=<i> total=<f> fit=<f> rel_change=<f>` line per outer
  /// iteration is written here.
  std::ostream* progress = nullptr;
};

/// Uniform [0, 1] latents (mirrored to symmetric, zero diagonal) and
/// signatures. Deterministic in `seed`.
Decomposition initialize(std::uint64_t seed, std::size_t n_nodes, std::size_t n_steps, std::size_t rank);

/// Per latent r: whether sum_t C[t, r]^2 * (1^T m_t) > 0, which makes the
/// latent-r block strongly convex.
std::vector<bool> check_assumption1(const Matrix& c, const Flattenings& flat);

/// Alternating minimization: for each outer iteration, update A_1..A_R in
/// order (each seeing the freshest other latents), then C.
///
/// Throws std::invalid_argument if no entry is observed. Numerical
/// divergence inside a block ends the run with status `aborted` and the last
/// finite decomposition.
RunResult run_dgd(const ProblemData& data, const Hyperparams& h, std::uint64_t seed, const RunOptions& opts = {});

RunResult run_dgd(const DynTensor& adj, const MaskTensor& mask, const SignalTensor& signals, const Hyperparams& h,
                  std::uint64_t seed, const RunOptions& opts = {});

}  // namespace dgd
