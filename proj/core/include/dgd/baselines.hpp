#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "dgd/driver.hpp"
#include "dgd/model.hpp"
#include "dgd/problem.hpp"
#include "dgd/tensor.hpp"

namespace dgd {

/// Unconstrained masked factorization A_vec ~ A_0 C^T.
struct UncResult {
  Matrix a0;  // N^2 x R
  Matrix c;   // T x R
  std::vector<double> fit_trace;  // masked squared residual after every half-step
  bool ridge_fallback = false;    // some least-squares block was rank deficient
};

/// Alternating least squares on ||M_0 o (A_vec - A_0 C^T)||_F^2 with no
/// constraints or priors.
UncResult unc_solve(const DynTensor& adj, const MaskTensor& mask, std::size_t rank, std::size_t iters,
                    std::uint64_t seed);

DynTensor unc_reconstruct(const UncResult& res, std::size_t n_nodes);

/// The DGD run with the signal prior switched off (delta = 0).
RunResult nsdgd(const ProblemData& data, Hyperparams h, std::uint64_t seed, const RunOptions& opts = {});

struct CpdResult {
  Matrix a;  // N x F
  Matrix b;  // N x F
  Matrix c;  // T x F
  std::vector<double> fit_trace;  // squared residual after each full sweep
  std::size_t restarts = 0;
};

/// Plain CP-ALS on the given tensor (entries not observed should already be
/// zero). Restarts once from a new seed on a non-finite iterate, then throws
/// NumericalAbort.
CpdResult cpd_als(const DynTensor& x, std::size_t rank, std::size_t iters, std::uint64_t seed);

/// sum_f a_f o b_f o c_f, optionally symmetrized per slice.
DynTensor cpd_reconstruct(const CpdResult& res, bool symmetrize = true);

/// CP rank F with F (2N + T) closest to R (N (N - 1) / 2 + T), at least 1.
std::size_t matched_cpd_rank(std::size_t n_nodes, std::size_t n_steps, std::size_t dgd_rank);

/// Runs a registered method (`dgd`, `nsdgd`, `unc`, `cpd`) and returns its
/// reconstruction of the full tensor. `rank` is the DGD-equivalent rank; cpd
/// converts it with matched_cpd_rank. Throws std::invalid_argument for an
/// unknown name.
DynTensor run_method(std::string_view method, const ProblemData& data, const Hyperparams& h, std::uint64_t seed,
                     std::size_t baseline_iters);

inline constexpr std::string_view kMethodNames[] = {"dgd", "nsdgd", "unc", "cpd"};

}  // namespace dgd
