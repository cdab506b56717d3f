#include "dgd/driver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

#include "dgd/admm_a.hpp"
#include "dgd/admm_c.hpp"
#include "dgd/errors.hpp"

namespace dgd {

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::converged: return "converged";
    case RunStatus::max_iters: return "max_iters";
    case RunStatus::aborted: return "aborted";
  }
  return "unknown";
}

Decomposition initialize(std::uint64_t seed, std::size_t n_nodes, std::size_t n_steps, std::size_t rank) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(n_nodes);
  Decomposition d;
  d.latents.reserve(rank);
  for (std::size_t r = 0; r < rank; ++r) {
    Matrix a = Matrix::Zero(n, n);
    for (Eigen::Index j = 1; j < n; ++j) {
      for (Eigen::Index i = 0; i < j; ++i) {
        a(i, j) = unif(rng);
        a(j, i) = a(i, j);
      }
    }
    d.latents.push_back(std::move(a));
  }
  d.signatures.resize(static_cast<Eigen::Index>(n_steps), static_cast<Eigen::Index>(rank));
  for (Eigen::Index r = 0; r < d.signatures.cols(); ++r) {
    for (Eigen::Index t = 0; t < d.signatures.rows(); ++t) d.signatures(t, r) = unif(rng);
  }
  return d;
}

std::vector<bool> check_assumption1(const Matrix& c, const Flattenings& flat) {
  if (c.rows() != flat.f_diag.size()) throw std::invalid_argument("check_assumption1: time dimension mismatch");
  std::vector<bool> ok(static_cast<std::size_t>(c.cols()));
  for (Eigen::Index r = 0; r < c.cols(); ++r) {
    ok[static_cast<std::size_t>(r)] = c.col(r).array().square().matrix().dot(flat.f_diag) > 0.0;
  }
  return ok;
}

RunResult run_dgd(const ProblemData& data, const Hyperparams& h, std::uint64_t seed, const RunOptions& opts) {
  h.validate();
  RunResult out;
  auto& hist = out.history;
  for (Eigen::Index t = 0; t < data.flat.f_diag.size(); ++t) {
    if (data.flat.f_diag[t] == 0.0) hist.unobserved_steps.push_back(static_cast<std::size_t>(t));
  }
  if (hist.unobserved_steps.size() == data.n_steps()) {
    throw std::invalid_argument("run_dgd: the mask observes no entries");
  }
  if (!hist.unobserved_steps.empty() && opts.progress) {
    *opts.progress << "warning: " << hist.unobserved_steps.size()
                   << " time step(s) have no observed entries; the degree constraint carries them\n";
  }

  std::mt19937_64 rng(seed);
  out.decomposition = initialize(rng(), data.n_nodes(), data.n_steps(), h.rank);
  auto& d = out.decomposition;
  hist.initial = objective(d, data.adj, data.mask, data.cache, h);

  double prev = hist.initial.total;
  std::size_t quiet = 0;
  using clock = std::chrono::steady_clock;
  for (std::size_t i = 1; i <= h.outer_iters; ++i) {
    const auto start = clock::now();
    IterationRecord rec;
    rec.iter = i;
    try {
      for (std::size_t r = 0; r < h.rank; ++r) {
        auto res = solve_a_subproblem(d, r, data, h, rng);
        d.latents[r] = std::move(res.latent);
        rec.latent_residuals.push_back(res.primal_residuals.empty() ? 0.0 : res.primal_residuals.back());
      }
      auto res = solve_c_subproblem(d, data, h, rng);
      d.signatures = std::move(res.signatures);
      rec.signature_residual = res.primal_residuals.empty() ? 0.0 : res.primal_residuals.back();
    } catch (const NumericalAbort& e) {
      hist.status = RunStatus::aborted;
      hist.message = e.what();
      return out;
    }
    rec.objective = objective(d, data.adj, data.mask, data.cache, h);
    rec.rel_change = std::abs(prev - rec.objective.total) /
                     std::max(std::abs(prev), std::numeric_limits<double>::min());
    rec.seconds = std::chrono::duration<double>(clock::now() - start).count();
    prev = rec.objective.total;
    if (opts.progress) {
      *opts.progress << "iter=" << i << " total=" << rec.objective.total << " fit=" << rec.objective.fit
                     << " rel_change=" << rec.rel_change << '\n';
    }
    hist.iterations.push_back(std::move(rec));

    quiet = hist.iterations.back().rel_change < h.tol_outer ? quiet + 1 : 0;
    if (quiet >= 3) {
      hist.status = RunStatus::converged;
      return out;
    }
  }
  hist.status = RunStatus::max_iters;
  return out;
}

RunResult run_dgd(const DynTensor& adj, const MaskTensor& mask, const SignalTensor& signals, const Hyperparams& h,
                  std::uint64_t seed, const RunOptions& opts) {
  SmoothCache cache = signals.n_steps() == 0 ? SmoothCache::zeros(adj.n_nodes(), adj.n_steps()) : build_cache(signals);
  return run_dgd(make_problem(adj, mask, std::move(cache)), h, seed, opts);
}

}  // namespace dgd
