#include "dgd/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "dgd/baselines.hpp"
#include "dgd/errors.hpp"
#include "dgd/evaluation.hpp"
#include "dgd/priors.hpp"
#include "dgd/problem.hpp"

namespace dgd {

namespace {

std::uint64_t derive(std::uint64_t seed, std::uint32_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), tag};
  std::uint32_t w[2];
  seq.generate(w, w + 2);
  return (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
}

std::string format_number(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

SweepKind sweep_kind_from_string(std::string_view name) {
  if (name == "rank") return SweepKind::rank;
  if (name == "observed" || name == "observed_frac") return SweepKind::observed_frac;
  throw ConfigError("kind", "expected 'rank' or 'observed', got '" + std::string(name) + "'");
}

std::vector<SweepRow> sweep(SweepKind kind, std::span<const double> grid, const SweepConfig& config) {
  if (grid.empty()) throw ConfigError("grid", "must not be empty");
  config.hyper.validate();
  std::vector<SweepRow> rows;
  using clock = std::chrono::steady_clock;

  for (const double param : grid) {
    for (const std::uint64_t seed : config.seeds) {
      SwDynSpec spec = config.data;
      spec.seed = derive(seed, 1);
      Hyperparams h = config.hyper;
      double frac = config.observed_frac;
      if (kind == SweepKind::rank) {
        if (!(param >= 1.0) || param != std::floor(param)) throw ConfigError("grid", "ranks must be positive integers");
        h.rank = static_cast<std::size_t>(param);
      } else {
        frac = param;
      }

      SwDynData data = swdyn(spec);
      const MaskTensor mask = sample_mask(spec.n_nodes, spec.n_steps, frac, derive(seed, 2));
      const MaskTensor m_un = complement_mask(mask);
      const ProblemData problem = make_problem(data.adj, mask, build_cache(data.signals));
      const double threshold =
          config.edge_threshold > 0.0 ? config.edge_threshold : default_edge_threshold(data.clean, m_un);

      for (const auto& method : config.methods) {
        SweepRow row;
        row.method = method;
        row.param = param;
        row.seed = seed;
        const auto start = clock::now();
        try {
          const DynTensor est = run_method(method, problem, h, derive(seed, 3), config.baseline_iters);
          const EvalReport rep = evaluate(est, data.clean, m_un, threshold);
          row.re = rep.re;
          row.f1 = rep.f1;
          row.precision = rep.precision;
          row.recall = rep.recall;
          for (const auto& d : rep.diagnostics) row.diagnostic += (row.diagnostic.empty() ? "" : "; ") + d;
        } catch (const std::exception& e) {
          row.failed = true;
          row.diagnostic = e.what();
        }
        if (config.record_timing) row.seconds = std::chrono::duration<double>(clock::now() - start).count();
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
  os << "method,param,seed,re,f1,precision,recall,seconds\n";
  const double nan = std::nan("");
  for (const auto& r : rows) {
    const bool ok = !r.failed;
    os << r.method << ',' << format_number(r.param) << ',' << r.seed << ','
       << format_number(ok && r.re ? *r.re : nan) << ',' << format_number(ok ? r.f1 : nan) << ','
       << format_number(ok ? r.precision : nan) << ',' << format_number(ok ? r.recall : nan) << ','
       << format_number(r.seconds) << '\n';
  }
}

std::vector<SweepSummary> summarize(std::span<const SweepRow> rows) {
  std::vector<SweepSummary> out;
  std::vector<std::vector<double>> res;
  for (const auto& r : rows) {
    std::size_t k = 0;
    while (k < out.size() && !(out[k].method == r.method && out[k].param == r.param)) ++k;
    if (k == out.size()) {
      out.push_back({r.method, r.param});
      res.emplace_back();
    }
    if (!r.failed && r.re) {
      res[k].push_back(*r.re);
      out[k].mean_f1 += r.f1;
    }
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto& v = res[k];
    out[k].n = v.size();
    if (v.empty()) {
      out[k].mean_re = out[k].std_re = std::nan("");
      continue;
    }
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    out[k].mean_re = mean;
    out[k].std_re = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
    out[k].mean_f1 /= static_cast<double>(v.size());
  }
  return out;
}

}  // namespace dgd
