#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dgd/datagen.hpp"
#include "dgd/model.hpp"

namespace dgd {

enum class SweepKind { rank, observed_frac };

SweepKind sweep_kind_from_string(std::string_view name);

struct SweepConfig {
  SwDynSpec data;
  double observed_frac = 0.9;
  Hyperparams hyper;
  std::vector<std::string> methods{"dgd", "nsdgd", "unc", "cpd"};
  std::vector<std::uint64_t> seeds{0};
  std::size_t baseline_iters = 50;
  double edge_threshold = 0.0;  // 0 selects default_edge_threshold
  bool record_timing = true;    // false writes 0 seconds so output is reproducible
};

struct SweepRow {
  std::string method;
  double param = 0.0;
  std::uint64_t seed = 0;
  std::optional<double> re;  // empty: undefined or failed
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double seconds = 0.0;
  bool failed = false;
  std::string diagnostic;
};

/// One row per (grid point, seed, method), in that nesting order. For seed
/// s the SwDyn data, the mask and every method use seeds derived from s, so
/// all methods see identical inputs. Failing cells are recorded, not thrown.
std::vector<SweepRow> sweep(SweepKind kind, std::span<const double> grid, const SweepConfig& config);

/// Header `method,param,seed,re,f1,precision,recall,seconds`; undefined or
/// failed values are written as `nan`.
void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows);

struct SweepSummary {
  std::string method;
  double param = 0.0;
  double mean_re = 0.0;
  double std_re = 0.0;
  double mean_f1 = 0.0;
  std::size_t n = 0;  // rows with a defined RE
};

/// Mean/std over seeds per (method, param), in first-appearance order.
std::vector<SweepSummary> summarize(std::span<const SweepRow> rows);

}  // namespace dgd
