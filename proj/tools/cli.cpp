#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "dgd/baselines.hpp"
#include "dgd/datagen.hpp"
#include "dgd/driver.hpp"
#include "dgd/errors.hpp"
#include "dgd/evaluation.hpp"
#include "dgd/io.hpp"
#include "dgd/priors.hpp"
#include "dgd/problem.hpp"
#include "dgd/sweep.hpp"

namespace dgd::cli {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create directory '" + dir.string() + "': " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw UsageError("cannot open '" + path.string() + "' for writing");
  os << text;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used == 0 || used != item.size()) throw ConfigError("grid", "cannot parse '" + item + "' as a number");
    grid.push_back(v);
  }
  if (grid.empty()) throw ConfigError("grid", "must list at least one value");
  return grid;
}

struct GenerateArgs {
  std::string spec;
  std::string out_dir;
  std::uint64_t seed = 0;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  GenerateSpec g = a.spec.empty() ? GenerateSpec{} : parse_generate_spec(read_text_file(a.spec));
  g.swdyn.seed = a.seed;
  g.swdyn.validate();
  const SwDynData data = swdyn(g.swdyn);
  const MaskTensor mask = sample_mask(g.swdyn.n_nodes, g.swdyn.n_steps, g.observed_frac, a.seed ^ 0x9e3779b97f4a7c15ULL);

  const fs::path dir(a.out_dir);
  ensure_dir(dir);
  save_dgt(dir / "adjacency.dgt", to_dgt(data.adj.hadamard(mask.values())));
  save_dgt(dir / "mask.dgt", to_dgt(mask));
  save_dgt(dir / "signals.dgt", to_dgt(data.signals));
  save_dgt(dir / "truth.dgt", to_dgt(data.clean));
  save_dgt(dir / "truth_latents.dgt", latents_to_dgt(data.truth.latents));
  save_dgt(dir / "truth_signatures.dgt", signatures_to_dgt(data.truth.signatures));
  out << "wrote SwDyn instance (N=" << g.swdyn.n_nodes << ", T=" << g.swdyn.n_steps
      << ", mean edges=" << mean_edge_count(data.clean) << ") to " << dir.string() << "\n";
  return kOk;
}

struct DecomposeArgs {
  std::string adj;
  std::string mask;
  std::string signals;
  std::string config;
  std::string out_dir;
  std::string method = "dgd";
  std::uint64_t seed = 0;
  std::size_t baseline_iters = 50;
  bool progress = false;
};

int cmd_decompose(const DecomposeArgs& a, std::ostream& out, std::ostream& err) {
  const Hyperparams h = a.config.empty() ? Hyperparams{} : parse_hyperparams(read_text_file(a.config));
  h.validate();
  const DynTensor adj = dgt_to_tensor(load_dgt(a.adj));
  const MaskTensor mask = dgt_to_mask(load_dgt(a.mask));
  SmoothCache cache = SmoothCache::zeros(adj.n_nodes(), adj.n_steps());
  if (!a.signals.empty()) cache = build_cache(dgt_to_signals(load_dgt(a.signals)));
  const ProblemData data = make_problem(adj, mask, cache);

  const fs::path dir(a.out_dir);
  ensure_dir(dir);

  if (a.method == "dgd" || a.method == "nsdgd") {
    RunOptions opts;
    if (a.progress) opts.progress = &err;
    const RunResult res = a.method == "dgd" ? run_dgd(data, h, a.seed, opts) : nsdgd(data, h, a.seed, opts);
    if (!res.history.message.empty()) err << "warning: " << res.history.message << "\n";
    if (res.history.status == RunStatus::aborted) {
      err << "numerical abort: " << res.history.message << "\n";
      return kNumerical;
    }
    save_dgt(dir / "latents.dgt", latents_to_dgt(res.decomposition.latents));
    save_dgt(dir / "signatures.dgt", signatures_to_dgt(res.decomposition.signatures));
    save_dgt(dir / "reconstruction.dgt", to_dgt(reconstruct(res.decomposition)));
    std::ostringstream hist;
    write_history_csv(hist, res.history);
    write_text(dir / "history.csv", hist.str());
    out << a.method << ": " << to_string(res.history.status) << " after " << res.history.iterations.size()
        << " iterations, objective " << (res.history.iterations.empty() ? res.history.initial.total
                                                                        : res.history.iterations.back().objective.total)
        << "\n";
  } else {
    const DynTensor est = run_method(a.method, data, h, a.seed, a.baseline_iters);
    save_dgt(dir / "reconstruction.dgt", to_dgt(est));
    out << a.method << ": wrote reconstruction\n";
  }
  return kOk;
}

struct EvaluateArgs {
  std::string est_dir;
  std::string truth;
  std::string mask;
  double threshold = 0.0;
  bool components = false;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const DynTensor truth = dgt_to_tensor(load_dgt(a.truth));
  const MaskTensor m_un = complement_mask(dgt_to_mask(load_dgt(a.mask)));
  const double thr = a.threshold > 0.0 ? a.threshold : default_edge_threshold(truth, m_un);
  const fs::path dir(a.est_dir);
  const bool has_factors = fs::exists(dir / "latents.dgt") && fs::exists(dir / "signatures.dgt");

  EvalReport rep;
  if (has_factors) {
    Decomposition d;
    d.latents = dgt_to_latents(load_dgt(dir / "latents.dgt"));
    d.signatures = dgt_to_signatures(load_dgt(dir / "signatures.dgt"));
    rep = a.components ? component_analysis(d, truth, m_un, thr) : evaluate(reconstruct(d), truth, m_un, thr);
  } else if (fs::exists(dir / "reconstruction.dgt")) {
    if (a.components) throw UsageError("--components needs latents.dgt and signatures.dgt in --est-dir");
    rep = evaluate(dgt_to_tensor(load_dgt(dir / "reconstruction.dgt")), truth, m_un, thr);
  } else {
    throw UsageError("no latents.dgt/signatures.dgt or reconstruction.dgt in '" + dir.string() + "'");
  }
  out << eval_report_to_json(rep) << "\n";
  return kOk;
}

struct SweepArgs {
  std::string kind;
  std::string grid;
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool no_timing = false;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  const SweepKind kind = sweep_kind_from_string(a.kind);
  const std::vector<double> grid = parse_grid(a.grid);
  SweepConfig cfg = a.config.empty() ? SweepConfig{} : parse_sweep_config(read_text_file(a.config));
  for (auto& s : cfg.seeds) s += a.seed;
  cfg.record_timing = !a.no_timing;
  const auto rows = sweep(kind, grid, cfg);
  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  if (a.out.empty() || a.out == "-") {
    out << csv.str();
    return kOk;
  }
  write_text(a.out, csv.str());
  for (const auto& s : summarize(rows)) {
    out << s.method << " param=" << s.param << " mean_re=" << s.mean_re << " std_re=" << s.std_re
        << " mean_f1=" << s.mean_f1 << " n=" << s.n << "\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamic graph decomposition: latent graphs and temporal signatures", "dgd"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand help for all subcommands");

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a synthetic SwDyn instance");
  g->add_option("--spec", gen.spec, "SwDyn spec JSON (defaults when omitted)")->check(CLI::ExistingFile);
  g->add_option("--out-dir", gen.out_dir, "Output directory")->required();
  g->add_option("--seed", gen.seed, "Random seed")->required();

  DecomposeArgs dec;
  auto* d = app.add_subcommand("decompose", "Fit a decomposition or a baseline");
  d->add_option("--adj", dec.adj, "Observed adjacency DGT")->required()->check(CLI::ExistingFile);
  d->add_option("--mask", dec.mask, "Observation mask DGT")->required()->check(CLI::ExistingFile);
  d->add_option("--signals", dec.signals, "Node signals DGT (no signal prior when omitted)")
      ->check(CLI::ExistingFile);
  d->add_option("--config", dec.config, "Hyperparameter JSON")->check(CLI::ExistingFile);
  d->add_option("--out-dir", dec.out_dir, "Output directory")->required();
  d->add_option("--method", dec.method, "dgd | nsdgd | unc | cpd")
      ->check(CLI::IsMember({"dgd", "nsdgd", "unc", "cpd"}));
  d->add_option("--seed", dec.seed, "Random seed")->required();
  d->add_option("--baseline-iters", dec.baseline_iters, "ALS sweeps for unc and cpd");
  d->add_flag("--progress", dec.progress, "Print per-iteration objective to stderr");

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "Score a decomposition on the unobserved entries");
  e->add_option("--est-dir", ev.est_dir, "Directory written by decompose")->required()->check(CLI::ExistingDirectory);
  e->add_option("--truth", ev.truth, "Ground-truth adjacency DGT")->required()->check(CLI::ExistingFile);
  e->add_option("--mask", ev.mask, "Observation mask DGT")->required()->check(CLI::ExistingFile);
  e->add_option("--threshold", ev.threshold, "Edge threshold for F1 (0 selects the default)");
  e->add_flag("--components", ev.components, "Also score each latent component on its own");

  SweepArgs sw;
  auto* s = app.add_subcommand("sweep", "Rank or observed-fraction sweep on SwDyn");
  s->add_option("--kind", sw.kind, "rank | observed")->required();
  s->add_option("--grid", sw.grid, "Comma-separated grid values")->required();
  s->add_option("--config", sw.config, "Sweep configuration JSON")->check(CLI::ExistingFile);
  s->add_option("--out", sw.out, "CSV output path ('-' for stdout)");
  s->add_option("--seed", sw.seed, "Base seed added to every configured seed")->required();
  s->add_flag("--no-timing", sw.no_timing, "Write 0 in the seconds column");

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsage;
  }

  try {
    if (*g) return cmd_generate(gen, out);
    if (*d) return cmd_decompose(dec, out, err);
    if (*e) return cmd_evaluate(ev, out);
    if (*s) return cmd_sweep(sw, out);
  } catch (const ConfigError& ex) {
    err << "error: invalid configuration key '" << ex.key() << "': " << ex.what() << "\n";
    return kUsage;
  } catch (const NumericalAbort& ex) {
    err << "numerical abort: " << ex.what() << "\n";
    return kNumerical;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace dgd::cli
