#include <benchmark/benchmark.h>

#include <random>

#include "dgd/admm_a.hpp"
#include "dgd/admm_c.hpp"
#include "dgd/baselines.hpp"
#include "dgd/datagen.hpp"
#include "dgd/driver.hpp"

namespace {

using namespace dgd;

struct Fixture {
  ProblemData data;
  Decomposition d;
  Hyperparams h;
};

Fixture make_fixture(std::size_t n, std::size_t rank) {
  SwDynSpec spec;
  spec.n_nodes = n;
  spec.n_signals = 100;
  spec.seed = 1;
  const SwDynData sw = swdyn(spec);
  Fixture f{make_problem(sw.adj, sample_mask(n, spec.n_steps, 0.9, 2), build_cache(sw.signals)),
            initialize(3, n, spec.n_steps, rank), Hyperparams{}};
  f.h.rank = rank;
  return f;
}

void BM_GradA(benchmark::State& state) {
  const Fixture f = make_fixture(static_cast<std::size_t>(state.range(0)), 2);
  const LatentSubproblem sub(f.d, 0, f.data, f.h);
  AWorkspace ws = build_a_workspace(f.d, 0, f.h.zeta);
  ws.p = Matrix::Ones(ws.phi.rows(), ws.phi.cols());
  ws.lambda = Matrix::Zero(ws.phi.cols(), ws.phi.rows());
  for (auto _ : state) benchmark::DoNotOptimize(sub.gradient(f.d.latents[0], ws));
}
BENCHMARK(BM_GradA)->Arg(20)->Arg(40)->Arg(80);

void BM_GradC(benchmark::State& state) {
  const Fixture f = make_fixture(40, static_cast<std::size_t>(state.range(0)));
  const SignatureSubproblem sub(f.d.latents, f.data, f.h);
  CWorkspace ws;
  ws.upsilon = sub.upsilon();
  ws.q = Matrix::Ones(f.d.signatures.rows(), 40);
  ws.lambda = Matrix::Zero(40, f.d.signatures.rows());
  for (auto _ : state) benchmark::DoNotOptimize(sub.gradient(f.d.signatures, ws));
}
BENCHMARK(BM_GradC)->Arg(2)->Arg(5)->Arg(10);

void BM_SolveA(benchmark::State& state) {
  const Fixture f = make_fixture(40, 2);
  for (auto _ : state) {
    std::mt19937_64 rng(4);
    benchmark::DoNotOptimize(solve_a_subproblem(f.d, 0, f.data, f.h, rng));
  }
}
BENCHMARK(BM_SolveA)->Unit(benchmark::kMillisecond);

void BM_SolveC(benchmark::State& state) {
  const Fixture f = make_fixture(40, 2);
  for (auto _ : state) {
    std::mt19937_64 rng(5);
    benchmark::DoNotOptimize(solve_c_subproblem(f.d, f.data, f.h, rng));
  }
}
BENCHMARK(BM_SolveC)->Unit(benchmark::kMillisecond);

void BM_CpdSweep(benchmark::State& state) {
  const Fixture f = make_fixture(40, 2);
  for (auto _ : state) benchmark::DoNotOptimize(cpd_als(f.data.adj, 13, 1, 6));
}
BENCHMARK(BM_CpdSweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
