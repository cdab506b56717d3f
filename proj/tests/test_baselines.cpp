#include <gtest/gtest.h>

#include "dgd/baselines.hpp"
#include "support.hpp"

namespace dgd {
namespace {

TEST(Unc, ExactFactorizationRecoveredOnFullMask) {
  std::mt19937_64 rng(1);
  const DynTensor adj = reconstruct(test::random_decomposition(6, 8, 2, rng));
  const UncResult res = unc_solve(adj, MaskTensor::ones(6, 8), 2, 50, 3);
  EXPECT_LT(res.fit_trace.back(), 1e-8);
  EXPECT_LT((unc_reconstruct(res, 6)[3] - adj[3]).norm(), 1e-4);
}

TEST(Unc, HalfStepsNonIncreasing) {
  std::mt19937_64 rng(2);
  test::Instance in = test::random_instance(6, 5, 2, rng);
  const UncResult res = unc_solve(in.data.adj, in.data.mask, 2, 20, 4);
  ASSERT_EQ(res.fit_trace.size(), 40u);
  for (std::size_t k = 1; k < res.fit_trace.size(); ++k) {
    EXPECT_LE(res.fit_trace[k], res.fit_trace[k - 1] * (1.0 + 1e-12) + 1e-14);
  }
}

TEST(Unc, LeavesTheFeasibleSet) {
  std::mt19937_64 rng(3);
  std::vector<Matrix> s;
  for (int t = 0; t < 5; ++t) s.push_back(test::random_sa(6, rng));
  const DynTensor adj(s);
  const MaskTensor mask = test::random_mask(6, 5, 0.5, rng);
  const DynTensor est = unc_reconstruct(unc_solve(adj, mask, 2, 30, 5), 6);
  EXPECT_FALSE(est.is_nonnegative());
}

TEST(Unc, DeterministicAndRejectsZeroRank) {
  std::mt19937_64 rng(4);
  test::Instance in = test::random_instance(5, 4, 1, rng);
  EXPECT_EQ(unc_solve(in.data.adj, in.data.mask, 2, 5, 9).a0, unc_solve(in.data.adj, in.data.mask, 2, 5, 9).a0);
  EXPECT_THROW(unc_solve(in.data.adj, in.data.mask, 0, 5, 9), std::invalid_argument);
}

TEST(Nsdgd, EqualsDeltaZeroRun) {
  std::mt19937_64 rng(5);
  test::Instance in = test::random_instance(5, 4, 2, rng);
  in.h.outer_iters = 3;
  in.h.inner_iters = 30;
  const RunResult a = nsdgd(in.data, in.h, 7);
  Hyperparams h0 = in.h;
  h0.delta = 0.0;
  const RunResult b = run_dgd(in.data, h0, 7);
  EXPECT_EQ(a.decomposition.latents, b.decomposition.latents);
  EXPECT_EQ(a.decomposition.signatures, b.decomposition.signatures);
  EXPECT_EQ(a.history.initial.smoothness, 0.0);
  for (const auto& it : a.history.iterations) EXPECT_EQ(it.objective.smoothness, 0.0);
}

TEST(Cpd, RankOneRecovered) {
  std::mt19937_64 rng(6);
  const Vector u = test::uniform_matrix(5, 1, rng);
  const Vector v = test::uniform_matrix(4, 1, rng);
  std::vector<Matrix> s;
  for (int t = 0; t < 4; ++t) s.push_back(3.0 * v(t) * u * u.transpose());
  const DynTensor x(s);
  const CpdResult res = cpd_als(x, 1, 50, 1);
  EXPECT_LT(res.fit_trace.back(), 1e-6);
  const DynTensor rec = cpd_reconstruct(res);
  for (int t = 0; t < 4; ++t) EXPECT_LT((rec[t] - s[t]).norm(), 1e-3);
}

TEST(Cpd, SweepsNonIncreasingAndSymmetrized) {
  std::mt19937_64 rng(7);
  test::Instance in = test::random_instance(6, 5, 2, rng);
  const CpdResult res = cpd_als(in.data.adj, 3, 25, 2);
  for (std::size_t k = 1; k < res.fit_trace.size(); ++k) {
    EXPECT_LE(res.fit_trace[k], res.fit_trace[k - 1] * (1.0 + 1e-10));
  }
  EXPECT_TRUE(cpd_reconstruct(res).is_symmetric(1e-14));
  EXPECT_THROW(cpd_als(in.data.adj, 0, 5, 2), std::invalid_argument);
}

TEST(Cpd, MatchedRankBalancesDegreesOfFreedom) {
  EXPECT_EQ(matched_cpd_rank(40, 50, 2), 13u);
  EXPECT_GE(matched_cpd_rank(3, 2, 1), 1u);
  for (std::size_t r = 1; r <= 5; ++r) {
    const std::size_t f = matched_cpd_rank(40, 50, r);
    const double target = static_cast<double>(r) * (40.0 * 39.0 / 2.0 + 50.0);
    const double per = 2.0 * 40.0 + 50.0;
    EXPECT_LE(std::abs(static_cast<double>(f) * per - target), per / 2.0 + 1e-9);
  }
}

TEST(RunMethod, DispatchesAndRejectsUnknown) {
  std::mt19937_64 rng(8);
  test::Instance in = test::random_instance(5, 4, 2, rng);
  in.h.outer_iters = 1;
  in.h.inner_iters = 10;
  for (auto name : kMethodNames) {
    const DynTensor est = run_method(name, in.data, in.h, 1, 5);
    EXPECT_TRUE(est.same_shape(in.data.adj)) << name;
  }
  EXPECT_THROW(run_method("btd", in.data, in.h, 1, 5), std::invalid_argument);
}

}  // namespace
}  // namespace dgd
