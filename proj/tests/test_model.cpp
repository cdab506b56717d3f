#include <gtest/gtest.h>

#include <algorithm>

#include "dgd/errors.hpp"
#include "dgd/model.hpp"
#include "dgd/priors.hpp"
#include "support.hpp"

namespace dgd {
namespace {

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Hyperparams no_priors() {
  Hyperparams h;
  h.gamma = h.delta = h.beta = h.mu = h.rho = h.eta = 0.0;
  return h;
}

TEST(Reconstruct, SingleLatentScaledPerStep) {
  Decomposition d;
  d.latents = {mat2(0, 1, 1, 0)};
  d.signatures = Matrix(2, 1);
  d.signatures << 1, 2;
  const DynTensor x = reconstruct(d);
  EXPECT_EQ(x[0], mat2(0, 1, 1, 0));
  EXPECT_EQ(x[1], mat2(0, 2, 2, 0));
  EXPECT_EQ(reconstruct_slice(d, 1), mat2(0, 2, 2, 0));
  EXPECT_THROW(reconstruct_slice(d, 2), std::out_of_range);
}

TEST(Reconstruct, ZeroSignaturesGiveZeroTensor) {
  std::mt19937_64 rng(1);
  Decomposition d = test::random_decomposition(4, 3, 2, rng);
  d.signatures.setZero();
  EXPECT_EQ(reconstruct(d).squared_norm(), 0.0);
}

TEST(Reconstruct, EqualLatentsConvexCombination) {
  std::mt19937_64 rng(2);
  const Matrix a = test::random_sa(4, rng);
  Decomposition d;
  d.latents = {a, a};
  d.signatures = Matrix::Constant(3, 2, 0.5);
  for (std::size_t t = 0; t < 3; ++t) EXPECT_TRUE(reconstruct_slice(d, t).isApprox(a, 1e-15));
}

TEST(Objective, PerfectFitWithoutPriorsIsZero) {
  std::mt19937_64 rng(3);
  const Decomposition d = test::random_decomposition(5, 4, 2, rng);
  const DynTensor adj = reconstruct(d);
  const auto o = objective(d, adj, MaskTensor::ones(5, 4), SmoothCache::zeros(5, 4), no_priors());
  EXPECT_NEAR(o.total, 0.0, 1e-24);
}

TEST(Objective, DisjointSupportsHaveNoOverlap) {
  Decomposition d;
  Matrix a1 = Matrix::Zero(3, 3), a2 = Matrix::Zero(3, 3);
  a1(0, 1) = a1(1, 0) = 1.0;
  a2(1, 2) = a2(2, 1) = 2.0;
  d.latents = {a1, a2};
  d.signatures = Matrix::Ones(2, 2);
  Hyperparams h = no_priors();
  h.beta = 1.0;
  const auto o = objective(d, reconstruct(d), MaskTensor::ones(3, 2), SmoothCache::zeros(3, 2), h);
  EXPECT_EQ(o.overlap, 0.0);
}

TEST(Objective, IdenticalLatentsOverlapFour) {
  Decomposition d;
  d.latents = {mat2(0, 1, 1, 0), mat2(0, 1, 1, 0)};
  d.signatures = Matrix::Ones(1, 2);
  Hyperparams h = no_priors();
  h.beta = 1.0;
  const auto o = objective(d, reconstruct(d), MaskTensor::ones(2, 1), SmoothCache::zeros(2, 1), h);
  EXPECT_DOUBLE_EQ(o.overlap, 4.0);
}

TEST(Objective, FullMaskWithoutPriorsIsHalfSquaredError) {
  std::mt19937_64 rng(4);
  const Decomposition d = test::random_decomposition(6, 5, 3, rng);
  std::vector<Matrix> s;
  for (int t = 0; t < 5; ++t) s.push_back(test::random_sa(6, rng));
  const DynTensor adj(s);
  double expected = 0.0;
  const DynTensor rec = reconstruct(d);
  for (std::size_t t = 0; t < 5; ++t) expected += 0.5 * (adj[t] - rec[t]).squaredNorm();
  const auto o = objective(d, adj, MaskTensor::ones(6, 5), SmoothCache::zeros(6, 5), no_priors());
  EXPECT_NEAR(o.total, expected, 1e-12 * expected);
}

TEST(Objective, MatchesIndexSumOracleInBothModes) {
  std::mt19937_64 rng(5);
  for (auto mode : {GradientMode::exact_mask, GradientMode::paper_surrogate}) {
    for (int k = 0; k < 5; ++k) {
      test::Instance in = test::random_instance(4, 3, 2, rng, mode);
      const double ref = test::ref_objective(in.d, in.data.adj, in.data.mask, in.data.cache.z, in.h);
      const auto o = objective(in.d, in.data.adj, in.data.mask, in.data.cache, in.h);
      EXPECT_NEAR(o.total, ref, 1e-12 * std::abs(ref));
      EXPECT_NEAR(o.fit + o.sparsity + o.smoothness + o.temporal + o.overlap + o.ridge_c + o.ridge_a, o.total,
                  1e-12 * std::abs(o.total));
    }
  }
}

TEST(Objective, InvariantUnderLatentPermutation) {
  std::mt19937_64 rng(6);
  test::Instance in = test::random_instance(5, 4, 3, rng);
  Decomposition p = in.d;
  std::swap(p.latents[0], p.latents[2]);
  p.signatures.col(0).swap(p.signatures.col(2));
  const double a = objective(in.d, in.data.adj, in.data.mask, in.data.cache, in.h).total;
  const double b = objective(p, in.data.adj, in.data.mask, in.data.cache, in.h).total;
  EXPECT_NEAR(a, b, 1e-12 * std::abs(a));
}

TEST(Objective, ShapeMismatchRejected) {
  std::mt19937_64 rng(7);
  const Decomposition d = test::random_decomposition(3, 2, 1, rng);
  EXPECT_THROW(objective(d, DynTensor::zeros(3, 3), MaskTensor::ones(3, 3), SmoothCache::zeros(3, 3), Hyperparams{}),
               std::invalid_argument);
}

TEST(ProjectSA, ExampleMatrix) {
  EXPECT_EQ(project_sa(mat2(1, -2, 4, 3)), mat2(0, 1, 1, 0));
}

TEST(ProjectSA, FeasibleInputUnchanged) {
  std::mt19937_64 rng(8);
  const Matrix a = test::random_sa(6, rng);
  EXPECT_EQ(project_sa(a), a);
}

TEST(ProjectSA, NegativeOffDiagonalsGiveZero) {
  Matrix x = -Matrix::Ones(4, 4);
  x.diagonal().setConstant(5.0);
  EXPECT_TRUE(project_sa(x).isZero(0.0));
}

TEST(ProjectSA, IdempotentAndFeasible) {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 20; ++k) {
    const Matrix p = project_sa(test::normal_matrix(5, 5, rng));
    EXPECT_TRUE(in_sa(p));
    EXPECT_EQ(project_sa(p), p);
  }
}

TEST(ProjectSA, NoFeasibleCompetitorIsCloser) {
  std::mt19937_64 rng(10);
  for (int k = 0; k < 20; ++k) {
    const Matrix x = test::normal_matrix(5, 5, rng);
    const Matrix p = project_sa(x);
    const double best = (p - x).norm();
    for (int j = 0; j < 100; ++j) {
      const Matrix s = project_sa(p + 0.3 * test::normal_matrix(5, 5, rng));
      EXPECT_LE(best, (s - x).norm() + 1e-12);
    }
  }
}

TEST(ProjectSA, NonFiniteInputAborts) {
  Matrix x = Matrix::Zero(2, 2);
  x(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(project_sa(x), NumericalAbort);
}

TEST(ProjectSC, ClipsNegatives) {
  EXPECT_EQ(project_sc(mat2(-1, 2, 0, -3)), mat2(0, 2, 0, 0));
}

TEST(ProjectSC, NonnegativeUnchangedAndIdempotent) {
  std::mt19937_64 rng(11);
  const Matrix c = test::uniform_matrix(6, 3, rng);
  EXPECT_EQ(project_sc(c), c);
  const Matrix p = project_sc(test::normal_matrix(6, 3, rng));
  EXPECT_EQ(project_sc(p), p);
}

TEST(DegreeMargin, UnitDegreesMinusZeta) {
  Decomposition d;
  d.latents = {mat2(0, 1, 1, 0)};
  d.signatures = Matrix::Ones(1, 1);
  const Matrix m = degree_margin(d, 0.5);
  ASSERT_EQ(m.rows(), 1);
  ASSERT_EQ(m.cols(), 2);
  EXPECT_EQ(m(0, 0), 0.5);
  EXPECT_EQ(m(0, 1), 0.5);
}

TEST(DegreeMargin, ZeroSignaturesGiveMinusZeta) {
  std::mt19937_64 rng(12);
  Decomposition d = test::random_decomposition(4, 3, 2, rng);
  d.signatures.setZero();
  EXPECT_TRUE(degree_margin(d, 0.25).isApprox(Matrix::Constant(3, 4, -0.25)));
}

TEST(DegreeMargin, LinearInSignatures) {
  std::mt19937_64 rng(13);
  Decomposition d = test::random_decomposition(5, 4, 2, rng);
  const double zeta = 0.3;
  const Matrix deg = degree_margin(d, zeta).array() + zeta;
  d.signatures *= 2.0;
  const Matrix expected = (2.0 * deg).array() - zeta;
  EXPECT_TRUE(degree_margin(d, zeta).isApprox(expected, 1e-14));
}

TEST(Decomposition, FeasibilityAndShape) {
  std::mt19937_64 rng(14);
  Decomposition d = test::random_decomposition(4, 3, 2, rng);
  EXPECT_TRUE(d.is_feasible());
  d.signatures(0, 0) = -1e-9;
  EXPECT_FALSE(d.is_feasible());
  d.signatures = Matrix::Zero(3, 3);
  EXPECT_THROW(d.check_shape(), std::invalid_argument);
}

TEST(Hyperparams, ValidationNamesField) {
  Hyperparams h;
  EXPECT_NO_THROW(h.validate());
  h.delta = -1.0;
  try {
    h.validate();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "delta");
  }
  h = Hyperparams{};
  h.zeta = 0.0;
  EXPECT_THROW(h.validate(), ConfigError);
  h = Hyperparams{};
  h.inner_iters = 0;
  EXPECT_THROW(h.validate(), ConfigError);
  EXPECT_THROW(gradient_mode_from_string("bogus"), ConfigError);
  EXPECT_EQ(gradient_mode_from_string(to_string(GradientMode::paper_surrogate)), GradientMode::paper_surrogate);
}

}  // namespace
}  // namespace dgd
