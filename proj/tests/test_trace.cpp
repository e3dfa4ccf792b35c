#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qturing/generators.hpp"
#include "qturing/trace.hpp"

using namespace qturing;

namespace {

const Complex kI(0.0, 1.0);

Operator mat2(Complex a, Complex b, Complex c, Complex d) {
  Operator m(2, 2);
  m << a, b, c, d;
  return m;
}

Operator scalar(Complex c) { return Operator::Constant(1, 1, c); }

}  // namespace

TEST(SplitBlocks, Layout) {
  const Blocks s = split_blocks(BlockMap(sum_swap(1, 1), 1, 1, 1));
  EXPECT_EQ(s.a, scalar(0));
  EXPECT_EQ(s.b, scalar(1));
  EXPECT_EQ(s.c, scalar(1));
  EXPECT_EQ(s.d, scalar(0));
  Operator m(3, 2);
  m << 1, 2, 3, 4, 5, 6;
  const Blocks z = split_blocks(BlockMap(m, 0, 2, 3));
  EXPECT_EQ(z.a.size(), 0);
  EXPECT_EQ(z.d, m);
  const Blocks full = split_blocks(BlockMap(identity(2), 2, 0, 0));
  EXPECT_EQ(full.a, identity(2));
  EXPECT_EQ(full.d.size(), 0);
  EXPECT_THROW(BlockMap(identity(2), 1, 2, 1), ShapeError);
}

TEST(SchurFeedback, HandExamples) {
  EXPECT_EQ(schur_feedback(BlockMap(sum_swap(1, 1), 1, 1, 1)), scalar(1));
  EXPECT_LE(max_distance(schur_feedback(BlockMap(mat2(0, -1, 1, 0), 1, 1, 1)), scalar(-1)), 1e-15);
  const Complex phase = std::polar(1.0, 0.7);
  EXPECT_LE(max_distance(schur_feedback(BlockMap(mat2(1, 0, 0, phase), 1, 1, 1)), scalar(phase)),
            1e-15);
}

TEST(SchurFeedback, RejectsNonIsometry) {
  try {
    schur_feedback(BlockMap(mat2(1, 0, 1, 0), 1, 1, 1));
    FAIL() << "expected ContractError";
  } catch (const ContractError& e) {
    EXPECT_NEAR(e.defect(), 1.0, 1e-15);
  }
}

TEST(SchurFeedback, IsometricOn500Instances) {
  double worst = 0.0;
  for (std::size_t i = 0; i < 500; ++i) {
    auto gen = instance_generator(1000 + i, Family::isometry);
    const BlockMap m = random_blockmap(gen, 6, i);
    ASSERT_LE(m.u(), 6u);
    ASSERT_LE(m.l(), m.k() + 2);
    worst = std::max(worst, isometry_defect(schur_feedback(m)));
  }
  EXPECT_LE(worst, 1e-8);
}

// With I - A invertible the result is D + B (I - A)^{-1} C, computed here with a
// plain inverse; its columns are orthonormal, and for unitary inputs so are its rows.
TEST(SchurFeedback, InvertibleCaseIdentities) {
  std::mt19937_64 gen(404);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t u = 1 + trial % 4, k = 1 + trial % 3;
    const Operator op = random_unitary(u + k, gen);
    const Blocks bl = split_blocks(BlockMap(op, u, k, k));
    const Operator r = bl.d + bl.b * (identity(u) - bl.a).inverse() * bl.c;
    EXPECT_LE(max_distance(r * r.adjoint(), identity(k)), 1e-8);
    EXPECT_LE(max_distance(r.adjoint() * r, identity(k)), 1e-8);
    EXPECT_LE(max_distance(r, schur_feedback(BlockMap(op, u, k, k))), 1e-8);
  }
}

TEST(SchurFeedback, DegenerateVanishingWitness) {
  // u = v = k = l = 1: the U (+) V block is a swap, D = 1, B = C = 0.
  const Operator p = dsum(sum_swap(1, 1), identity(1));
  const Operator inner = schur_feedback(BlockMap(p, 1, 2, 2));
  EXPECT_EQ(inner, identity(2));  // A-block of the inner feedback is 1
  EXPECT_EQ(schur_feedback(BlockMap(inner, 1, 1, 1)), scalar(1));
  EXPECT_EQ(schur_feedback(BlockMap(p, 2, 1, 1)), scalar(1));
}

TEST(KleeneFeedback, SwapConvergesAtOneStep) {
  const KleeneResult r = kleene_feedback(BlockMap(sum_swap(1, 1), 1, 1, 1), 100, 1e-12);
  EXPECT_TRUE(r.report.converged);
  EXPECT_EQ(r.report.steps, 1u);
  EXPECT_EQ(r.value, scalar(1));
}

TEST(KleeneFeedback, KernelCaseConvergesImmediately) {
  const Complex phase = std::polar(1.0, 1.1);
  const KleeneResult r = kleene_feedback(BlockMap(mat2(1, 0, 0, phase), 1, 1, 1), 100, 1e-12);
  EXPECT_TRUE(r.report.converged);
  EXPECT_EQ(r.report.steps, 0u);
  EXPECT_EQ(r.value, scalar(phase));
}

TEST(KleeneFeedback, RadiusHalfAgreesWithSchur) {
  // A = 1/2 inside the 2x2 rotation by 60 degrees.
  const double c = 0.5, s = std::sqrt(3.0) / 2;
  const BlockMap m(mat2(c, -s, s, c), 1, 1, 1);
  const KleeneResult r = kleene_feedback(m, 1000, 1e-12);
  ASSERT_TRUE(r.report.converged);
  EXPECT_LE(r.report.residual, 1e-12);
  EXPECT_LE(max_distance(r.value, schur_feedback(m)), 1e-8);
}

TEST(KleeneFeedback, ConvergedImpliesCloseToSchur) {
  for (std::size_t i = 0; i < 60; ++i) {
    auto gen = instance_generator(50 + i, Family::kleene);
    const BlockMap m = random_kleene_blockmap(gen, 5, i);
    if (spectral_radius(split_blocks(m).a) > 0.999) continue;
    const double tol = 1e-10;
    const KleeneResult r = kleene_feedback(m, 500000, tol);
    if (!r.report.converged) continue;
    EXPECT_LE(r.report.residual, tol);
    EXPECT_LE(max_distance(r.value, schur_feedback(m)), 1e-6) << "instance " << i;
  }
}

TEST(KleeneFeedback, CesaroMeansAgreeWithSchur) {
  const double c = 0.5, s = std::sqrt(3.0) / 2;
  const BlockMap m(mat2(c, -s, s, c), 1, 1, 1);
  const KleeneResult r = kleene_feedback(m, 100000, 1e-9, KleeneMode::cesaro);
  EXPECT_EQ(r.report.mode, KleeneMode::cesaro);
  ASSERT_TRUE(r.report.converged);
  // Means approach the limit like 1/n while their increments shrink like 1/n^2.
  EXPECT_LE(max_distance(r.value, schur_feedback(m)), 1e-4);
  EXPECT_STREQ(to_string(KleeneMode::cesaro), "cesaro");
  EXPECT_STREQ(to_string(KleeneMode::partial_sums), "partial-sums");
}

TEST(KleeneFeedback, NonConvergenceIsReported) {
  const double t = 1e-3;
  const BlockMap m(mat2(std::cos(t), -std::sin(t), std::sin(t), std::cos(t)), 1, 1, 1);
  const KleeneResult r = kleene_feedback(m, 50, 1e-12);
  EXPECT_FALSE(r.report.converged);
  EXPECT_EQ(r.report.steps, 50u);
}

TEST(KernelImageTrace, HandExamples) {
  const KitFactors swap = kernel_image_factors(BlockMap(sum_swap(1, 1), 1, 1, 1));
  EXPECT_LE(max_distance(swap.i, scalar(1)), 1e-15);
  EXPECT_LE(max_distance(swap.k, scalar(1)), 1e-15);
  EXPECT_LE(max_distance(swap.value, scalar(1)), 1e-15);
  const Complex phase = std::polar(1.0, 2.0);
  const KitFactors diag = kernel_image_factors(BlockMap(mat2(1, 0, 0, phase), 1, 1, 1));
  EXPECT_EQ(diag.i, scalar(0));
  EXPECT_EQ(diag.k, scalar(0));
  EXPECT_EQ(diag.value, scalar(phase));
}

TEST(KernelImageTrace, EqualsSchurOnRandomAndKernelInstances) {
  for (std::size_t i = 0; i < 200; ++i) {
    auto gen = instance_generator(7000 + i, Family::isometry);
    const BlockMap m = random_blockmap(gen, 6, i);
    EXPECT_LE(max_distance(kernel_image_trace(m), schur_feedback(m)), 1e-8);
    auto kgen = instance_generator(7000 + i, Family::kernel);
    const KernelInstance ki = random_kernel_blockmap(kgen, 6);
    ASSERT_GE(kernel_on_top(split_blocks(ki.map).a).kernel_dim, ki.kernel_dim);
    EXPECT_LE(max_distance(kernel_image_trace(ki.map), schur_feedback(ki.map)), 1e-8);
  }
}

TEST(KernelImageTrace, RankCutoffBelowRoundoffBreaksFactorization) {
  // Rotation by 1e-6: 1 - A is about 5e-13, under the rank cutoff, so I - A
  // counts as zero while C = sin(1e-6) does not.
  const double t = 1e-6;
  const BlockMap m(mat2(std::cos(t), -std::sin(t), std::sin(t), std::cos(t)), 1, 1, 1);
  EXPECT_THROW(kernel_image_factors(m), FactorizationError);
}

TEST(ScalarStar, Values) {
  EXPECT_EQ(scalar_star(1.0), Complex(0));
  EXPECT_EQ(scalar_star(0.5), Complex(2));
  EXPECT_EQ(scalar_star(0.0), Complex(1));
  const Complex a = 1.0, b = 1.0;
  EXPECT_EQ(scalar_star(a + b), Complex(-1));
  EXPECT_EQ(scalar_star(scalar_star(a) * b) * scalar_star(a), Complex(0));
  EXPECT_EQ(scalar_star(kI), 1.0 / (1.0 - kI));
}
