#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qturing/dqta.hpp"
#include "qturing/generators.hpp"

using namespace qturing;

namespace {

// tau: H1 (x) X -> H1 (x) Y acting on H1 (x) H2 (x) X, built from kron and
// factor permutations only.
Operator on_first_oracle(const Operator& tau, std::size_t h1, std::size_t h2) {
  const std::size_t x = static_cast<std::size_t>(tau.cols()) / h1;
  const std::size_t y = static_cast<std::size_t>(tau.rows()) / h1;
  const std::size_t in_dims[] = {h1, h2, x}, out_dims[] = {h2, h1, y};
  const std::size_t order[] = {1, 0, 2};
  return tensor_permutation(out_dims, order) * kron(identity(h2), tau) *
         tensor_permutation(in_dims, order);
}

Operator cascade_oracle(const Dqta& t1, const Dqta& t2) {
  return kron(identity(t1.h()), t2.transition()) * on_first_oracle(t1.transition(), t1.h(), t2.h());
}

Operator tensor_oracle(const Dqta& t1, const Dqta& t2) {
  const std::size_t h = t1.h() * t2.h();
  const Operator d_in = distribute(h, SpaceDims{t1.k(), t2.k()});
  const Operator d_out = distribute(h, SpaceDims{t1.l(), t2.l()});
  const Operator sum = dsum(on_first_oracle(t1.transition(), t1.h(), t2.h()),
                            kron(identity(t1.h()), t2.transition()));
  return d_out.adjoint() * sum * d_in;
}

Operator rotation(double t) {
  Operator m(2, 2);
  m << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return m;
}

}  // namespace

TEST(Dqta, ValidatesShapeAndIsometry) {
  Operator col(2, 1);
  col << 1, 1;
  try {
    make_dqta(1, 1, 2, col);
    FAIL() << "expected ContractError";
  } catch (const ContractError& e) {
    EXPECT_EQ(e.defect(), 1.0);
  }
  EXPECT_THROW(make_dqta(2, 1, 1, identity(3)), ShapeError);
  EXPECT_THROW(make_dqta(0, 1, 1, identity(0)), ShapeError);
  Operator nan = identity(1);
  nan(0, 0) = std::nan("");
  EXPECT_THROW(make_dqta(1, 1, 1, nan), ShapeError);
  EXPECT_NO_THROW(make_dqta(2, 1, 2, random_isometry(4, 2, 3)));
}

TEST(Cascade, MatchesKronAndSwapFormula) {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t h1 = 1 + trial % 3, h2 = 1 + (trial / 3) % 3;
    const std::size_t k = 1 + trial % 2, l = k + trial % 2, m = l + (trial / 2) % 2;
    const Dqta t1 = random_dqta(gen, h1, k, l), t2 = random_dqta(gen, h2, l, m);
    const Dqta c = cascade(t1, t2);
    EXPECT_EQ(c.h(), h1 * h2);
    EXPECT_LE(max_distance(c.transition(), cascade_oracle(t1, t2)), 1e-12);
    EXPECT_LE(isometry_defect(c.transition()), 1e-10);
  }
  std::mt19937_64 g2(1);
  EXPECT_THROW(cascade(random_dqta(g2, 1, 1, 2), random_dqta(g2, 1, 1, 1)), ShapeError);
}

TEST(Cascade, IdentityAutomataAreUnitsUpToStateFactor) {
  std::mt19937_64 gen(32);
  const Dqta t = random_dqta(gen, 3, 2, 3);
  EXPECT_LE(max_distance(cascade(identity_automaton(2), t).transition(), t.transition()), 1e-14);
  EXPECT_LE(max_distance(cascade(t, identity_automaton(3)).transition(), t.transition()), 1e-14);
}

TEST(TuringTensor, MatchesDistributedDirectSum) {
  std::mt19937_64 gen(33);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t h1 = 1 + trial % 3, h2 = 1 + (trial / 3) % 2;
    const std::size_t k1 = trial % 3, l1 = k1 + trial % 2, k2 = 1 + trial % 2, l2 = k2;
    const Dqta t1 = random_dqta(gen, h1, k1, l1), t2 = random_dqta(gen, h2, k2, l2);
    const Dqta t = turing_tensor(t1, t2);
    EXPECT_EQ(t.k(), k1 + k2);
    EXPECT_EQ(t.l(), l1 + l2);
    EXPECT_LE(max_distance(t.transition(), tensor_oracle(t1, t2)), 1e-12);
  }
}

TEST(Feedback, StatelessRotationGivesMinusOne) {
  const Dqta rot = stateless_automaton(rotation(M_PI / 2));
  const Dqta fb = feedback_dqta(rot, 1);
  EXPECT_EQ(fb.k(), 1u);
  EXPECT_NEAR(std::abs(fb.transition()(0, 0) - Complex(-1.0)), 0.0, 1e-15);
  const Dqta sw = feedback_dqta(symmetry_automaton(1, 1), 1);
  EXPECT_EQ(sw.transition(), identity(1));
}

TEST(Feedback, AgreesWithSchurOnTheDistributedMatrix) {
  std::mt19937_64 gen(34);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t h = 1 + trial % 3, u = 1 + trial % 2, k = u + trial % 3, l = k + trial % 2;
    const Dqta t = random_dqta(gen, h, k, l);
    const Operator d_in = distribute(h, SpaceDims{u, k - u});
    const Operator d_out = distribute(h, SpaceDims{u, l - u});
    const BlockMap m(d_out * t.transition() * d_in.adjoint(), h * u, h * (k - u), h * (l - u));
    EXPECT_LE(max_distance(feedback_dqta(t, u).transition(), schur_feedback(m)), 1e-12);
  }
  std::mt19937_64 g2(2);
  EXPECT_THROW(feedback_dqta(random_dqta(g2, 1, 1, 2), 2), ShapeError);
}

TEST(SymmetryAutomata, PermuteSummands) {
  EXPECT_EQ(symmetry_automaton(1, 2).transition(), sum_swap(1, 2));
  const std::size_t order[] = {1, 2, 0};
  EXPECT_EQ(permutation_automaton(SpaceDims{1, 1, 1}, order).transition(),
            summand_permutation(SpaceDims{1, 1, 1}, order));
  const UnitAutomata u = unit_automata(2, 3);
  EXPECT_EQ(u.identity.transition(), identity(2));
  EXPECT_EQ(cascade(u.symmetry, symmetry_automaton(3, 2)).transition(), identity(5));
}

TEST(IsoWitness, ConjugationAcceptedOthersRejected) {
  std::mt19937_64 gen(35);
  const Dqta t = random_dqta(gen, 3, 2, 2);
  const Operator s = random_unitary(3, gen);
  const Dqta conj = make_dqta(3, 2, 2, kron(s, identity(2)) * t.transition() *
                                           kron(s.adjoint(), identity(2)));
  EXPECT_TRUE(iso_witness_check(t, conj, s));
  EXPECT_LE(iso_violation(t, conj, s), 1e-12);
  EXPECT_FALSE(iso_witness_check(t, conj, identity(3)));
  Operator squash = s;
  squash(0, 0) *= 2.0;
  EXPECT_FALSE(iso_witness_check(t, conj, squash));
  EXPECT_THROW(iso_violation(t, conj, identity(2)), ShapeError);
}

TEST(Dagger, InvolutiveAndReversesCascade) {
  std::mt19937_64 gen(36);
  const UnitaryDqta t1 = random_unitary_dqta(gen, 2, 2), t2 = random_unitary_dqta(gen, 3, 2);
  EXPECT_LE(max_distance(dagger_dqta(dagger_dqta(t1)).transition(), t1.transition()), 1e-15);
  const Dqta lhs = dagger_dqta(UnitaryDqta::make(cascade(t1.dqta(), t2.dqta()))).dqta();
  const Dqta rhs = cascade(dagger_dqta(t2).dqta(), dagger_dqta(t1).dqta());
  EXPECT_LE(iso_violation(lhs, rhs, tensor_swap(2, 3)), 1e-10);
  EXPECT_THROW(UnitaryDqta::make(random_dqta(gen, 1, 1, 2)), ContractError);
}

TEST(Dagger, CascadeWithDaggerIsIdentityOnlyWithoutState) {
  std::mt19937_64 gen(37);
  const UnitaryDqta stateless = random_unitary_dqta(gen, 1, 3);
  EXPECT_LE(max_distance(cascade(stateless.dqta(), dagger_dqta(stateless).dqta()).transition(),
                         identity(3)),
            1e-12);
  // With state the H1 (x) H1 memory is not erased; the result is a genuine
  // automaton on 4 states, not an identity up to any state witness.
  const UnitaryDqta t = random_unitary_dqta(gen, 2, 1);
  const Dqta back = cascade(t.dqta(), dagger_dqta(t).dqta());
  EXPECT_EQ(back.h(), 4u);
  EXPECT_GT(max_distance(back.transition(), identity(4)), 1e-3);
}
