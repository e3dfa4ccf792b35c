#include <gtest/gtest.h>

#include <random>

#include "qturing/generators.hpp"
#include "qturing/intcat.hpp"

using namespace qturing;

TEST(Int0, IdentityIsTwoSidedUnit) {
  std::mt19937_64 gen(41);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t h = 1 + trial % 3, a = trial % 3, b = 1 + trial % 2;
    const Int0Morphism f = random_int0(gen, h, a, b);
    EXPECT_LE(int_distance(int_compose(int_identity(a), f), f), 1e-8);
    EXPECT_LE(int_distance(int_compose(f, int_identity(b)), f), 1e-8);
  }
}

TEST(Int0, CompositionIsAssociative) {
  std::mt19937_64 gen(42);
  for (int trial = 0; trial < 10; ++trial) {
    const Int0Morphism f = random_int0(gen, 2, 1, 2), g = random_int0(gen, 1, 2, 1),
                       h = random_int0(gen, 2, 1, 1);
    EXPECT_LE(int_distance(int_compose(int_compose(f, g), h), int_compose(f, int_compose(g, h))),
              1e-8);
  }
  std::mt19937_64 g2(1);
  EXPECT_THROW(int_compose(random_int0(g2, 1, 1, 2), random_int0(g2, 1, 1, 1)), ShapeError);
}

TEST(Int0, UnitsAreCarriedBySymmetry) {
  const Int0Units u = int_units(2);
  EXPECT_EQ(u.unit.src(), 0u);
  EXPECT_EQ(u.unit.dst(), 4u);
  EXPECT_EQ(u.counit.src(), 4u);
  EXPECT_EQ(u.counit.dst(), 0u);
  EXPECT_EQ(u.unit.carrier().transition(), sum_swap(2, 2));
  EXPECT_EQ(u.counit.carrier().transition(), sum_swap(2, 2));
}

TEST(Int0, TrianglesAndYanking) {
  for (std::size_t x = 1; x <= 3; ++x) {
    const Int0Units u = int_units(x);
    const Int0Morphism t1 = int_compose(int_tensor(int_identity(x), u.unit),
                                        int_tensor(u.counit, int_identity(x)));
    const Int0Morphism t2 = int_compose(int_tensor(u.unit, int_identity(x)),
                                        int_tensor(int_identity(x), u.counit));
    EXPECT_LE(int_distance(t1, int_identity(x)), 1e-8);
    EXPECT_LE(int_distance(t2, int_identity(x)), 1e-8);
    EXPECT_LE(int_distance(canonical_trace(int_symmetry(x, x), x), int_identity(x)), 1e-8);
  }
}

TEST(Int0, DaggerLaws) {
  std::mt19937_64 gen(43);
  const Int0Morphism f = random_int0(gen, 2, 1, 2), g = random_int0(gen, 3, 2, 1);
  EXPECT_LE(int_distance(int_dagger(int_dagger(f)), f), 1e-12);
  EXPECT_LE(int_distance(int_dagger(int_identity(2)), int_identity(2)), 0.0);
  EXPECT_LE(int_violation(int_dagger(int_compose(f, g)), int_compose(int_dagger(g), int_dagger(f)),
                          tensor_swap(2, 3)),
            1e-8);
}

TEST(Int0, SymmetryIsInvolutive) {
  EXPECT_LE(int_distance(int_compose(int_symmetry(1, 2), int_symmetry(2, 1)), int_identity(3)),
            1e-8);
}

TEST(CanonicalTrace, ZeroIsNoOpAndRangeChecked) {
  std::mt19937_64 gen(44);
  const Int0Morphism f = random_int0(gen, 2, 1, 1);
  EXPECT_EQ(canonical_trace(f, 0).carrier().transition(), f.carrier().transition());
  EXPECT_THROW(canonical_trace(f, 2), ShapeError);
}

TEST(Name, RoundTripsAndUsesSwapConvention) {
  std::mt19937_64 gen(45);
  const Int0Morphism f = random_int0(gen, 3, 2, 1);
  const Qta q = name_of(f);
  EXPECT_EQ(q.h(), 3u);
  EXPECT_EQ(q.rank(), 3u);
  EXPECT_LE(max_distance(q.transition(),
                         kron(identity(3), sum_swap(1, 2)) * f.carrier().transition()),
            0.0);
  EXPECT_LE(int_distance(unname(q, 2, 1), f), 1e-14);
  EXPECT_THROW(unname(q, 2, 2), ShapeError);
  EXPECT_EQ(name_of(int_identity(2)).transition(), sum_swap(2, 2));
}

TEST(Qta, ValidatesSquareUnitary) {
  EXPECT_THROW(Qta::make(1, 2, random_isometry(2, 1, 1)), ShapeError);
  EXPECT_THROW(Qta::make(2, 2, identity(3)), ShapeError);
  Operator bad = identity(2);
  bad(0, 1) = 0.5;
  EXPECT_THROW(Qta::make(1, 2, bad), ContractError);
}

TEST(Bidirectionalize, IdentityAndShape) {
  const UnitaryDqta id = UnitaryDqta::make(identity_automaton(2));
  const Qta q = bidirectionalize(id);
  EXPECT_EQ(q.h(), 1u);
  EXPECT_EQ(q.rank(), 4u);
  EXPECT_EQ(q.transition(), sum_swap(2, 2));

  std::mt19937_64 gen(46);
  const UnitaryDqta t = random_unitary_dqta(gen, 2, 3);
  const Qta b = bidirectionalize(t);
  EXPECT_EQ(b.h(), 4u);
  EXPECT_EQ(b.rank(), 6u);
  EXPECT_LE(unitarity_defect(b.transition()), 1e-12);
}

TEST(Bidirectionalize, DistinguishesDistinctAutomata) {
  std::mt19937_64 gen(47);
  for (int trial = 0; trial < 10; ++trial) {
    const UnitaryDqta t1 = random_unitary_dqta(gen, 2, 2), t2 = random_unitary_dqta(gen, 2, 2);
    EXPECT_GE(max_distance(bidirectionalize(t1).transition(), bidirectionalize(t2).transition()),
              1e-6);
  }
}

TEST(FunctorImage, PreservesCompositionUpToFactorOrder) {
  std::mt19937_64 gen(48);
  const UnitaryDqta t1 = random_unitary_dqta(gen, 2, 1), t2 = random_unitary_dqta(gen, 3, 1);
  const UnitaryDqta both = UnitaryDqta::make(cascade(t1.dqta(), t2.dqta()), kCompositeTol);
  const std::size_t dims[] = {2, 3, 2, 3};
  const std::size_t order[] = {0, 2, 1, 3};
  EXPECT_LE(int_violation(functor_image(both),
                          int_compose(functor_image(t1), functor_image(t2)),
                          tensor_permutation(dims, order)),
            1e-8);
}
