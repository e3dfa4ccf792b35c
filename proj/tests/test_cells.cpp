#include <gtest/gtest.h>

#include <random>
#include <string>

#include "qturing/cells.hpp"
#include "qturing/generators.hpp"
#include "qturing/io.hpp"

using namespace qturing;

namespace {

std::string sample(const std::string& name) { return std::string(QTURING_SAMPLES) + "/" + name; }

Cell toggle_bounce_cell() {
  return build_cell(parse_rule_text(detail::read_file(sample("toggle_bounce.rule"))));
}

Cell random_cell(std::mt19937_64& gen, std::size_t states, std::size_t bits) {
  const std::size_t n = (std::size_t{1} << bits) * 2 * states;
  return build_cell(states, bits, random_unitary(n, gen));
}

}  // namespace

TEST(Cell, TwoStateThreeBitDimensions) {
  const Cell c = build_cell(2, 3);
  EXPECT_EQ(c.automaton.h(), 8u);
  EXPECT_EQ(c.automaton.k(), 4u);
  EXPECT_EQ(c.automaton.l(), 4u);
  EXPECT_EQ(c.inputs, cell_labels(2));
  EXPECT_EQ(c.automaton.transition(), identity(32));
  EXPECT_EQ(to_dqta(read_automaton(sample("blank_cell.dqta"))).transition(),
            c.automaton.transition());
}

TEST(Cell, IndexLayout) {
  EXPECT_EQ(cell_index({0, Direction::right, 0}, 2), 0u);
  EXPECT_EQ(cell_index({0, Direction::left, 1}, 2), 3u);
  EXPECT_EQ(cell_index({1, Direction::right, 1}, 2), 5u);
  EXPECT_EQ(cell_labels(2)[2].name, "(L,1)");
}

TEST(Cell, RulesBuildPermutationsWithPhases) {
  const Cell c = toggle_bounce_cell();
  const Operator& tau = c.automaton.transition();
  EXPECT_EQ(unitarity_defect(tau), 0.0);
  // (1, L, 2) -> (0, R, 2) with phase i.
  EXPECT_EQ(tau(static_cast<Index>(cell_index({0, Direction::right, 1}, 2)),
                static_cast<Index>(cell_index({1, Direction::left, 1}, 2))),
            Complex(0, 1));
  EXPECT_EQ(tau(static_cast<Index>(cell_index({1, Direction::right, 0}, 2)),
                static_cast<Index>(cell_index({0, Direction::right, 1}, 2))),
            Complex(1));
  EXPECT_EQ(to_dqta(read_automaton(sample("toggle_bounce_cell.dqta"))).transition(), tau);
  EXPECT_EQ(unitarity_defect(build_cell(2, 2, toggle_bounce_rule(2, 2)).automaton.transition()), 0.0);
}

TEST(Cell, RejectsInvalidRules) {
  RuleTable collide;
  collide.entries.push_back({{0, Direction::right, 0}, {0, Direction::left, 0}});
  EXPECT_THROW(build_cell(1, 1, collide), ShapeError);
  RuleTable twice;
  twice.entries.push_back({{0, Direction::right, 0}, {1, Direction::right, 0}});
  twice.entries.push_back({{0, Direction::right, 0}, {1, Direction::left, 0}});
  EXPECT_THROW(build_cell(1, 1, twice), ShapeError);
  RuleTable range;
  range.entries.push_back({{2, Direction::right, 0}, {0, Direction::right, 0}});
  EXPECT_THROW(build_cell(1, 1, range), ShapeError);
  RuleTable phase;
  phase.entries.push_back({{0, Direction::right, 0}, {0, Direction::right, 0}, Complex(0.5)});
  EXPECT_THROW(build_cell(1, 1, phase), ShapeError);
  EXPECT_THROW(build_cell(0, 1), ShapeError);
  EXPECT_THROW(build_cell(1, 1, identity(3)), ShapeError);
}

TEST(Chain, SingleCellIsUnchanged) {
  const Cell c = toggle_bounce_cell();
  const Cell one = chain_cells(c, 1);
  EXPECT_LE(max_distance(one.automaton.transition(), c.automaton.transition()), 0.0);
  EXPECT_EQ(one.inputs, c.inputs);
  EXPECT_THROW(chain_cells(c, 0), ShapeError);
}

TEST(Chain, ThreeCellsHaveProductStateAndOpenBoundary) {
  const Cell c = build_cell(2, 1, toggle_bounce_rule(2, 1));
  const Cell three = chain_cells(c, 3);
  EXPECT_EQ(three.automaton.h(), 8u);
  EXPECT_EQ(three.automaton.k(), 4u);
  EXPECT_EQ(three.automaton.l(), 4u);
  EXPECT_LE(unitarity_defect(three.automaton.transition()), 1e-12);
}

TEST(Chain, EqualsInt0Composition) {
  std::mt19937_64 gen(51);
  for (const Cell& c : {toggle_bounce_cell(), random_cell(gen, 1, 1), random_cell(gen, 2, 1)}) {
    const Cell two = chain_cells(c, 2);
    const Int0Morphism composed = int_compose(cell_morphism(c), cell_morphism(c));
    EXPECT_LE(int_distance(cell_morphism(two), composed), 1e-8);
    const Cell three = chain_cells(c, 3);
    EXPECT_LE(int_distance(cell_morphism(three), int_compose(composed, cell_morphism(c))), 1e-8);
  }
}

TEST(Chain, PathFollowingAgreesWithFeedback) {
  const Cell c = toggle_bounce_cell();
  const UnitaryDqta canon = detail::canonical_cell(c);
  ASSERT_TRUE(detail::is_monomial_unitary(canon.transition()));
  for (std::size_t n = 1; n <= 3; ++n) {
    const Dqta paths = detail::chain_by_paths(canon.transition(), canon.h(), 2, n);
    const Dqta dense = detail::chain_by_feedback(canon.dqta(), 2, n);
    EXPECT_LE(max_distance(paths.transition(), dense.transition()), 1e-12) << "n=" << n;
  }
  const Cell tb = build_cell(1, 2, toggle_bounce_rule(1, 2));
  const UnitaryDqta c2 = detail::canonical_cell(tb);
  EXPECT_LE(max_distance(detail::chain_by_paths(c2.transition(), c2.h(), 1, 3).transition(),
                         detail::chain_by_feedback(c2.dqta(), 1, 3).transition()),
            1e-12);
  std::mt19937_64 gen(52);
  EXPECT_FALSE(detail::is_monomial_unitary(random_cell(gen, 1, 1).automaton.transition()));
}

TEST(Chain, CanonicalizesByLabels) {
  const Cell c = toggle_bounce_cell();
  Cell relabelled = c;
  const std::size_t order[] = {1, 0};
  const Operator swap_groups = kron(identity(2), summand_permutation(SpaceDims{2, 2}, order));
  relabelled.automaton = UnitaryDqta::make(
      Dqta::make(2, 4, 4, swap_groups * c.automaton.transition() * swap_groups.adjoint()));
  relabelled.inputs = concat(Labels(c.inputs.begin() + 2, c.inputs.end()),
                             Labels(c.inputs.begin(), c.inputs.begin() + 2));
  relabelled.outputs = relabelled.inputs;
  EXPECT_LE(max_distance(chain_cells(relabelled, 2).automaton.transition(),
                         chain_cells(c, 2).automaton.transition()),
            1e-12);
  Cell unlabelled = c;
  unlabelled.inputs[0].name = "x";
  EXPECT_THROW(chain_cells(unlabelled, 2), ShapeError);
}

TEST(Chain, MirrorAndRing) {
  const Cell c = toggle_bounce_cell();
  const Cell m1 = chain_cells(c, 1, {true, false});
  EXPECT_LE(max_distance(m1.automaton.transition(),
                         cascade(c.automaton.dqta(), symmetry_automaton(2, 2)).transition()),
            0.0);
  EXPECT_EQ(m1.outputs[0].name, "(L,1)");
  const Cell m3 = chain_cells(c, 3, {true, false});
  EXPECT_LE(unitarity_defect(m3.automaton.transition()), 1e-12);

  const Cell ring = chain_cells(c, 3, {false, true});
  EXPECT_EQ(ring.automaton.h(), 8u);
  EXPECT_EQ(ring.automaton.k(), 0u);
  EXPECT_EQ(ring.automaton.l(), 0u);
}

TEST(Simulate, IdentityCellBouncesBetweenBoundaries) {
  const Cell c = build_cell(1, 0);
  const Qta q = name_of(cell_morphism(c));
  const SimulationTrace tr = simulate(q, basis_state(q, 0), 4);
  ASSERT_EQ(tr.masses.size(), 5u);
  EXPECT_EQ(tr.masses[0], (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(tr.masses[1], (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(tr.masses[2], (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(tr.summands, (std::vector<std::string>{"0", "1"}));
}

TEST(Simulate, NamedToggleBouncePreservesNormOver100Steps) {
  const Qta q = name_of(cell_morphism(toggle_bounce_cell()));
  EXPECT_EQ(q.transition().rows(), 8);
  for (std::size_t start = 0; start < 4; ++start) {
    const SimulationTrace tr = simulate(q, basis_state(q, start, 1), 100, cell_labels(2));
    EXPECT_EQ(tr.masses.size(), 101u);
    for (double n : tr.total_norm) EXPECT_NEAR(n, 1.0, 1e-9);
    for (const auto& row : tr.masses) {
      double total = 0.0;
      for (double m : row) total += m;
      EXPECT_NEAR(total, 1.0, 1e-9);
    }
  }
}

TEST(Simulate, ZeroStepsAndInputChecks) {
  const Qta q = name_of(cell_morphism(toggle_bounce_cell()));
  const SimulationTrace tr = simulate(q, basis_state(q, 3, 1), 0);
  ASSERT_EQ(tr.masses.size(), 1u);
  EXPECT_EQ(tr.masses[0][3], 1.0);
  Eigen::VectorXcd twice = 2.0 * basis_state(q, 0);
  EXPECT_THROW(simulate(q, twice, 3), std::invalid_argument);
  EXPECT_THROW(simulate(q, Eigen::VectorXcd::Zero(3), 3), ShapeError);
  EXPECT_THROW(basis_state(q, 4), ShapeError);
  EXPECT_THROW(simulate(q, basis_state(q, 0), 1, Labels{{"a", 3}}), ShapeError);
}
