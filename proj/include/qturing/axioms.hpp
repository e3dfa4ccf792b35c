#pragma once

// Seeded numerical checks of the trace axioms, the equivalent feedback
// formulas, the Int0 laws and the functor F.
//
// Instance i of a law is built from seed cfg.seed + i alone, so a report's
// worst_seed replays its worst instance. Violations are max-norm distances.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qturing/dqta.hpp"
#include "qturing/errors.hpp"
#include "qturing/generators.hpp"
#include "qturing/intcat.hpp"
#include "qturing/linalg.hpp"
#include "qturing/trace.hpp"

namespace qturing {

inline const std::vector<std::string>& law_sets() {
  static const std::vector<std::string> sets = {
      "trace-axioms",       "dagger",     "kit-equivalence", "kleene-equivalence",
      "tensor-compat",      "int0-laws",  "functor-F",       "conway-counterexample"};
  return sets;
}

struct CheckConfig {
  std::uint64_t seed = 20240611;
  std::size_t instances = 200;
  std::size_t max_dim = 6;
  double tolerance = 1e-8;
  std::set<std::string> law_set{law_sets().begin(), law_sets().end()};

  void validate() const {
    if (!(tolerance > 0.0)) throw std::invalid_argument("axioms: tolerance must be positive");
    if (max_dim == 0) throw std::invalid_argument("axioms: max_dim must be at least 1");
    for (const auto& s : law_set)
      if (std::find(law_sets().begin(), law_sets().end(), s) == law_sets().end())
        throw std::invalid_argument("axioms: unknown law set '" + s + "'");
  }
};

struct ConwayCase {
  std::string identity;
  Complex a, b, lhs, rhs;
  bool holds;
};

struct LawReport {
  std::string law;
  std::size_t instances_run = 0;
  double max_violation = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  std::uint64_t worst_seed = 0;
  bool expected_failure = false;
  std::size_t resampled = 0;
  std::vector<ConwayCase> cases;

  bool as_expected() const { return pass != expected_failure; }
};

namespace detail {

struct Outcome {
  double violation = 0.0;
  std::size_t resampled = 0;
};

struct Law {
  std::string id;
  std::string set;
  double tol_floor = 0.0;  ///< the law's tolerance is max(cfg.tolerance, tol_floor)
  bool single = false;     ///< deterministic: one instance
  std::function<Outcome(std::uint64_t seed, std::size_t index, const CheckConfig&)> eval;
};

inline Operator schur(const Operator& op, std::size_t u, std::size_t k, std::size_t l) {
  return schur_feedback(BlockMap(op, u, k, l), kCompositeTol);
}

inline Operator schur(const BlockMap& m) { return schur_feedback(m, kCompositeTol); }

inline double dqta_distance(const Dqta& a, const Dqta& b) {
  if (a.h() != b.h()) return std::numeric_limits<double>::infinity();
  return iso_violation(a, b, identity(a.h()));
}

inline std::size_t small(const CheckConfig& cfg) { return std::min<std::size_t>(cfg.max_dim, 3); }

// ---- Isom ----------------------------------------------------------------

inline std::vector<Law> isom_laws() {
  using F = Family;
  std::vector<Law> laws;
  const auto add = [&](std::string id, std::string set, auto fn, double floor = 0.0,
                       bool single = false) {
    laws.push_back({std::move(id), std::move(set), floor, single, fn});
  };

  add("isom.schur-isometry", "trace-axioms", [](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto gen = instance_generator(s, F::isometry);
    return Outcome{isometry_defect(schur(random_blockmap(gen, c.max_dim, i)))};
  });
  add("isom.naturality-k", "trace-axioms", [](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto gen = instance_generator(s, F::isometry);
    const BlockMap m = random_blockmap(gen, c.max_dim, i);
    const std::size_t k2 = uniform_dim(gen, 0, m.k());
    const Operator g = random_isometry(m.k(), k2, gen);
    const Operator lhs = schur(m.op() * dsum(identity(m.u()), g), m.u(), k2, m.l());
    return Outcome{max_distance(lhs, schur(m) * g)};
  });
  add("isom.naturality-l", "trace-axioms", [](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto gen = instance_generator(s, F::isometry);
    const BlockMap m = random_blockmap(gen, c.max_dim, i);
    const std::size_t l2 = m.l() + uniform_dim(gen, 0, 2);
    const Operator h = random_isometry(l2, m.l(), gen);
    const Operator lhs = schur(dsum(identity(m.u()), h) * m.op(), m.u(), m.k(), l2);
    return Outcome{max_distance(lhs, h * schur(m))};
  });
  add("isom.sliding", "trace-axioms", [](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto gen = instance_generator(s, F::isometry);
    const BlockMap m = random_blockmap(gen, c.max_dim, i);
    const Operator sigma = random_unitary(m.u(), gen);
    const Operator lhs = schur(dsum(sigma, identity(m.l())) * m.op(), m.u(), m.k(), m.l());
    const Operator rhs = schur(m.op() * dsum(sigma, identity(m.k())), m.u(), m.k(), m.l());
    return Outcome{max_distance(lhs, rhs)};
  });
  add("isom.vanishing-zero", "trace-axioms", [](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto gen = instance_generator(s, F::isometry);
    const BlockMap m = random_blockmap(gen, c.max_dim, i);
    const Operator lhs = schur(m.op(), 0, m.u() + m.k(), m.u() + m.l());
    return Outcome{max_distance(lhs, m.op())};
  });
  add("isom.vanishing-sum", "trace-axioms", [](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto gen = instance_generator(s, F::isometry);
    const BlockMap m = random_blockmap(gen, c.max_dim, i);
    const std::size_t u1 = uniform_dim(gen, 0, m.u()), u2 = m.u() - u1;
    const Operator inner = schur(m.op(), u1, u2 + m.k(), u2 + m.l());
    const Operator nested = schur(inner, u2, m.k(), m.l());
    return Outcome{max_distance(nested, schur(m))};
  });
  add("isom.vanishing-kernel", "trace-axioms", [](std::uint64_t s, std::size_t, const CheckConfig& c) {
    auto gen = instance_generator(s, F::forced_kernel);
    const ForcedKernelInstance fk = random_forced_kernel(gen, c.max_dim);
    const BlockMap& m = fk.map;
    const std::size_t v = fk.inner;
    const Operator inner = schur(m.op(), fk.outer, v + m.k(), v + m.l());
    const Operator a_block = inner.topLeftCorner(static_cast<Index>(v), static_cast<Index>(v));
    if (kernel_on_top(a_block).kernel_dim < fk.forced)
      return Outcome{std::numeric_limits<double>::infinity()};
    const Operator nested = schur(inner, v, m.k(), m.l());
    return Outcome{max_distance(nested, schur(m))};
  });
  add("isom.superposing", "trace-axioms", [](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto gen = instance_generator(s, F::isometry);
    const BlockMap m = random_blockmap(gen, c.max_dim, i);
    const std::size_t k2 = uniform_dim(gen, 0, c.max_dim);
    const std::size_t l2 = k2 + uniform_dim(gen, 0, 2);
    const Operator g = random_isometry(l2, k2, gen);
    const Operator lhs = schur(dsum(m.op(), g), m.u(), m.k() + k2, m.l() + l2);
    return Outcome{max_distance(lhs, dsum(schur(m), g))};
  });
  add("isom.yanking", "trace-axioms", [](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto gen = instance_generator(s, F::isometry);
    const std::size_t u = i < 2 ? i : uniform_dim(gen, 1, c.max_dim);
    return Outcome{max_distance(schur(sum_swap(u, u), u, u, u), identity(u))};
  });
  add(
      "isom.degenerate-witness", "trace-axioms",
      [](std::uint64_t, std::size_t, const CheckConfig&) {
        const Operator p = dsum(sum_swap(1, 1), identity(1));
        const Operator nested = schur(schur(p, 1, 2, 2), 1, 1, 1);
        const Operator joint = schur(p, 2, 1, 1);
        const Operator one = identity(1);
        return Outcome{std::max(max_distance(nested, one), max_distance(joint, one))};
      },
      0.0, true);
  add("isom.dagger-trace", "dagger", [](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto gen = instance_generator(s, F::isometry);
    const BlockMap m = random_unitary_blockmap(gen, c.max_dim, i);
    const Operator lhs = schur(m.op().adjoint(), m.u(), m.k(), m.k());
    return Outcome{max_distance(lhs, schur(m).adjoint())};
  });
  add("isom.kit-equals-schur", "kit-equivalence",
      [](std::uint64_t s, std::size_t i, const CheckConfig& c) {
        auto gen = instance_generator(s, F::isometry);
        const BlockMap m = random_blockmap(gen, c.max_dim, i);
        try {
          return Outcome{max_distance(kernel_image_trace(m, kCompositeTol), schur(m))};
        } catch (const FactorizationError&) {
          return Outcome{std::numeric_limits<double>::infinity()};
        }
      });
  add("isom.kit-kernel", "kit-equivalence", [](std::uint64_t s, std::size_t, const CheckConfig& c) {
    auto gen = instance_generator(s, F::kernel);
    const KernelInstance ki = random_kernel_blockmap(gen, c.max_dim);
    const Blocks bl = split_blocks(ki.map);
    if (kernel_on_top(bl.a).kernel_dim < ki.kernel_dim)
      return Outcome{std::numeric_limits<double>::infinity()};
    try {
      return Outcome{max_distance(kernel_image_trace(ki.map, kCompositeTol), schur(ki.map))};
    } catch (const FactorizationError&) {
      return Outcome{std::numeric_limits<double>::infinity()};
    }
  });
  add(
      "isom.kleene-equals-schur", "kleene-equivalence",
      [](std::uint64_t s, std::size_t i, const CheckConfig& c) {
        auto gen = instance_generator(s, F::kleene);
        Outcome out;
        std::optional<BlockMap> m;
        while (true) {
          m = random_kleene_blockmap(gen, c.max_dim, i);
          if (spectral_radius(split_blocks(*m).a) <= 0.999) break;
          ++out.resampled;
        }
        const KleeneResult k = kleene_feedback(*m, 1000000, 1e-11);
        out.violation = k.report.converged ? max_distance(k.value, schur(*m))
                                           : std::numeric_limits<double>::infinity();
        return out;
      },
      1e-6);
  add("isom.tensor-compat", "tensor-compat", [](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto gen = instance_generator(s, F::isometry);
    const BlockMap m = random_blockmap(gen, c.max_dim, i);
    const std::size_t r = uniform_dim(gen, 1, 3);
    const std::size_t u = m.u(), k = m.k(), l = m.l();
    const Operator fed = schur(m);
    const Operator right = schur(kron(m.op(), identity(r)), u * r, k * r, l * r);
    const Operator left_op = distribute(r, SpaceDims{u, l}) * kron(identity(r), m.op()) *
                             distribute(r, SpaceDims{u, k}).adjoint();
    const Operator left = schur(left_op, u * r, k * r, l * r);
    return Outcome{std::max(max_distance(right, kron(fed, identity(r))),
                            max_distance(left, kron(identity(r), fed)))};
  });
  return laws;
}

// ---- DQT -----------------------------------------------------------------

struct DqtDraw {
  std::size_t h, u, k, l;
};

inline DqtDraw draw_dqt(std::mt19937_64& gen, const CheckConfig& c, std::size_t index) {
  const std::size_t d = small(c);
  DqtDraw out{};
  out.h = uniform_dim(gen, 1, d);
  out.u = index == 0 ? 0 : uniform_dim(gen, 1, d);
  out.k = index == 1 ? 0 : uniform_dim(gen, 0, d);
  out.l = index == 1 ? 0 : uniform_dim(gen, out.k, d);
  return out;
}

inline std::vector<Law> dqt_laws() {
  using F = Family;
  std::vector<Law> laws;
  const auto add = [&](std::string id, std::string set, auto fn) {
    laws.push_back({std::move(id), std::move(set), 0.0, false, fn});
  };
  const auto draw = [](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto gen = instance_generator(s, F::dqt);
    const DqtDraw d = draw_dqt(gen, c, i);
    const Dqta t = random_dqta(gen, d.h, d.u + d.k, d.u + d.l);
    return std::tuple{std::move(gen), d, t};
  };

  add("dqt.naturality-k", "trace-axioms", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, d, t] = draw(s, i, c);
    const std::size_t k2 = uniform_dim(gen, 0, d.k);
    const Dqta g = random_dqta(gen, uniform_dim(gen, 1, 2), k2, d.k);
    const Dqta lhs = feedback_dqta(cascade(turing_tensor(identity_automaton(d.u), g), t), d.u);
    return Outcome{dqta_distance(lhs, cascade(g, feedback_dqta(t, d.u)))};
  });
  add("dqt.naturality-l", "trace-axioms", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, d, t] = draw(s, i, c);
    const std::size_t l2 = d.l + uniform_dim(gen, 0, 1);
    const Dqta g = random_dqta(gen, uniform_dim(gen, 1, 2), d.l, l2);
    const Dqta lhs = feedback_dqta(cascade(t, turing_tensor(identity_automaton(d.u), g)), d.u);
    return Outcome{dqta_distance(lhs, cascade(feedback_dqta(t, d.u), g))};
  });
  add("dqt.sliding", "trace-axioms", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, d, t] = draw(s, i, c);
    const Dqta sigma = stateless_automaton(random_unitary(d.u, gen));
    const Dqta lhs = feedback_dqta(cascade(t, turing_tensor(sigma, identity_automaton(d.l))), d.u);
    const Dqta rhs = feedback_dqta(cascade(turing_tensor(sigma, identity_automaton(d.k)), t), d.u);
    return Outcome{dqta_distance(lhs, rhs)};
  });
  add("dqt.vanishing-zero", "trace-axioms", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, d, t] = draw(s, i, c);
    return Outcome{dqta_distance(feedback_dqta(t, 0), t)};
  });
  add("dqt.vanishing-sum", "trace-axioms", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, d, t] = draw(s, i, c);
    const std::size_t u1 = uniform_dim(gen, 0, d.u);
    const Dqta nested = feedback_dqta(feedback_dqta(t, u1), d.u - u1);
    return Outcome{dqta_distance(nested, feedback_dqta(t, d.u))};
  });
  add("dqt.superposing", "trace-axioms", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, d, t] = draw(s, i, c);
    const std::size_t k2 = uniform_dim(gen, 0, 2);
    const std::size_t l2 = k2 + uniform_dim(gen, 0, 1);
    const Dqta g = random_dqta(gen, uniform_dim(gen, 1, 2), k2, l2);
    const Dqta lhs = feedback_dqta(turing_tensor(t, g), d.u);
    return Outcome{dqta_distance(lhs, turing_tensor(feedback_dqta(t, d.u), g))};
  });
  add("dqt.yanking", "trace-axioms", [](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto gen = instance_generator(s, F::dqt);
    const std::size_t u = i < 2 ? i : uniform_dim(gen, 1, small(c));
    return Outcome{dqta_distance(feedback_dqta(symmetry_automaton(u, u), u), identity_automaton(u))};
  });
  add("dqt.isometry-preservation", "trace-axioms",
      [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
        auto [gen, d, t] = draw(s, i, c);
        const std::size_t l2 = t.l() + uniform_dim(gen, 0, 1);
        const Dqta t2 = random_dqta(gen, uniform_dim(gen, 1, 2), t.l(), l2);
        return Outcome{std::max({isometry_defect(cascade(t, t2).transition()),
                                 isometry_defect(turing_tensor(t, t2).transition()),
                                 isometry_defect(feedback_dqta(t, d.u).transition())})};
      });
  add("dqt.tensor-compat", "tensor-compat", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, d, t] = draw(s, i, c);
    const Operator tau = random_isometry(d.u + d.l, d.u + d.k, gen);
    const Dqta lifted = Dqta::make(d.h, d.u + d.k, d.u + d.l, kron(identity(d.h), tau));
    const Dqta expected =
        Dqta::make(d.h, d.k, d.l, kron(identity(d.h), schur(tau, d.u, d.k, d.l)), kCompositeTol);
    return Outcome{dqta_distance(feedback_dqta(lifted, d.u), expected)};
  });
  add("dqt.dagger-trace", "dagger", [](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto gen = instance_generator(s, F::dqt);
    const DqtDraw d = draw_dqt(gen, c, i);
    const UnitaryDqta t = random_unitary_dqta(gen, d.h, d.u + d.k);
    const UnitaryDqta fed = UnitaryDqta::make(feedback_dqta(t.dqta(), d.u), kCompositeTol);
    const Dqta lhs = feedback_dqta(dagger_dqta(t).dqta(), d.u);
    return Outcome{dqta_distance(lhs, dagger_dqta(fed).dqta())};
  });
  add("dqt.dagger-involution", "dagger", [](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto gen = instance_generator(s, F::dqt);
    const DqtDraw d = draw_dqt(gen, c, i);
    const UnitaryDqta t = random_unitary_dqta(gen, d.h, d.u + d.k);
    return Outcome{dqta_distance(dagger_dqta(dagger_dqta(t)).dqta(), t.dqta())};
  });
  return laws;
}

// ---- Int0 and F ----------------------------------------------------------

struct IntDraw {
  std::size_t a, b, c;
};

inline IntDraw draw_ranks(std::mt19937_64& gen, const CheckConfig& cfg, std::size_t index) {
  if (index == 0) return {0, 0, 0};
  const std::size_t d = small(cfg);
  return {uniform_dim(gen, 0, d), uniform_dim(gen, 0, d), uniform_dim(gen, 0, d)};
}

inline std::size_t draw_h(std::mt19937_64& gen) { return uniform_dim(gen, 1, 2); }

inline Operator four_factor_witness(std::size_t h1, std::size_t h2, std::size_t h3,
                                    std::size_t h4) {
  const std::size_t dims[] = {h1, h2, h3, h4};
  const std::size_t order[] = {0, 2, 1, 3};
  return tensor_permutation(dims, order);
}

inline std::vector<Law> int0_laws() {
  using F = Family;
  std::vector<Law> laws;
  const auto add = [&](std::string id, std::string set, auto fn) {
    laws.push_back({std::move(id), std::move(set), 0.0, false, fn});
  };
  const auto start = [](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto gen = instance_generator(s, F::int0);
    const IntDraw r = draw_ranks(gen, c, i);
    return std::pair{std::move(gen), r};
  };

  add("int0.unit-left", "int0-laws", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, r] = start(s, i, c);
    const Int0Morphism f = random_int0(gen, draw_h(gen), r.a, r.b);
    return Outcome{int_distance(int_compose(int_identity(r.a), f), f)};
  });
  add("int0.unit-right", "int0-laws", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, r] = start(s, i, c);
    const Int0Morphism f = random_int0(gen, draw_h(gen), r.a, r.b);
    return Outcome{int_distance(int_compose(f, int_identity(r.b)), f)};
  });
  add("int0.associativity", "int0-laws", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, r] = start(s, i, c);
    const std::size_t d = uniform_dim(gen, 0, small(c));
    const Int0Morphism f = random_int0(gen, draw_h(gen), r.a, r.b);
    const Int0Morphism g = random_int0(gen, draw_h(gen), r.b, r.c);
    const Int0Morphism h = random_int0(gen, draw_h(gen), r.c, d);
    return Outcome{
        int_distance(int_compose(int_compose(f, g), h), int_compose(f, int_compose(g, h)))};
  });
  add("int0.triangle-1", "int0-laws", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, r] = start(s, i, c);
    const std::size_t x = r.a;
    const Int0Units u = int_units(x);
    const Int0Morphism lhs = int_compose(int_tensor(int_identity(x), u.unit),
                                         int_tensor(u.counit, int_identity(x)));
    return Outcome{int_distance(lhs, int_identity(x))};
  });
  add("int0.triangle-2", "int0-laws", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, r] = start(s, i, c);
    const std::size_t x = r.a;
    const Int0Units u = int_units(x);
    const Int0Morphism lhs = int_compose(int_tensor(u.unit, int_identity(x)),
                                         int_tensor(int_identity(x), u.counit));
    return Outcome{int_distance(lhs, int_identity(x))};
  });
  add("int0.unit-dagger", "int0-laws", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, r] = start(s, i, c);
    const Int0Units u = int_units(r.a);
    return Outcome{int_distance(int_dagger(u.unit), u.counit)};
  });
  add("int0.self-dual-coherence", "int0-laws",
      [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
        auto [gen, r] = start(s, i, c);
        const std::size_t x = r.a;
        const Int0Units u = int_units(x);
        const Int0Morphism sym = int_symmetry(x, x);
        return Outcome{std::max(int_distance(int_compose(u.unit, sym), u.unit),
                                int_distance(int_compose(sym, u.counit), u.counit))};
      });
  add("int0.counit-dagger", "int0-laws", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, r] = start(s, i, c);
    const Int0Units u = int_units(r.a);
    return Outcome{int_distance(int_dagger(u.counit), int_compose(u.unit, int_symmetry(r.a, r.a)))};
  });
  add("int0.unit-tensor", "int0-laws", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, r] = start(s, i, c);
    const std::size_t a = r.a, b = r.b;
    const Int0Morphism rhs =
        int_compose(int_tensor(int_units(a).unit, int_units(b).unit),
                    int_tensor(int_tensor(int_identity(a), int_symmetry(a, b)), int_identity(b)));
    return Outcome{int_distance(int_units(a + b).unit, rhs)};
  });
  add("int0.symmetry-involution", "int0-laws",
      [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
        auto [gen, r] = start(s, i, c);
        return Outcome{int_distance(int_compose(int_symmetry(r.a, r.b), int_symmetry(r.b, r.a)),
                                    int_identity(r.a + r.b))};
      });
  add("int0.bifunctoriality", "int0-laws", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, r] = start(s, i, c);
    const std::size_t d = small(c);
    const std::size_t x2 = uniform_dim(gen, 0, d), y2 = uniform_dim(gen, 0, d);
    const std::size_t z2 = uniform_dim(gen, 0, d);
    const std::size_t hf = draw_h(gen), hg = draw_h(gen), hf2 = draw_h(gen), hg2 = draw_h(gen);
    const Int0Morphism f = random_int0(gen, hf, r.a, r.b);
    const Int0Morphism f2 = random_int0(gen, hf2, r.b, r.c);
    const Int0Morphism g = random_int0(gen, hg, x2, y2);
    const Int0Morphism g2 = random_int0(gen, hg2, y2, z2);
    const Int0Morphism lhs = int_compose(int_tensor(f, g), int_tensor(f2, g2));
    const Int0Morphism rhs = int_tensor(int_compose(f, f2), int_compose(g, g2));
    return Outcome{int_violation(lhs, rhs, four_factor_witness(hf, hg, hf2, hg2))};
  });
  add("int0.dagger-tensor", "int0-laws", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, r] = start(s, i, c);
    const Int0Morphism f = random_int0(gen, draw_h(gen), r.a, r.b);
    const std::size_t d = uniform_dim(gen, 0, small(c));
    const Int0Morphism g = random_int0(gen, draw_h(gen), r.c, d);
    return Outcome{
        int_distance(int_dagger(int_tensor(f, g)), int_tensor(int_dagger(f), int_dagger(g)))};
  });
  add("int0.dagger-involution", "int0-laws", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, r] = start(s, i, c);
    const Int0Morphism f = random_int0(gen, draw_h(gen), r.a, r.b);
    return Outcome{int_distance(int_dagger(int_dagger(f)), f)};
  });
  add("int0.dagger-contravariance", "int0-laws",
      [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
        auto [gen, r] = start(s, i, c);
        const std::size_t ha = draw_h(gen), hb = draw_h(gen);
        const Int0Morphism a = random_int0(gen, ha, r.a, r.b);
        const Int0Morphism b = random_int0(gen, hb, r.b, r.c);
        return Outcome{int_violation(int_dagger(int_compose(a, b)),
                                     int_compose(int_dagger(b), int_dagger(a)),
                                     tensor_swap(ha, hb))};
      });
  add("int0.dagger-identity", "int0-laws", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, r] = start(s, i, c);
    return Outcome{int_distance(int_dagger(int_identity(r.a)), int_identity(r.a))};
  });
  add("int0.yanking", "int0-laws", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, r] = start(s, i, c);
    return Outcome{int_distance(canonical_trace(int_symmetry(r.a, r.a), r.a), int_identity(r.a))};
  });
  add("int0.name-roundtrip", "int0-laws", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, r] = start(s, i, c);
    const Int0Morphism f = random_int0(gen, draw_h(gen), r.a, r.b);
    return Outcome{int_distance(unname(name_of(f), r.a, r.b), f)};
  });

  // F(t) = t ⊞ t^dagger on unitary automata.
  add("functor.identity", "functor-F", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, r] = start(s, i, c);
    const UnitaryDqta id = UnitaryDqta::make(identity_automaton(r.a));
    return Outcome{int_distance(functor_image(id), int_identity(r.a))};
  });
  add("functor.composition", "functor-F", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, r] = start(s, i, c);
    const std::size_t h1 = draw_h(gen), h2 = draw_h(gen);
    const UnitaryDqta t1 = random_unitary_dqta(gen, h1, r.a);
    const UnitaryDqta t2 = random_unitary_dqta(gen, h2, r.a);
    const UnitaryDqta both = UnitaryDqta::make(cascade(t1.dqta(), t2.dqta()), kCompositeTol);
    return Outcome{int_violation(functor_image(both),
                                 int_compose(functor_image(t1), functor_image(t2)),
                                 four_factor_witness(h1, h2, h1, h2))};
  });
  add("functor.dagger", "functor-F", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, r] = start(s, i, c);
    const std::size_t h = draw_h(gen);
    const UnitaryDqta t = random_unitary_dqta(gen, h, r.a);
    return Outcome{int_violation(int_dagger(functor_image(t)), functor_image(dagger_dqta(t)),
                                 tensor_swap(h, h))};
  });
  add("functor.trace", "functor-F", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, r] = start(s, i, c);
    const std::size_t u = uniform_dim(gen, 0, r.a);
    const UnitaryDqta t = random_unitary_dqta(gen, draw_h(gen), r.a);
    const UnitaryDqta fed = UnitaryDqta::make(feedback_dqta(t.dqta(), u), kCompositeTol);
    return Outcome{int_distance(functor_image(fed), canonical_trace(functor_image(t), u))};
  });
  add("functor.tensor", "functor-F", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, r] = start(s, i, c);
    const std::size_t h1 = draw_h(gen), h2 = draw_h(gen);
    const UnitaryDqta t1 = random_unitary_dqta(gen, h1, r.a);
    const UnitaryDqta t2 = random_unitary_dqta(gen, h2, r.b);
    const UnitaryDqta both = UnitaryDqta::make(turing_tensor(t1.dqta(), t2.dqta()), kCompositeTol);
    return Outcome{int_violation(functor_image(both),
                                 int_tensor(functor_image(t1), functor_image(t2)),
                                 four_factor_witness(h1, h2, h1, h2))};
  });
  add("functor.unitarity", "functor-F", [=](std::uint64_t s, std::size_t i, const CheckConfig& c) {
    auto [gen, r] = start(s, i, c);
    const UnitaryDqta t = random_unitary_dqta(gen, draw_h(gen), r.a);
    return Outcome{unitarity_defect(bidirectionalize(t).transition())};
  });
  return laws;
}

inline const std::vector<Law>& all_laws() {
  static const std::vector<Law> laws = [] {
    std::vector<Law> out = isom_laws();
    for (auto& l : dqt_laws()) out.push_back(std::move(l));
    for (auto& l : int0_laws()) out.push_back(std::move(l));
    return out;
  }();
  return laws;
}

inline const Law* find_law(const std::string& id) {
  for (const auto& l : all_laws())
    if (l.id == id) return &l;
  return nullptr;
}

inline double law_tolerance(const Law& law, const CheckConfig& cfg) {
  return std::max(cfg.tolerance, law.tol_floor);
}

inline Outcome evaluate(const Law& law, const CheckConfig& cfg, std::uint64_t seed,
                        std::size_t index) {
  try {
    return law.eval(seed, index, cfg);
  } catch (const ContractError& e) {
    return Outcome{std::max(e.defect(), std::numeric_limits<double>::min())};
  }
}

inline LawReport run_law(const Law& law, const CheckConfig& cfg) {
  LawReport rep;
  rep.law = law.id;
  rep.tolerance = law_tolerance(law, cfg);
  rep.worst_seed = cfg.seed;
  const std::size_t n = law.single ? std::min<std::size_t>(cfg.instances, 1) : cfg.instances;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t seed = cfg.seed + i;
    const Outcome o = evaluate(law, cfg, seed, i);
    rep.resampled += o.resampled;
    const double v = std::isnan(o.violation) ? std::numeric_limits<double>::infinity() : o.violation;
    if (v > rep.max_violation) {
      rep.max_violation = v;
      rep.worst_seed = seed;
    }
  }
  rep.instances_run = n;
  rep.pass = rep.max_violation <= rep.tolerance;
  return rep;
}

inline std::vector<LawReport> run_laws(const CheckConfig& cfg,
                                       const std::function<bool(const Law&)>& select) {
  cfg.validate();
  std::vector<LawReport> out;
  for (const auto& law : all_laws())
    if (cfg.law_set.count(law.set) && select(law)) out.push_back(run_law(law, cfg));
  return out;
}

inline bool has_prefix(const std::string& s, const char* p) { return s.rfind(p, 0) == 0; }

}  // namespace detail

/// Trace axioms for Isom (schur feedback) and for DQT (feedback_dqta), plus
/// the degenerate vanishing witness and isometry preservation.
inline std::vector<LawReport> check_trace_axioms(const CheckConfig& cfg) {
  return detail::run_laws(cfg, [](const detail::Law& l) {
    return l.set == "trace-axioms" || (l.set == "dagger" && detail::has_prefix(l.id, "isom."));
  });
}

/// Kleene, kernel-image and tensor-compatibility agreement with schur
/// feedback, and the DQT dagger laws.
inline std::vector<LawReport> check_equivalences(const CheckConfig& cfg) {
  return detail::run_laws(cfg, [](const detail::Law& l) {
    return l.set == "kit-equivalence" || l.set == "kleene-equivalence" ||
           l.set == "tensor-compat" || (l.set == "dagger" && detail::has_prefix(l.id, "dqt."));
  });
}

/// Category, compact-closure, complete-symmetry and dagger laws of Int0 and
/// the functoriality of F.
inline std::vector<LawReport> check_int0_laws(const CheckConfig& cfg) {
  return detail::run_laws(cfg, [](const detail::Law& l) {
    return l.set == "int0-laws" || l.set == "functor-F";
  });
}

inline std::vector<ConwayCase> conway_cases() {
  const auto star = [](Complex c) { return scalar_star(c); };
  std::vector<ConwayCase> out;
  const auto product = [&](Complex a, Complex b) {
    const Complex lhs = star(a * b), rhs = a * star(b * a) * b + 1.0;
    out.push_back({"(ab)* = a(ba)*b + 1", a, b, lhs, rhs, std::abs(lhs - rhs) <= 1e-12});
  };
  const auto sum = [&](Complex a, Complex b) {
    const Complex lhs = star(a + b), rhs = star(star(a) * b) * star(a);
    out.push_back({"(a+b)* = (a*b)*a*", a, b, lhs, rhs, std::abs(lhs - rhs) <= 1e-12});
  };
  for (const auto& [a, b] : {std::pair<Complex, Complex>{1.0, 1.0}, {0.0, 0.5}, {0.5, 0.5}}) {
    product(a, b);
    sum(a, b);
  }
  return out;
}

/// Report on the Conway identities under c* = (1 - c)^+. Fails by design.
inline LawReport conway_counterexample(double tolerance = 1e-8) {
  LawReport rep;
  rep.law = "conway.counterexample";
  rep.tolerance = tolerance;
  rep.expected_failure = true;
  rep.cases = conway_cases();
  rep.instances_run = rep.cases.size();
  for (const auto& c : rep.cases) rep.max_violation = std::max(rep.max_violation, std::abs(c.lhs - c.rhs));
  rep.pass = rep.max_violation <= tolerance;
  return rep;
}

/// Every selected report, in a fixed order.
inline std::vector<LawReport> run_all(const CheckConfig& cfg) {
  std::vector<LawReport> out;
  for (auto* fn : {&check_trace_axioms, &check_equivalences, &check_int0_laws})
    for (auto& r : fn(cfg)) out.push_back(std::move(r));
  if (cfg.law_set.count("conway-counterexample")) {
    auto c = conway_counterexample(cfg.tolerance);
    c.worst_seed = cfg.seed;
    out.push_back(std::move(c));
  }
  return out;
}

inline std::vector<std::string> law_ids() {
  std::vector<std::string> out;
  for (const auto& l : detail::all_laws()) out.push_back(l.id);
  out.push_back("conway.counterexample");
  return out;
}

/// Violation of one instance, identified by its seed.
inline double replay(const std::string& law, const CheckConfig& cfg, std::uint64_t seed) {
  if (law == "conway.counterexample") return conway_counterexample(cfg.tolerance).max_violation;
  const detail::Law* l = detail::find_law(law);
  if (!l) throw std::invalid_argument("replay: unknown law '" + law + "'");
  if (seed < cfg.seed) throw std::invalid_argument("replay: seed precedes the run's base seed");
  return detail::evaluate(*l, cfg, seed, static_cast<std::size_t>(seed - cfg.seed)).violation;
}

// ---- serialization -------------------------------------------------------

namespace detail {

inline std::string fmt17(double v) {
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  if (std::isnan(v)) return "\"nan\"";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v + 0.0);
  return buf;
}

inline std::string pair17(Complex c) { return "[" + fmt17(c.real()) + "," + fmt17(c.imag()) + "]"; }

inline double real_from(const nlohmann::json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
  }
  return v.get<double>();
}

inline Complex complex_from(const nlohmann::json& v) { return {real_from(v[0]), real_from(v[1])}; }

}  // namespace detail

/// One JSON object per line: a record per law, then one per Conway case.
inline void write_report(std::ostream& out, const std::vector<LawReport>& reports) {
  for (const auto& r : reports) {
    out << "{\"law\":" << nlohmann::json(r.law).dump() << ",\"instances_run\":" << r.instances_run
        << ",\"max_violation\":" << detail::fmt17(r.max_violation)
        << ",\"tolerance\":" << detail::fmt17(r.tolerance)
        << ",\"pass\":" << (r.pass ? "true" : "false") << ",\"worst_seed\":" << r.worst_seed
        << ",\"expected_failure\":" << (r.expected_failure ? "true" : "false")
        << ",\"resampled\":" << r.resampled << "}\n";
    for (const auto& c : r.cases)
      out << "{\"law\":" << nlohmann::json(r.law).dump()
          << ",\"case\":" << nlohmann::json(c.identity).dump() << ",\"a\":" << detail::pair17(c.a)
          << ",\"b\":" << detail::pair17(c.b) << ",\"lhs\":" << detail::pair17(c.lhs)
          << ",\"rhs\":" << detail::pair17(c.rhs) << ",\"holds\":" << (c.holds ? "true" : "false")
          << "}\n";
  }
}

inline std::string report_text(const std::vector<LawReport>& reports) {
  std::ostringstream ss;
  write_report(ss, reports);
  return ss.str();
}

inline std::vector<LawReport> parse_report(const std::string& text) {
  std::vector<LawReport> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError("report line " + std::to_string(lineno) + ": " + e.what());
    }
    try {
      if (j.contains("case")) {
        if (out.empty() || out.back().law != j.at("law").get<std::string>())
          throw FormatError("report line " + std::to_string(lineno) + ": case without its law record");
        out.back().cases.push_back({j.at("case").get<std::string>(), detail::complex_from(j.at("a")),
                                    detail::complex_from(j.at("b")), detail::complex_from(j.at("lhs")),
                                    detail::complex_from(j.at("rhs")), j.at("holds").get<bool>()});
        continue;
      }
      LawReport r;
      r.law = j.at("law").get<std::string>();
      r.instances_run = j.at("instances_run").get<std::size_t>();
      r.max_violation = detail::real_from(j.at("max_violation"));
      r.tolerance = detail::real_from(j.at("tolerance"));
      r.pass = j.at("pass").get<bool>();
      r.worst_seed = j.at("worst_seed").get<std::uint64_t>();
      r.expected_failure = j.value("expected_failure", false);
      r.resampled = j.value("resampled", std::size_t{0});
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("report line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace qturing
