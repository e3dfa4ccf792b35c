#pragma once

// The Int construction restricted to self-dual objects (K, K) over unitary
// automata. A morphism (K, K) -> (L, L) is carried by a unitary automaton
// K (+) L -> L (+) K; the Int tensor of objects is the direct sum of
// interfaces, and composition feeds back both copies of the middle object.
//
// Conventions fixed here:
//  * composition routes the middle copies to the leading feedback position,
//    the copy leaving f first, the copy leaving g second;
//  * the unit and counit of rank x are both carried by the symmetry c_{x,x};
//  * the dagger of f: X (+) Y -> Y (+) X is c_{Y,X} ; f ; c_{Y,X}.

#include <array>
#include <cstddef>
#include <string>

#include "qturing/dqta.hpp"
#include "qturing/errors.hpp"
#include "qturing/linalg.hpp"

namespace qturing {

/// Undirected quantum Turing automaton of rank N: unitary tau on H (x) N.
class Qta {
 public:
  static Qta make(std::size_t h, std::size_t n, Operator tau, double tol = kIsometryTol) {
    if (h == 0) throw ShapeError("Qta: state space must be nonzero");
    if (tau.rows() != tau.cols())
      throw ShapeError("Qta: transition must be square, got " + shape_of(tau));
    if (static_cast<std::size_t>(tau.rows()) != h * n)
      throw ShapeError("Qta: transition " + shape_of(tau) + " does not match h=" +
                       std::to_string(h) + ", rank=" + std::to_string(n));
    if (!all_finite(tau)) throw ShapeError("Qta: transition has non-finite entries");
    const double defect = unitarity_defect(tau);
    if (!(defect <= tol))
      throw ContractError("Qta: transition is not unitary (defect " + std::to_string(defect) + ")",
                          defect);
    return Qta(h, n, std::move(tau));
  }

  std::size_t h() const noexcept { return h_; }
  std::size_t rank() const noexcept { return n_; }
  const Operator& transition() const noexcept { return tau_; }

 private:
  Qta(std::size_t h, std::size_t n, Operator tau) : h_(h), n_(n), tau_(std::move(tau)) {}
  std::size_t h_, n_;
  Operator tau_;
};

/// Morphism (src, src) -> (dst, dst) carried by a unitary automaton
/// src (+) dst -> dst (+) src.
class Int0Morphism {
 public:
  static Int0Morphism make(std::size_t src, std::size_t dst, UnitaryDqta carrier) {
    if (carrier.k() != src + dst || carrier.l() != dst + src)
      throw ShapeError("Int0Morphism: carrier interfaces " + std::to_string(carrier.k()) + "->" +
                       std::to_string(carrier.l()) + " do not match " + std::to_string(src) +
                       "+" + std::to_string(dst));
    return Int0Morphism(src, dst, std::move(carrier));
  }

  std::size_t src() const noexcept { return src_; }
  std::size_t dst() const noexcept { return dst_; }
  const UnitaryDqta& carrier() const noexcept { return carrier_; }

 private:
  Int0Morphism(std::size_t src, std::size_t dst, UnitaryDqta carrier)
      : src_(src), dst_(dst), carrier_(std::move(carrier)) {}
  std::size_t src_, dst_;
  UnitaryDqta carrier_;
};

namespace detail {

template <std::size_t N>
Dqta route(const std::array<std::size_t, N>& dims, const std::array<std::size_t, N>& order) {
  return permutation_automaton(SpaceDims(std::vector<std::size_t>(dims.begin(), dims.end())),
                               std::span<const std::size_t>(order));
}

inline Int0Morphism wrap(std::size_t src, std::size_t dst, Dqta carrier) {
  return Int0Morphism::make(src, dst, UnitaryDqta::make(std::move(carrier), kCompositeTol));
}

}  // namespace detail

inline Int0Morphism int_identity(std::size_t k) {
  return detail::wrap(k, k, identity_automaton(2 * k));
}

/// Symmetry (A (+) B, .) -> (B (+) A, .), carried by c_{A,B} (+) c_{B,A}.
inline Int0Morphism int_symmetry(std::size_t a, std::size_t b) {
  return detail::wrap(a + b, b + a, stateless_automaton(dsum(sum_swap(a, b), sum_swap(b, a))));
}

/// Sequential composite: f first, then g.
inline Int0Morphism int_compose(const Int0Morphism& f, const Int0Morphism& g) {
  if (f.dst() != g.src())
    throw ShapeError("int_compose: middle objects differ (" + std::to_string(f.dst()) + " vs " +
                     std::to_string(g.src()) + ")");
  const std::size_t k = f.src(), l = f.dst(), m = g.dst();
  // f ⊞ g takes [K, L_f, L_g, M] to [L_f, K, M, L_g].
  const Dqta both = turing_tensor(f.carrier().dqta(), g.carrier().dqta());
  const Dqta pre = detail::route<4>({l, l, k, m}, {2, 1, 0, 3});
  const Dqta post = detail::route<4>({l, k, m, l}, {0, 3, 2, 1});
  return detail::wrap(k, m, feedback_dqta(cascade(cascade(pre, both), post), 2 * l));
}

/// (1_X (+) c_{X',Y} (+) 1_{Y'}) ; (f ⊞ g) ; (1_Y (+) c_{X,Y'} (+) 1_{X'}).
inline Int0Morphism int_tensor(const Int0Morphism& f, const Int0Morphism& g) {
  const std::size_t x = f.src(), y = f.dst(), x2 = g.src(), y2 = g.dst();
  const Dqta both = turing_tensor(f.carrier().dqta(), g.carrier().dqta());
  const Dqta pre = detail::route<4>({x, x2, y, y2}, {0, 2, 1, 3});
  const Dqta post = detail::route<4>({y, x, y2, x2}, {0, 2, 1, 3});
  return detail::wrap(x + x2, y + y2, cascade(cascade(pre, both), post));
}

/// c_{Y,X} ; f ; c_{Y,X}, a morphism (Y, Y) -> (X, X).
inline Int0Morphism int_dagger(const Int0Morphism& f) {
  const std::size_t x = f.src(), y = f.dst();
  const Dqta swap = symmetry_automaton(y, x);
  return detail::wrap(y, x, cascade(cascade(swap, f.carrier().dqta()), swap));
}

struct Int0Units {
  Int0Morphism unit;    ///< d: rank 0 -> rank 2x
  Int0Morphism counit;  ///< e: rank 2x -> rank 0
};

inline Int0Units int_units(std::size_t x) {
  return {detail::wrap(0, 2 * x, symmetry_automaton(x, x)),
          detail::wrap(2 * x, 0, symmetry_automaton(x, x))};
}

/// (d_U (x) 1_A) ; (1_U (x) f) ; (e_U (x) 1_B) for f: (U (+) A) -> (U (+) B).
inline Int0Morphism canonical_trace(const Int0Morphism& f, std::size_t u) {
  if (u > f.src() || u > f.dst())
    throw ShapeError("canonical_trace: u=" + std::to_string(u) + " exceeds rank " +
                     std::to_string(f.src()) + "->" + std::to_string(f.dst()));
  if (u == 0) return f;
  const std::size_t a = f.src() - u, b = f.dst() - u;
  const Int0Units units = int_units(u);
  const Int0Morphism open = int_tensor(units.unit, int_identity(a));
  const Int0Morphism body = int_tensor(int_identity(u), f);
  const Int0Morphism close = int_tensor(units.counit, int_identity(b));
  return int_compose(int_compose(open, body), close);
}

/// Distance between two morphisms up to the state witness sigma (see
/// iso_violation); +inf if their objects differ.
inline double int_violation(const Int0Morphism& f, const Int0Morphism& g, const Operator& sigma) {
  if (f.src() != g.src() || f.dst() != g.dst()) return std::numeric_limits<double>::infinity();
  return iso_violation(f.carrier().dqta(), g.carrier().dqta(), sigma);
}

inline double int_distance(const Int0Morphism& f, const Int0Morphism& g) {
  if (f.carrier().h() != g.carrier().h()) return std::numeric_limits<double>::infinity();
  return int_violation(f, g, identity(f.carrier().h()));
}

/// Name of f: the carrier followed by I_H (x) c_{L,K}, a unitary on H (x) (K (+) L).
inline Qta name_of(const Int0Morphism& f) {
  const UnitaryDqta& c = f.carrier();
  Operator tau = kron(identity(c.h()), sum_swap(f.dst(), f.src())) * c.transition();
  return Qta::make(c.h(), f.src() + f.dst(), std::move(tau), kCompositeTol);
}

/// Inverse of name_of for a chosen split rank = src + dst.
inline Int0Morphism unname(const Qta& q, std::size_t src, std::size_t dst) {
  if (src + dst != q.rank())
    throw ShapeError("unname: " + std::to_string(src) + "+" + std::to_string(dst) +
                     " does not split rank " + std::to_string(q.rank()));
  Operator tau = kron(identity(q.h()), sum_swap(src, dst)) * q.transition();
  return detail::wrap(src, dst, Dqta::make(q.h(), src + dst, dst + src, std::move(tau),
                                           kCompositeTol));
}

/// F(t) = t ⊞ t^dagger as a morphism (K, K) -> (L, L).
inline Int0Morphism functor_image(const UnitaryDqta& t) {
  return detail::wrap(t.k(), t.l(), turing_tensor(t.dqta(), dagger_dqta(t).dqta()));
}

/// The QTA of rank K (+) L naming F(t).
inline Qta bidirectionalize(const UnitaryDqta& t) { return name_of(functor_image(t)); }

}  // namespace qturing
