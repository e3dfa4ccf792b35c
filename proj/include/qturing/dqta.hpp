#pragma once

// Directed quantum Turing automata (H, K, L, tau) with tau: H (x) K -> H (x) L
// an isometry, and the traced monoidal structure built from cascade product,
// Turing tensor and feedback.

#include <cstddef>
#include <string>
#include <vector>

#include "qturing/errors.hpp"
#include "qturing/linalg.hpp"
#include "qturing/trace.hpp"

namespace qturing {

class Dqta {
 public:
  /// Validating constructor: shape (h*l) x (h*k) and isometry defect <= tol.
  static Dqta make(std::size_t h, std::size_t k, std::size_t l, Operator tau,
                   double tol = kIsometryTol) {
    if (h == 0) throw ShapeError("Dqta: state space must be nonzero");
    if (static_cast<std::size_t>(tau.rows()) != h * l ||
        static_cast<std::size_t>(tau.cols()) != h * k)
      throw ShapeError("Dqta: transition " + shape_of(tau) + " does not match h=" +
                       std::to_string(h) + ", k=" + std::to_string(k) +
                       ", l=" + std::to_string(l));
    if (!all_finite(tau)) throw ShapeError("Dqta: transition has non-finite entries");
    const double defect = isometry_defect(tau);
    if (!(defect <= tol))
      throw ContractError("Dqta: transition is not an isometry (defect " +
                              std::to_string(defect) + ")",
                          defect);
    return Dqta(h, k, l, std::move(tau));
  }

  std::size_t h() const noexcept { return h_; }
  std::size_t k() const noexcept { return k_; }
  std::size_t l() const noexcept { return l_; }
  const Operator& transition() const noexcept { return tau_; }

 private:
  Dqta(std::size_t h, std::size_t k, std::size_t l, Operator tau)
      : h_(h), k_(k), l_(l), tau_(std::move(tau)) {}

  std::size_t h_, k_, l_;
  Operator tau_;
};

inline Dqta make_dqta(std::size_t h, std::size_t k, std::size_t l, Operator tau,
                      double tol = kIsometryTol) {
  return Dqta::make(h, k, l, std::move(tau), tol);
}

namespace detail {

/// Index map of distribute(h, dims): input index -> output index.
inline std::vector<Index> distribute_map(std::size_t h, const SpaceDims& dims) {
  const std::size_t total = dims.total();
  std::vector<Index> map(h * total);
  std::size_t block_start = 0;
  for (std::size_t j = 0; j < dims.parts.size(); ++j) {
    const std::size_t kj = dims.parts[j], off = dims.offset(j);
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t x = 0; x < kj; ++x)
        map[i * total + off + x] = static_cast<Index>(block_start + i * kj + x);
    block_start += h * kj;
  }
  return map;
}

/// (pi_{H1,H2} (x) I) ; (I_{H2} (x) tau) ; (pi_{H2,H1} (x) I): tau acting on the
/// H1 factor of H1 (x) H2 (x) X with H2 as a spectator.
inline Operator act_on_first(const Operator& tau, std::size_t h1, std::size_t h2) {
  const Index x = tau.cols() / static_cast<Index>(h1);
  const Index y = tau.rows() / static_cast<Index>(h1);
  const Index H1 = static_cast<Index>(h1), H2 = static_cast<Index>(h2);
  Operator out = Operator::Zero(H1 * H2 * y, H1 * H2 * x);
  for (Index a = 0; a < H1; ++a)
    for (Index in = 0; in < x; ++in)
      for (Index a2 = 0; a2 < H1; ++a2)
        for (Index o = 0; o < y; ++o) {
          const Complex v = tau(a2 * y + o, a * x + in);
          if (v == Complex(0.0)) continue;
          for (Index b = 0; b < H2; ++b) out((a2 * H2 + b) * y + o, (a * H2 + b) * x + in) = v;
        }
  return out;
}

/// I_{H1} (x) tau.
inline Operator act_on_last(std::size_t h1, const Operator& tau) {
  const Index H1 = static_cast<Index>(h1);
  Operator out = Operator::Zero(H1 * tau.rows(), H1 * tau.cols());
  for (Index a = 0; a < H1; ++a)
    out.block(a * tau.rows(), a * tau.cols(), tau.rows(), tau.cols()) = tau;
  return out;
}

}  // namespace detail

/// Cascade product t1 ; t2 over state space H1 (x) H2.
inline Dqta cascade(const Dqta& t1, const Dqta& t2) {
  if (t1.l() != t2.k())
    throw ShapeError("cascade: output interface " + std::to_string(t1.l()) +
                     " does not match input interface " + std::to_string(t2.k()));
  Operator tau = detail::act_on_last(t1.h(), t2.transition()) *
                 detail::act_on_first(t1.transition(), t1.h(), t2.h());
  return Dqta::make(t1.h() * t2.h(), t1.k(), t2.l(), std::move(tau), kCompositeTol);
}

/// Turing tensor: state H1 (x) H2, interfaces K1 (+) K2 -> L1 (+) L2.
inline Dqta turing_tensor(const Dqta& t1, const Dqta& t2) {
  const std::size_t h = t1.h() * t2.h();
  const Operator s1 = detail::act_on_first(t1.transition(), t1.h(), t2.h());
  const Operator s2 = detail::act_on_last(t1.h(), t2.transition());
  const auto in_map = detail::distribute_map(h, SpaceDims{t1.k(), t2.k()});
  const auto out_map = detail::distribute_map(h, SpaceDims{t1.l(), t2.l()});
  const Operator sum = dsum(s1, s2);
  Operator tau(sum.rows(), sum.cols());
  for (Index c = 0; c < tau.cols(); ++c)
    for (Index r = 0; r < tau.rows(); ++r)
      tau(r, c) = sum(out_map[static_cast<std::size_t>(r)], in_map[static_cast<std::size_t>(c)]);
  return Dqta::make(h, t1.k() + t2.k(), t1.l() + t2.l(), std::move(tau), kCompositeTol);
}

/// Reorders tau: H (x) (U (+) K') -> H (x) (U (+) L') into the block map
/// (H (x) U) (+) (H (x) K') -> (H (x) U) (+) (H (x) L').
inline BlockMap distributed_blocks(const Dqta& t, std::size_t u) {
  if (u > t.k() || u > t.l())
    throw ShapeError("feedback: u=" + std::to_string(u) + " exceeds interface k=" +
                     std::to_string(t.k()) + ", l=" + std::to_string(t.l()));
  const std::size_t h = t.h();
  const auto in_map = detail::distribute_map(h, SpaceDims{u, t.k() - u});
  const auto out_map = detail::distribute_map(h, SpaceDims{u, t.l() - u});
  const Operator& tau = t.transition();
  Operator op(tau.rows(), tau.cols());
  for (Index c = 0; c < tau.cols(); ++c)
    for (Index r = 0; r < tau.rows(); ++r)
      op(out_map[static_cast<std::size_t>(r)], in_map[static_cast<std::size_t>(c)]) = tau(r, c);
  return BlockMap(std::move(op), h * u, h * (t.k() - u), h * (t.l() - u));
}

/// Feedback over the leading summand U of both interfaces.
inline Dqta feedback_dqta(const Dqta& t, std::size_t u) {
  if (u == 0) return t;
  Operator tau = schur_feedback(distributed_blocks(t, u), kCompositeTol);
  return Dqta::make(t.h(), t.k() - u, t.l() - u, std::move(tau), kCompositeTol);
}

inline Dqta identity_automaton(std::size_t k) { return Dqta::make(1, k, k, identity(k)); }

inline Dqta symmetry_automaton(std::size_t k, std::size_t l) {
  return Dqta::make(1, k + l, l + k, sum_swap(k, l));
}

/// Single-state automaton routing summand order[p] of the input to position p.
inline Dqta permutation_automaton(const SpaceDims& dims, std::span<const std::size_t> order) {
  return Dqta::make(1, dims.total(), dims.total(), summand_permutation(dims, order));
}

/// Single-state automaton with transition u (an isometry K -> L).
inline Dqta stateless_automaton(const Operator& u) {
  return Dqta::make(1, static_cast<std::size_t>(u.cols()), static_cast<std::size_t>(u.rows()), u);
}

struct UnitAutomata {
  Dqta identity;
  Dqta symmetry;
};

inline UnitAutomata unit_automata(std::size_t k, std::size_t l) {
  return {identity_automaton(k), symmetry_automaton(k, l)};
}

/// Distance from t2 to (sigma^dagger (x) I_K) ; t1 ; (sigma (x) I_L), or the
/// unitarity defect of sigma if that is larger.
inline double iso_violation(const Dqta& t1, const Dqta& t2, const Operator& sigma) {
  if (t1.k() != t2.k() || t1.l() != t2.l())
    throw ShapeError("iso_witness_check: interfaces differ");
  if (static_cast<std::size_t>(sigma.cols()) != t1.h() ||
      static_cast<std::size_t>(sigma.rows()) != t2.h())
    throw ShapeError("iso_witness_check: witness " + shape_of(sigma) + " does not map H1 (" +
                     std::to_string(t1.h()) + ") to H2 (" + std::to_string(t2.h()) + ")");
  const double defect = unitarity_defect(sigma);
  const Operator expected = kron(sigma, identity(t1.l())) * t1.transition() *
                            kron(sigma.adjoint(), identity(t1.k()));
  return std::max(defect, max_distance(expected, t2.transition()));
}

inline bool iso_witness_check(const Dqta& t1, const Dqta& t2, const Operator& sigma,
                              double tol = kCompositeTol) {
  return iso_violation(t1, t2, sigma) <= tol;
}

/// Automaton whose transition is unitary (the subcategory DQT_0).
class UnitaryDqta {
 public:
  static UnitaryDqta make(Dqta t, double tol = kIsometryTol) {
    const double defect = unitarity_defect(t.transition());
    if (!(defect <= tol))
      throw ContractError("UnitaryDqta: transition is not unitary (defect " +
                              std::to_string(defect) + ")",
                          defect);
    return UnitaryDqta(std::move(t));
  }

  const Dqta& dqta() const noexcept { return t_; }
  std::size_t h() const noexcept { return t_.h(); }
  std::size_t k() const noexcept { return t_.k(); }
  std::size_t l() const noexcept { return t_.l(); }
  const Operator& transition() const noexcept { return t_.transition(); }

 private:
  explicit UnitaryDqta(Dqta t) : t_(std::move(t)) {}
  Dqta t_;
};

/// Reverse automaton L -> K with transition tau^dagger.
inline UnitaryDqta dagger_dqta(const UnitaryDqta& t) {
  return UnitaryDqta::make(
      Dqta::make(t.h(), t.l(), t.k(), t.transition().adjoint(), kCompositeTol), kCompositeTol);
}

}  // namespace qturing
