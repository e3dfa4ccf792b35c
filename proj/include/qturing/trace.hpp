#pragma once

// Feedback on isometries U (+) K -> U (+) L.
//
// Block layout (rows = outputs, cols = inputs):
//
//            U      K
//      U  [  A      C  ]
//      L  [  B      D  ]
//
// so A: U->U, C: K->U, B: U->L, D: K->L. The reference semantics is the
// Schur I-complement D + B (I - A)^+ C; the Kleene limit and the
// kernel-image trace are alternative routes to the same operator.
//
// I - A has norm at most 2 here, so its rank is decided against
// rank_tol * max(sigma_max, 1): an A-block equal to I up to roundoff has
// I - A of rank zero.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <deque>
#include <string>

#include "qturing/errors.hpp"
#include "qturing/linalg.hpp"

namespace qturing {

/// Isometry tolerance accepted on inputs to feedback and construction.
inline constexpr double kIsometryTol = 1e-9;
/// Tolerance for results of composite operations.
inline constexpr double kCompositeTol = 1e-8;

/// An operator U (+) K -> U (+) L with its split recorded.
class BlockMap {
 public:
  BlockMap(Operator op, std::size_t u, std::size_t k, std::size_t l)
      : op_(std::move(op)), u_(u), k_(k), l_(l) {
    if (static_cast<std::size_t>(op_.cols()) != u + k ||
        static_cast<std::size_t>(op_.rows()) != u + l)
      throw ShapeError("BlockMap: operator " + shape_of(op_) + " does not split as (" +
                       std::to_string(u) + "+" + std::to_string(l) + ")x(" + std::to_string(u) +
                       "+" + std::to_string(k) + ")");
  }

  const Operator& op() const noexcept { return op_; }
  std::size_t u() const noexcept { return u_; }
  std::size_t k() const noexcept { return k_; }
  std::size_t l() const noexcept { return l_; }

 private:
  Operator op_;
  std::size_t u_, k_, l_;
};

struct Blocks {
  Operator a;  ///< U -> U
  Operator b;  ///< U -> L
  Operator c;  ///< K -> U
  Operator d;  ///< K -> L
};

inline Blocks split_blocks(const BlockMap& m) {
  const auto u = static_cast<Index>(m.u());
  const auto k = static_cast<Index>(m.k());
  const auto l = static_cast<Index>(m.l());
  const Operator& op = m.op();
  return {op.block(0, 0, u, u), op.block(u, 0, l, u), op.block(0, u, u, k),
          op.block(u, u, l, k)};
}

namespace detail {

inline void require_isometry(const Operator& op, double tol, const char* who) {
  const double defect = isometry_defect(op);
  if (!(defect <= tol))
    throw ContractError(std::string(who) + ": input is not an isometry (defect " +
                            std::to_string(defect) + ")",
                        defect);
}

}  // namespace detail

/// Schur I-complement D + B (I - A)^+ C. The input must be an isometry within
/// `tol`; the result is then an isometry K -> L.
inline Operator schur_feedback(const BlockMap& m, double tol = kIsometryTol,
                               double rank_tol = kDefaultRankTol) {
  detail::require_isometry(m.op(), tol, "schur_feedback");
  const Blocks bl = split_blocks(m);
  if (m.u() == 0) return bl.d;
  const Operator ima = Operator::Identity(bl.a.rows(), bl.a.cols()) - bl.a;
  return bl.d + bl.b * mp_inverse(ima, rank_tol, 1.0) * bl.c;
}

enum class KleeneMode { partial_sums, cesaro };

inline const char* to_string(KleeneMode mode) {
  return mode == KleeneMode::partial_sums ? "partial-sums" : "cesaro";
}

struct ConvergenceReport {
  std::size_t steps{};
  double residual{};  ///< max-norm distance between the last two approximants
  bool converged{};
  KleeneMode mode{KleeneMode::partial_sums};
};

struct KleeneResult {
  Operator value;
  ConvergenceReport report;
};

/// Kleene iteration f_n = D + B (sum_{i<=n} A^i) C, or its Cesaro means.
///
/// Partial-sums mode stops once the last few increments are all <= tol and
/// the geometric tail they imply (ratio r estimated from the increments,
/// tail ~ delta r / (1 - r)) is also <= tol. Cesaro mode stops on the
/// increment alone. Non-convergence within max_n is reported, not thrown.
inline KleeneResult kleene_feedback(const BlockMap& m, std::size_t max_n, double tol,
                                    KleeneMode mode = KleeneMode::partial_sums) {
  detail::require_isometry(m.op(), std::max(tol, kIsometryTol), "kleene_feedback");
  const Blocks bl = split_blocks(m);
  KleeneResult out{bl.d, {0, 0.0, false, mode}};
  if (m.u() == 0 || max_norm(bl.b) == 0.0 || max_norm(bl.c) == 0.0) {
    out.report.converged = true;
    return out;
  }

  constexpr std::size_t kWindow = 4;
  std::deque<double> recent;
  Operator power_c = bl.c;  // A^n C
  Operator partial = bl.d + bl.b * power_c;
  Operator mean = partial;
  for (std::size_t n = 1; n <= max_n; ++n) {
    power_c = bl.a * power_c;
    const Operator increment = bl.b * power_c;
    partial += increment;
    double delta;
    if (mode == KleeneMode::partial_sums) {
      delta = max_norm(increment);
    } else {
      const Operator next = mean + (partial - mean) / static_cast<double>(n + 1);
      delta = max_distance(next, mean);
      mean = next;
    }
    recent.push_back(delta);
    if (recent.size() > kWindow) recent.pop_front();
    out.report.steps = n;
    out.report.residual = delta;

    if (recent.size() < std::min<std::size_t>(kWindow, n)) continue;
    if (*std::max_element(recent.begin(), recent.end()) > tol) continue;
    if (mode == KleeneMode::partial_sums) {
      double ratio = 0.0;
      for (std::size_t i = 1; i < recent.size(); ++i)
        if (recent[i - 1] > 0.0) ratio = std::max(ratio, recent[i] / recent[i - 1]);
      if (ratio >= 1.0) continue;
      if (delta * ratio / (1.0 - ratio) > tol) continue;
    }
    out.report.converged = true;
    break;
  }
  out.value = mode == KleeneMode::partial_sums ? partial : mean;
  return out;
}

struct KitFactors {
  Operator i;      ///< K -> U with C = (I - A) i
  Operator k;      ///< U -> L with B = k (I - A)
  Operator value;  ///< mean of D + k C and D + B i
  double residual{};
};

/// Kernel-image trace with its factors. Both factorizations use minimal-norm
/// solutions; residuals above 100 * tol raise FactorizationError.
inline KitFactors kernel_image_factors(const BlockMap& m, double tol = kIsometryTol,
                                       double rank_tol = kDefaultRankTol) {
  detail::require_isometry(m.op(), tol, "kernel_image_trace");
  const Blocks bl = split_blocks(m);
  const Operator ima = Operator::Identity(bl.a.rows(), bl.a.cols()) - bl.a;
  const Operator pinv = mp_inverse(ima, rank_tol, 1.0);
  KitFactors out;
  out.i = pinv * bl.c;
  out.k = bl.b * pinv;
  const double res_i = max_distance(ima * out.i, bl.c);
  const double res_k = max_distance(out.k * ima, bl.b);
  const Operator via_k = bl.d + out.k * bl.c;
  const Operator via_i = bl.d + bl.b * out.i;
  const double res_eq = max_distance(via_k, via_i);
  out.residual = std::max({res_i, res_k, res_eq});
  if (!(out.residual <= 100.0 * tol))
    throw FactorizationError("kernel_image_trace: B or C does not factor through I - A (residual " +
                                 std::to_string(out.residual) + ")",
                             out.residual);
  out.value = 0.5 * (via_k + via_i);
  return out;
}

inline Operator kernel_image_trace(const BlockMap& m, double tol = kIsometryTol) {
  return kernel_image_factors(m, tol).value;
}

/// c* = (1 - c)^+ on scalars: 0 at c = 1.
inline Complex scalar_star(Complex c) {
  const Complex d = 1.0 - c;
  return std::abs(d) > 1e-12 ? 1.0 / d : Complex(0.0);
}

}  // namespace qturing
