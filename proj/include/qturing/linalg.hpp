#pragma once

// Dense complex operator kernel.
//
// Orientation: an operator f: X -> Y acts on column vectors, so its matrix has
// dim(Y) rows and dim(X) columns. Composition is written left to right
// (compose_then(f, g) applies f first), which is the matrix product g * f.
// Tensor bases are lexicographic with the left factor outermost; direct-sum
// bases concatenate, left summand first.

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "qturing/errors.hpp"

namespace qturing {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using Index = Eigen::Index;

/// Relative singular-value cutoff used for every rank decision.
inline constexpr double kDefaultRankTol = 1e-10;

/// Dimensions of the summands of a direct sum H1 (+) ... (+) Hn.
struct SpaceDims {
  std::vector<std::size_t> parts;

  SpaceDims() = default;
  SpaceDims(std::initializer_list<std::size_t> p) : parts(p) {}
  explicit SpaceDims(std::vector<std::size_t> p) : parts(std::move(p)) {}

  std::size_t total() const {
    return std::accumulate(parts.begin(), parts.end(), std::size_t{0});
  }
  std::size_t offset(std::size_t j) const {
    return std::accumulate(parts.begin(), parts.begin() + static_cast<std::ptrdiff_t>(j),
                           std::size_t{0});
  }
};

inline std::string shape_of(const Operator& f) {
  std::ostringstream os;
  os << f.rows() << "x" << f.cols();
  return os.str();
}

inline Operator identity(std::size_t n) {
  return Operator::Identity(static_cast<Index>(n), static_cast<Index>(n));
}

inline Operator zeros(std::size_t rows, std::size_t cols) {
  return Operator::Zero(static_cast<Index>(rows), static_cast<Index>(cols));
}

inline bool all_finite(const Operator& f) {
  for (Index j = 0; j < f.cols(); ++j)
    for (Index i = 0; i < f.rows(); ++i)
      if (!std::isfinite(f(i, j).real()) || !std::isfinite(f(i, j).imag())) return false;
  return true;
}

/// Largest entry modulus; 0 for empty operators.
inline double max_norm(const Operator& f) {
  if (f.size() == 0) return 0.0;
  return f.cwiseAbs().maxCoeff();
}

/// max-norm of f - g; +inf when shapes differ.
inline double max_distance(const Operator& f, const Operator& g) {
  if (f.rows() != g.rows() || f.cols() != g.cols())
    return std::numeric_limits<double>::infinity();
  return max_norm(f - g);
}

/// Applies f first, then g.
inline Operator compose_then(const Operator& f, const Operator& g) {
  if (f.rows() != g.cols())
    throw ShapeError("compose_then: cannot follow " + shape_of(f) + " with " + shape_of(g));
  return g * f;
}

inline Operator adjoint(const Operator& f) { return f.adjoint(); }

/// Kronecker product, f's indices outermost.
inline Operator kron(const Operator& f, const Operator& g) {
  Operator out(f.rows() * g.rows(), f.cols() * g.cols());
  for (Index j = 0; j < f.cols(); ++j)
    for (Index i = 0; i < f.rows(); ++i)
      out.block(i * g.rows(), j * g.cols(), g.rows(), g.cols()) = f(i, j) * g;
  return out;
}

/// Block-diagonal direct sum, f's block first.
inline Operator dsum(const Operator& f, const Operator& g) {
  Operator out = Operator::Zero(f.rows() + g.rows(), f.cols() + g.cols());
  out.topLeftCorner(f.rows(), f.cols()) = f;
  out.bottomRightCorner(g.rows(), g.cols()) = g;
  return out;
}

/// Permutation of tensor factors: input dims[0] (x) ... (x) dims[n-1],
/// output dims[order[0]] (x) ... (x) dims[order[n-1]].
inline Operator tensor_permutation(std::span<const std::size_t> dims,
                                   std::span<const std::size_t> order) {
  const std::size_t n = dims.size();
  if (order.size() != n) throw ShapeError("tensor_permutation: order length mismatch");
  std::vector<bool> seen(n, false);
  for (std::size_t p : order) {
    if (p >= n || seen[p]) throw ShapeError("tensor_permutation: order is not a permutation");
    seen[p] = true;
  }
  std::size_t total = 1;
  for (std::size_t d : dims) total *= d;
  // Strides of each input factor inside the output index.
  std::vector<std::size_t> out_stride(n, 1);
  std::size_t s = 1;
  for (std::size_t p = n; p-- > 0;) {
    out_stride[order[p]] = s;
    s *= dims[order[p]];
  }
  Operator out = zeros(total, total);
  std::vector<std::size_t> digit(n, 0);
  for (std::size_t in = 0; in < total; ++in) {
    std::size_t rem = in, target = 0;
    for (std::size_t f = n; f-- > 0;) {
      digit[f] = rem % dims[f];
      rem /= dims[f];
      target += digit[f] * out_stride[f];
    }
    out(static_cast<Index>(target), static_cast<Index>(in)) = 1.0;
  }
  return out;
}

/// Symmetry H (x) K -> K (x) H of the multiplicative tensor.
inline Operator tensor_swap(std::size_t m, std::size_t n) {
  const std::size_t dims[] = {m, n};
  const std::size_t order[] = {1, 0};
  return tensor_permutation(dims, order);
}

/// Permutation of direct summands: input parts[0] (+) ... (+) parts[n-1],
/// output parts[order[0]] (+) ... (+) parts[order[n-1]].
inline Operator summand_permutation(const SpaceDims& dims, std::span<const std::size_t> order) {
  const std::size_t n = dims.parts.size();
  if (order.size() != n) throw ShapeError("summand_permutation: order length mismatch");
  std::vector<bool> seen(n, false);
  for (std::size_t p : order) {
    if (p >= n || seen[p]) throw ShapeError("summand_permutation: order is not a permutation");
    seen[p] = true;
  }
  const std::size_t total = dims.total();
  Operator out = zeros(total, total);
  std::size_t row = 0;
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t src = dims.offset(order[p]);
    for (std::size_t x = 0; x < dims.parts[order[p]]; ++x, ++row)
      out(static_cast<Index>(row), static_cast<Index>(src + x)) = 1.0;
  }
  return out;
}

/// Additive symmetry K (+) L -> L (+) K.
inline Operator sum_swap(std::size_t m, std::size_t n) {
  const std::size_t order[] = {1, 0};
  return summand_permutation(SpaceDims{m, n}, order);
}

/// Distributivity H (x) (K1 (+) ... (+) Kn) -> (H (x) K1) (+) ... (+) (H (x) Kn).
inline Operator distribute(std::size_t h, const SpaceDims& dims) {
  const std::size_t total = dims.total();
  Operator out = zeros(h * total, h * total);
  std::size_t block_start = 0;
  for (std::size_t j = 0; j < dims.parts.size(); ++j) {
    const std::size_t kj = dims.parts[j];
    const std::size_t off = dims.offset(j);
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t x = 0; x < kj; ++x)
        out(static_cast<Index>(block_start + i * kj + x), static_cast<Index>(i * total + off + x)) =
            1.0;
    block_start += h * kj;
  }
  return out;
}

namespace detail {

template <typename Svd>
Operator pinv_from_svd(const Svd& svd, Index rows, Index cols, double tol, double floor) {
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return Operator::Zero(cols, rows);
  const double cutoff = tol * std::max(sv(0), floor);
  Eigen::VectorXd inv(sv.size());
  for (Index i = 0; i < sv.size(); ++i) inv(i) = sv(i) > cutoff ? 1.0 / sv(i) : 0.0;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

}  // namespace detail

/// Moore-Penrose inverse. Singular values at or below tol * sigma_max are
/// treated as zero. A positive `floor` makes the cutoff tol * max(sigma_max,
/// floor), so a matrix that is zero up to roundoff inverts to zero.
inline Operator mp_inverse(const Operator& f, double tol = kDefaultRankTol, double floor = 0.0) {
  if (!(tol > 0.0)) throw std::invalid_argument("mp_inverse: tol must be positive");
  if (f.size() == 0) return Operator::Zero(f.cols(), f.rows());
  Eigen::JacobiSVD<Operator> svd(f, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return detail::pinv_from_svd(svd, f.rows(), f.cols(), tol, floor);
}

namespace detail {

/// Row of the single nonzero in each column, -1 for an empty column; empty
/// result if some column has two or more nonzeros.
inline std::vector<Index> monomial_rows(const Operator& f) {
  std::vector<Index> rows(static_cast<std::size_t>(f.cols()), -1);
  for (Index j = 0; j < f.cols(); ++j)
    for (Index i = 0; i < f.rows(); ++i) {
      if (f(i, j) == Complex(0.0)) continue;
      if (rows[static_cast<std::size_t>(j)] >= 0) return {};
      rows[static_cast<std::size_t>(j)] = i;
    }
  return rows;
}

/// Exact isometry defect of a matrix with at most one nonzero per column.
inline double monomial_isometry_defect(const Operator& f, const std::vector<Index>& rows) {
  double defect = 0.0;
  std::vector<Index> owner(static_cast<std::size_t>(f.rows()), -1);
  for (Index j = 0; j < f.cols(); ++j) {
    const Index r = rows[static_cast<std::size_t>(j)];
    if (r < 0) {
      defect = std::max(defect, 1.0);
      continue;
    }
    const double m = std::abs(f(r, j));
    defect = std::max(defect, std::abs(m * m - 1.0));
    const Index prev = owner[static_cast<std::size_t>(r)];
    if (prev >= 0) defect = std::max(defect, m * std::abs(f(r, prev)));
    owner[static_cast<std::size_t>(r)] = j;
  }
  return defect;
}

}  // namespace detail

/// max |f^dagger f - I|; 0 means orthonormal columns. Matrices with at most
/// one nonzero per column (permutations with phases) are checked in O(n^2).
inline double isometry_defect(const Operator& f) {
  if (f.cols() == 0) return 0.0;
  if (f.cols() > 32) {
    const auto rows = detail::monomial_rows(f);
    if (!rows.empty()) return detail::monomial_isometry_defect(f, rows);
  }
  Operator g = f.adjoint() * f;
  g.diagonal().array() -= 1.0;
  return max_norm(g);
}

/// Defect of f as an isometric isomorphism; +inf if f is not square.
inline double unitarity_defect(const Operator& f) {
  if (f.rows() != f.cols()) return std::numeric_limits<double>::infinity();
  return std::max(isometry_defect(f), isometry_defect(f.adjoint()));
}

struct KernelOnTop {
  Operator similarity;       ///< unitary s; s (I - a) s^dagger has zero leading columns
  std::size_t kernel_dim{};  ///< dim ker(I - a)
};

/// Unitary similarity that moves ker(I - a) to the leading coordinates, so
/// the first kernel_dim columns of s (I - a) s^dagger vanish. For A-blocks of
/// isometries the leading rows vanish as well. Singular values of I - a at or
/// below tol * max(sigma_max, 1) count as zero.
inline KernelOnTop kernel_on_top(const Operator& a, double tol = kDefaultRankTol) {
  if (a.rows() != a.cols()) throw ShapeError("kernel_on_top: expected square, got " + shape_of(a));
  const Index n = a.rows();
  if (n == 0) return {Operator(0, 0), 0};
  const Operator m = Operator::Identity(n, n) - a;
  Eigen::JacobiSVD<Operator> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Index rank = 0;
  const double cutoff = tol * std::max(sv(0), 1.0);
  while (rank < n && sv(rank) > cutoff) ++rank;
  const Index r = n - rank;
  const Operator& v = svd.matrixV();
  Operator basis(n, n);
  basis.leftCols(r) = v.rightCols(r);
  basis.rightCols(rank) = v.leftCols(rank);
  return {basis.adjoint(), static_cast<std::size_t>(r)};
}

/// sum_{i=0}^{n} a^i.
inline Operator neumann_partial(const Operator& a, std::size_t n) {
  if (a.rows() != a.cols())
    throw ShapeError("neumann_partial: expected square, got " + shape_of(a));
  Operator power = Operator::Identity(a.rows(), a.cols());
  Operator sum = power;
  for (std::size_t i = 1; i <= n; ++i) {
    power = power * a;
    sum += power;
  }
  return sum;
}

inline double spectral_radius(const Operator& a) {
  if (a.rows() != a.cols())
    throw ShapeError("spectral_radius: expected square, got " + shape_of(a));
  if (a.rows() == 0) return 0.0;
  Eigen::ComplexEigenSolver<Operator> es(a, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Haar-distributed isometry: orthonormal-column factor of a complex Gaussian
/// matrix, with the R diagonal phase-normalized.
inline Operator random_isometry(std::size_t rows, std::size_t cols, std::mt19937_64& gen) {
  if (rows < cols)
    throw ShapeError("random_isometry: no isometry from dimension " + std::to_string(cols) +
                     " into " + std::to_string(rows));
  const Index r = static_cast<Index>(rows), c = static_cast<Index>(cols);
  if (c == 0) return Operator(r, 0);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Operator g(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) g(i, j) = Complex(normal(gen), normal(gen));
  Eigen::HouseholderQR<Operator> qr(g);
  Operator q = qr.householderQ() * Operator::Identity(r, c);
  for (Index j = 0; j < c; ++j) {
    const Complex d = qr.matrixQR()(j, j);
    const double m = std::abs(d);
    if (m > 0.0) q.col(j) *= d / m;
  }
  return q;
}

inline Operator random_isometry(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  return random_isometry(rows, cols, gen);
}

inline Operator random_unitary(std::size_t n, std::mt19937_64& gen) {
  return random_isometry(n, n, gen);
}

/// Complex Gaussian matrix, unnormalized.
inline Operator random_gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Operator g(static_cast<Index>(rows), static_cast<Index>(cols));
  for (Index j = 0; j < g.cols(); ++j)
    for (Index i = 0; i < g.rows(); ++i) g(i, j) = Complex(normal(gen), normal(gen));
  return g;
}

}  // namespace qturing
