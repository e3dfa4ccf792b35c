#pragma once

// Seeded instance generators for the law checks. Every instance owns its
// generator, derived from (instance seed, family), so any single instance can
// be rebuilt from its seed alone.

#include <cstddef>
#include <cstdint>
#include <random>

#include "qturing/dqta.hpp"
#include "qturing/intcat.hpp"
#include "qturing/linalg.hpp"
#include "qturing/trace.hpp"

namespace qturing {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

enum class Family : std::uint64_t {
  isometry = 1,
  kernel = 2,
  forced_kernel = 3,
  kleene = 4,
  dqt = 5,
  int0 = 6,
};

inline std::mt19937_64 instance_generator(std::uint64_t seed, Family family) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(family))));
}

inline std::size_t uniform_dim(std::mt19937_64& gen, std::size_t lo, std::size_t hi) {
  if (hi <= lo) return lo;
  return std::uniform_int_distribution<std::size_t>(lo, hi)(gen);
}

/// Random isometric block map. Instance 0 has u = 0, instance 1 has k = l = 0.
inline BlockMap random_blockmap(std::mt19937_64& gen, std::size_t max_dim, std::size_t index) {
  const std::size_t u = index == 0 ? 0 : uniform_dim(gen, 1, max_dim);
  const std::size_t k = index == 1 ? 0 : uniform_dim(gen, 1, max_dim);
  const std::size_t l = index == 1 ? 0 : k + uniform_dim(gen, 0, 2);
  return BlockMap(random_isometry(u + l, u + k, gen), u, k, l);
}

/// Unitary block map on U (+) K.
inline BlockMap random_unitary_blockmap(std::mt19937_64& gen, std::size_t max_dim,
                                        std::size_t index) {
  const std::size_t u = index == 0 ? 0 : uniform_dim(gen, 1, max_dim);
  const std::size_t k = index == 1 ? 0 : uniform_dim(gen, 1, max_dim);
  return BlockMap(random_unitary(u + k, gen), u, k, k);
}

struct KernelInstance {
  BlockMap map;
  std::size_t kernel_dim;  ///< guaranteed lower bound on dim ker(I - A)
};

/// (W (+) I_L)(I_n (+) tau')(W^dagger (+) I_K): A has eigenvalue 1 with
/// multiplicity at least n, hidden by the random rotation W.
inline KernelInstance random_kernel_blockmap(std::mt19937_64& gen, std::size_t max_dim) {
  const std::size_t half = std::max<std::size_t>(1, max_dim / 2);
  const std::size_t n = uniform_dim(gen, 1, half);
  const std::size_t rest = uniform_dim(gen, 0, half);
  const std::size_t k = uniform_dim(gen, 0, half);
  const std::size_t l = k + uniform_dim(gen, 0, 2);
  const std::size_t u = n + rest;
  const Operator w = random_unitary(u, gen);
  const Operator inner = dsum(identity(n), random_isometry(rest + l, rest + k, gen));
  Operator op = dsum(w, identity(l)) * inner * dsum(w.adjoint(), identity(k));
  return {BlockMap(std::move(op), u, k, l), n};
}

struct ForcedKernelInstance {
  BlockMap map;       ///< on U (+) V (+) K with V = N (+) V0
  std::size_t outer;  ///< dim U
  std::size_t inner;  ///< dim V
  std::size_t forced; ///< dim N: feedback over U leaves I_N inside V's A-block
};

/// An isometry whose feedback over U has an A-block on V containing an
/// identity summand. Built from a unitary M on U (+) N: with Z its feedback
/// over U, M (I_U (+) Z^dagger) feeds back to I_N.
inline ForcedKernelInstance random_forced_kernel(std::mt19937_64& gen, std::size_t max_dim) {
  const std::size_t half = std::max<std::size_t>(1, max_dim / 2);
  const std::size_t u = uniform_dim(gen, 1, half);
  const std::size_t n = uniform_dim(gen, 1, half);
  const std::size_t v0 = uniform_dim(gen, 0, 2);
  const std::size_t k = uniform_dim(gen, 0, half);
  const std::size_t l = k + uniform_dim(gen, 0, 2);
  const Operator m = random_unitary(u + n, gen);
  const Operator z = schur_feedback(BlockMap(m, u, n, n));
  const Operator m2 = m * dsum(identity(u), z.adjoint());
  const Operator rest = random_isometry(v0 + l, v0 + k, gen);
  const Operator w = random_unitary(n + v0, gen);
  Operator op = dsum(dsum(identity(u), w), identity(l)) * dsum(m2, rest) *
                dsum(dsum(identity(u), w.adjoint()), identity(k));
  return {BlockMap(std::move(op), u + n + v0, k, l), u, n + v0, n};
}

/// Unitary near the identity: Cayley transform of a small Hermitian matrix.
inline Operator near_identity_unitary(std::size_t n, double eps, std::mt19937_64& gen) {
  const Operator g = random_gaussian(n, n, gen);
  const Operator herm = 0.5 * (g + g.adjoint());
  const Operator id = identity(n);
  const Complex i(0.0, 1.0);
  return (id - i * eps * herm) * (id + i * eps * herm).inverse();
}

/// Block map for Kleene checks; odd instances have A close to a unitary, so
/// the series converges slowly.
inline BlockMap random_kleene_blockmap(std::mt19937_64& gen, std::size_t max_dim,
                                       std::size_t index) {
  const std::size_t u = uniform_dim(gen, 1, max_dim);
  const std::size_t k = uniform_dim(gen, 1, max_dim);
  const std::size_t l = k + uniform_dim(gen, 0, 2);
  if (index % 2 == 0) return BlockMap(random_isometry(u + l, u + k, gen), u, k, l);
  const Operator g = near_identity_unitary(u + k, 0.2, gen);
  return BlockMap(dsum(identity(u), random_isometry(l, k, gen)) * g, u, k, l);
}

inline Dqta random_dqta(std::mt19937_64& gen, std::size_t h, std::size_t k, std::size_t l) {
  return Dqta::make(h, k, l, random_isometry(h * l, h * k, gen));
}

inline UnitaryDqta random_unitary_dqta(std::mt19937_64& gen, std::size_t h, std::size_t k) {
  return UnitaryDqta::make(Dqta::make(h, k, k, random_unitary(h * k, gen)));
}

inline Int0Morphism random_int0(std::mt19937_64& gen, std::size_t h, std::size_t src,
                                std::size_t dst) {
  return Int0Morphism::make(src, dst, random_unitary_dqta(gen, h, src + dst));
}

}  // namespace qturing
