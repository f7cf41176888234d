#pragma once

// Seeded generators. Every restart of an iterative method draws from its own
// engine seeded by `sub_seed(seed, restart)`, so results do not depend on the
// order in which restarts are run.

#include <cstdint>
#include <random>

#include "symtensor/tensor.hpp"

namespace symtensor {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL + 1));
}

/// Standard Gaussian entries (real and imaginary parts for C).
inline Vector random_vector(Rng& rng, Field field, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = g(rng);
    const double im = field == Field::complex ? g(rng) : 0.0;
    v[i] = Scalar(re, im);
  }
  return v;
}

inline Vector random_unit_vector(Rng& rng, Field field, std::size_t n) {
  Vector v = random_vector(rng, field, n);
  while (v.norm() == 0.0) v = random_vector(rng, field, n);
  return v / v.norm();
}

inline Tensor random_tensor(Rng& rng, Field field, const Shape& shape) {
  Tensor t(field, shape);
  std::normal_distribution<double> g(0.0, 1.0);
  for (auto& v : t.data()) {
    const double re = g(rng);
    const double im = field == Field::complex ? g(rng) : 0.0;
    v = Scalar(re, im);
  }
  return t;
}

/// sigma of a Gaussian tensor, rescaled to unit Hilbert-Schmidt norm.
inline Tensor random_symmetric_tensor(Rng& rng, Field field, std::size_t n, std::size_t d) {
  Tensor t = symmetrize(random_tensor(rng, field, cubical_shape(n, d)));
  return (1.0 / hs_norm(t)) * t;
}

/// Orthonormal pair (v, w) in K^n, n >= 2.
inline std::pair<Vector, Vector> random_orthonormal_pair(Rng& rng, Field field, std::size_t n) {
  Vector v = random_unit_vector(rng, field, n);
  Vector w = random_vector(rng, field, n);
  w -= v * v.dot(w);
  while (w.norm() < 1e-8) {
    w = random_vector(rng, field, n);
    w -= v * v.dot(w);
  }
  return {v, w / w.norm()};
}

}  // namespace symtensor
