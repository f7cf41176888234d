#pragma once

// Brute-force maximization of |<z, y_1 (x) .. (x) y_d>| for tiny tensors.
//
// The first d-2 slots are sampled on a dense grid of unit vectors; for each
// grid point the remaining bilinear problem is solved exactly by an SVD. The
// best grid points are then polished by Riemannian gradient ascent. This path
// shares no code with the alternating engines in power.hpp and is used to
// confirm their results.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "symtensor/linalg.hpp"
#include "symtensor/power.hpp"
#include "symtensor/random.hpp"

namespace symtensor {

struct OracleResult {
  double value = 0.0;
  std::vector<Vector> vectors;  // maximizer, one unit vector per slot
  std::size_t grid_points = 0;
};

namespace detail {

struct TopSingular {
  double sigma = 0.0;
  Vector u, v;  // sigma = u^* M v
};

inline TopSingular top_singular(const Matrix& m, Field field) {
  TopSingular t;
  if (field == Field::real) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.real(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    t.sigma = svd.singularValues()(0);
    t.u = svd.matrixU().col(0).cast<Scalar>();
    t.v = svd.matrixV().col(0).cast<Scalar>();
  } else {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    t.sigma = svd.singularValues()(0);
    t.u = svd.matrixU().col(0);
    t.v = svd.matrixV().col(0);
  }
  return t;
}

// T[j, rest] contracted with w over the first slot.
inline Tensor contract_first(const Tensor& t, const Vector& w) {
  Shape rest(t.shape().begin() + 1, t.shape().end());
  const std::size_t block = t.size() / t.dim(0);
  Tensor out(Field::complex, rest);
  for (std::size_t j = 0; j < t.dim(0); ++j) {
    const Scalar wj = w[static_cast<Eigen::Index>(j)];
    if (wj == Scalar{}) continue;
    for (std::size_t r = 0; r < block; ++r) out[r] += wj * t[j * block + r];
  }
  return out;
}

inline Matrix as_matrix(const Tensor& t) {
  Matrix m(static_cast<Eigen::Index>(t.dim(0)), static_cast<Eigen::Index>(t.dim(1)));
  for (std::size_t a = 0; a < t.dim(0); ++a) {
    for (std::size_t b = 0; b < t.dim(1); ++b) {
      m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = t[a * t.dim(1) + b];
    }
  }
  return m;
}

// Grid of unit vectors in K^n. Real planes use a uniform half circle; other
// cases use seeded Gaussian directions plus the coordinate axes.
inline std::vector<Vector> sphere_grid(Field field, std::size_t n, std::size_t m, std::uint64_t seed) {
  std::vector<Vector> pts;
  if (n == 1) {
    pts.push_back(basis_vector(1, 0));
    return pts;
  }
  if (field == Field::real && n == 2) {
    for (std::size_t j = 0; j < m; ++j) {
      const double a = std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
      pts.push_back(real_vector({std::cos(a), std::sin(a)}));
    }
    return pts;
  }
  for (std::size_t k = 0; k < n && pts.size() < m; ++k) pts.push_back(basis_vector(n, k));
  Rng rng(seed);
  while (pts.size() < m) pts.push_back(random_unit_vector(rng, field, n));
  return pts;
}

inline Vector tangent(const Vector& g, const Vector& y) { return g - y * std::real(y.dot(g)); }

inline Vector normalized_in_field(Vector v, Field field) {
  if (field == Field::real) v = v.real().cast<Scalar>();
  return v / v.norm();
}

}  // namespace detail

/// Exact bilinear value sigma_max of z contracted with conj(y_k) on the
/// gridded slots, with the top singular pair.
inline detail::TopSingular oracle_objective(const Tensor& z, std::span<const Vector> gridded) {
  Tensor t = z;
  for (const auto& y : gridded) t = detail::contract_first(t, y.conjugate());
  return detail::top_singular(detail::as_matrix(t), z.field());
}

/// Global maximizer search for the injective norm. Intended for tensors with
/// at most a few hundred entries; `budget` bounds the number of grid points.
inline OracleResult injective_oracle(const Tensor& z, const SolverConfig& cfg, std::size_t budget = 20000) {
  const std::size_t d = z.order();
  OracleResult out;
  if (d == 1) {
    const Vector v = unfold(z, 0).col(0);
    out.value = v.norm();
    out.vectors = {out.value > 0 ? Vector(v / out.value) : basis_vector(z.dim(0), 0)};
    out.grid_points = 1;
    return out;
  }
  if (d == 2) {
    const auto top = detail::top_singular(unfold(z, 0), z.field());
    out.value = top.sigma;
    out.vectors = {top.u, top.v.conjugate()};
    out.grid_points = 1;
    return out;
  }

  const std::size_t gridded = d - 2;
  std::size_t free_slots = 0;
  for (std::size_t k = 0; k < gridded; ++k) free_slots += z.dim(k) > 1 ? 1 : 0;
  const auto per_slot = static_cast<std::size_t>(
      std::max(2.0, std::floor(std::pow(static_cast<double>(budget), 1.0 / std::max<std::size_t>(1, free_slots)))));
  std::vector<std::vector<Vector>> grids;
  for (std::size_t k = 0; k < gridded; ++k) {
    grids.push_back(detail::sphere_grid(z.field(), z.dim(k), per_slot, sub_seed(cfg.seed ^ 0x6f7261636c65ULL, k)));
  }

  // Depth-first walk over the product grid, reusing partial contractions.
  struct Candidate {
    double value;
    std::vector<std::size_t> idx;
  };
  constexpr std::size_t kKeep = 8;
  std::vector<Candidate> best;
  std::vector<std::size_t> idx(gridded, 0);
  std::vector<Tensor> partial{z};
  std::size_t visited = 0;
  auto walk = [&](auto&& self, std::size_t level) -> void {
    if (level == gridded) {
      ++visited;
      const auto top = detail::top_singular(detail::as_matrix(partial.back()), z.field());
      if (best.size() < kKeep || top.sigma > best.back().value) {
        best.push_back({top.sigma, idx});
        std::sort(best.begin(), best.end(), [](const auto& a, const auto& b) { return a.value > b.value; });
        if (best.size() > kKeep) best.pop_back();
      }
      return;
    }
    for (std::size_t j = 0; j < grids[level].size(); ++j) {
      idx[level] = j;
      partial.push_back(detail::contract_first(partial.back(), grids[level][j].conjugate()));
      self(self, level + 1);
      partial.pop_back();
    }
  };
  walk(walk, 0);
  out.grid_points = visited;

  // Riemannian gradient ascent on the gridded slots.
  for (const auto& cand : best) {
    std::vector<Vector> y;
    for (std::size_t k = 0; k < gridded; ++k) y.push_back(grids[k][cand.idx[k]]);
    auto top = oracle_objective(z, y);
    double step = 1.0 / std::max(1e-300, top.sigma);
    for (int it = 0; it < 5000; ++it) {
      std::vector<Vector> w(d);
      for (std::size_t k = 0; k < gridded; ++k) w[k] = y[k].conjugate();
      w[d - 2] = top.u.conjugate();
      w[d - 1] = top.v;
      std::vector<Vector> grad(gridded);
      double gnorm = 0.0;
      for (std::size_t k = 0; k < gridded; ++k) {
        grad[k] = detail::tangent(contract_all_but(z, w, k), y[k]);
        gnorm += grad[k].squaredNorm();
      }
      gnorm = std::sqrt(gnorm);
      if (gnorm <= 1e-14 * std::max(1.0, top.sigma)) break;
      bool accepted = false;
      for (int bt = 0; bt < 60; ++bt) {
        std::vector<Vector> trial(gridded);
        for (std::size_t k = 0; k < gridded; ++k) {
          trial[k] = detail::normalized_in_field(y[k] + step * grad[k], z.field());
        }
        const auto tt = oracle_objective(z, trial);
        if (tt.sigma >= top.sigma + 1e-4 * step * gnorm * gnorm) {
          y = std::move(trial);
          top = tt;
          step *= 2.0;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
    }
    if (top.sigma > out.value) {
      out.value = top.sigma;
      out.vectors = y;
      out.vectors.push_back(top.u);
      out.vectors.push_back(top.v.conjugate());
    }
  }
  return out;
}

/// Maximizes |P_z(y)| = |<z, y^(x)d>| on the unit sphere for symmetric z by a
/// dense grid on one sphere plus gradient polishing. By Banach's theorem this
/// equals the injective norm.
inline OracleResult injective_sym_oracle(const Tensor& z, const SolverConfig& cfg, std::size_t budget = 20000) {
  const std::size_t d = z.order();
  const std::size_t n = z.dim(0);
  auto value_and_grad = [&](const Vector& y, Vector* grad) {
    std::vector<Vector> w(d, y.conjugate());
    const Vector h = contract_all_but(z, w, 0);
    const Scalar mu = y.dot(h);
    if (grad) {
      const double a = std::abs(mu);
      *grad = a > 0 ? Vector(static_cast<double>(d) * (std::conj(mu) / a) * h) : Vector(Vector::Zero(h.size()));
    }
    return std::abs(mu);
  };
  const auto grid = detail::sphere_grid(z.field(), n, budget, sub_seed(cfg.seed ^ 0x73796d6fULL, 0));
  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t j = 0; j < grid.size(); ++j) scored.emplace_back(value_and_grad(grid[j], nullptr), j);
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

  OracleResult out;
  out.grid_points = grid.size();
  for (std::size_t c = 0; c < std::min<std::size_t>(8, scored.size()); ++c) {
    Vector y = grid[scored[c].second];
    Vector g;
    double f = value_and_grad(y, &g);
    double step = 1.0 / std::max(1e-300, f);
    for (int it = 0; it < 5000; ++it) {
      const Vector t = detail::tangent(g, y);
      const double tn = t.norm();
      if (tn <= 1e-14 * std::max(1.0, f)) break;
      bool accepted = false;
      for (int bt = 0; bt < 60; ++bt) {
        const Vector trial = detail::normalized_in_field(y + step * t, z.field());
        Vector gt;
        const double ft = value_and_grad(trial, &gt);
        if (ft >= f + 1e-4 * step * tn * tn) {
          y = trial;
          f = ft;
          g = gt;
          step *= 2.0;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
    }
    if (f > out.value) {
      out.value = f;
      out.vectors.assign(d, y);
    }
  }
  return out;
}

}  // namespace symtensor
