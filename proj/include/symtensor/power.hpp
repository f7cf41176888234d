#pragma once

// Local maximizers of |<z, x_1 (x) .. (x) x_d>| over unit vectors.

#include <cstdint>
#include <vector>

#include "symtensor/random.hpp"
#include "symtensor/tensor.hpp"

namespace symtensor {

/// Settings shared by every iterative engine.
struct SolverConfig {
  int restarts = 32;
  int max_iter = 10000;
  double tol = 1e-12;  // stationarity: largest per-sweep change of any factor
  std::uint64_t seed = 0;
  std::size_t oracle_cutoff = 81;  // brute-force oracle runs when prod n_i <= cutoff
};

struct StationaryPoint {
  std::vector<Vector> vectors;  // unit vectors, one per slot
  Scalar lambda{};              // <z, x_1 (x) .. (x) x_d>
  int iterations = 0;
  bool converged = false;
};

namespace detail {

inline std::vector<Vector> conjugated(std::span<const Vector> v) {
  std::vector<Vector> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.conjugate());
  return out;
}

inline Scalar lambda_at(const Tensor& z, std::span<const Vector> x) {
  const auto cx = conjugated(x);
  const Vector c = contract_all_but(z, cx, 0);
  return x[0].dot(c);  // sum_j conj(x_0[j]) c[j]
}

}  // namespace detail

/// Alternating maximization (higher-order power method): each slot in turn is
/// replaced by the unit maximizer with all other slots fixed. The objective
/// |lambda| never decreases. Stops once no factor moves by more than cfg.tol
/// in a sweep, or after cfg.max_iter sweeps.
inline StationaryPoint alternating_rank1(const Tensor& z, std::vector<Vector> x, const SolverConfig& cfg) {
  const std::size_t d = z.order();
  StationaryPoint out;
  std::vector<Vector> cx = detail::conjugated(x);
  for (int it = 1; it <= cfg.max_iter; ++it) {
    double moved = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      Vector c = contract_all_but(z, cx, k);
      const double nc = c.norm();
      if (nc == 0.0) continue;  // z vanishes on this fiber; keep the slot
      c /= nc;
      moved = std::max(moved, (c - x[k]).norm());
      x[k] = c;
      cx[k] = c.conjugate();
    }
    out.iterations = it;
    if (moved <= cfg.tol) {
      out.converged = true;
      break;
    }
  }
  out.lambda = detail::lambda_at(z, x);
  out.vectors = std::move(x);
  return out;
}

/// Random unit starting point, one vector per slot.
inline std::vector<Vector> random_start(Rng& rng, const Tensor& z) {
  std::vector<Vector> x;
  for (std::size_t k = 0; k < z.order(); ++k) x.push_back(random_unit_vector(rng, z.field(), z.dim(k)));
  return x;
}

/// All restarts of the alternating method; restart r is seeded with
/// sub_seed(cfg.seed, r). Restart 0 starts from the leading left singular
/// vectors of the unfoldings (HOSVD start).
inline std::vector<StationaryPoint> alternating_rank1_restarts(const Tensor& z, const SolverConfig& cfg) {
  std::vector<StationaryPoint> out;
  const int restarts = std::max(1, cfg.restarts);
  for (int r = 0; r < restarts; ++r) {
    std::vector<Vector> x0;
    if (r == 0) {
      for (std::size_t k = 0; k < z.order(); ++k) {
        Vector u;
        if (z.field() == Field::real) {
          Eigen::JacobiSVD<Eigen::MatrixXd> svd(unfold(z, k).real(), Eigen::ComputeThinU);
          u = svd.matrixU().col(0).cast<Scalar>();
        } else {
          Eigen::JacobiSVD<Matrix> svd(unfold(z, k), Eigen::ComputeThinU);
          u = svd.matrixU().col(0);
        }
        if (u.norm() == 0.0) u = basis_vector(z.dim(k), 0);
        x0.push_back(u / u.norm());
      }
    } else {
      Rng rng(sub_seed(cfg.seed, static_cast<std::uint64_t>(r)));
      x0 = random_start(rng, z);
    }
    out.push_back(alternating_rank1(z, std::move(x0), cfg));
  }
  return out;
}

/// Index of the restart with the largest |lambda|; ties go to the lower index.
inline std::size_t best_index(const std::vector<StationaryPoint>& pts) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (std::abs(pts[i].lambda) > std::abs(pts[best].lambda)) best = i;
  }
  return best;
}

struct SymmetricPoint {
  Vector y;          // unit vector
  Scalar value{};    // <z, y (x) .. (x) y>
  int iterations = 0;
  bool converged = false;
};

/// Shifted symmetric power method maximizing |<z, y^(x)d>| on the unit sphere
/// for symmetric z. The shift grows whenever a step fails to increase the
/// objective, so the iteration is monotone.
inline SymmetricPoint symmetric_power(const Tensor& z, Vector y, const SolverConfig& cfg) {
  const std::size_t d = z.order();
  auto gradient_dir = [&](const Vector& v) {
    std::vector<Vector> w(d, v.conjugate());
    return contract_all_but(z, w, 0);
  };
  auto value_of = [&](const Vector& v, const Vector& h) { return v.dot(h); };

  SymmetricPoint out;
  y /= y.norm();
  Vector h = gradient_dir(y);
  Scalar mu = value_of(y, h);
  double shift = 0.0;
  const double shift_cap = 1e6 * std::max(1.0, hs_norm(z));
  for (int it = 1; it <= cfg.max_iter; ++it) {
    out.iterations = it;
    const Scalar phase = std::abs(mu) > 0.0 ? mu / std::abs(mu) : Scalar{1.0};
    Vector cand = h + shift * phase * y;
    if (cand.norm() == 0.0) cand = h + (shift + 1.0) * y;
    cand /= cand.norm();
    if (z.field() == Field::real) cand = cand.real().cast<Scalar>();
    const Vector hc = gradient_dir(cand);
    const Scalar mc = value_of(cand, hc);
    if (std::abs(mc) + 1e-15 * std::max(1.0, std::abs(mu)) < std::abs(mu)) {
      shift = shift == 0.0 ? std::abs(mu) * static_cast<double>(d - 1) + 1e-3 : 2.0 * shift;
      if (shift > shift_cap) break;
      continue;
    }
    // Align the phase of the update with the current iterate before measuring movement.
    const Scalar ph = cand.dot(y);
    const Vector aligned = std::abs(ph) > 0.0 ? Vector(cand * (ph / std::abs(ph))) : cand;
    const double moved = (aligned - y).norm();
    y = aligned;
    h = gradient_dir(y);
    mu = value_of(y, h);
    if (moved <= cfg.tol) {
      out.converged = true;
      break;
    }
  }
  out.y = y;
  out.value = mu;
  return out;
}

}  // namespace symtensor
