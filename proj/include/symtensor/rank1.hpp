#pragma once

// Best rank-1 approximations: elementary (x_1 (x) .. (x) x_d) and
// decomposable symmetric (x_1 v .. v x_d), with certificates.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "symtensor/linalg.hpp"
#include "symtensor/norms.hpp"
#include "symtensor/power.hpp"

namespace symtensor {

struct Rank1Certificate {
  Scalar lambda{};
  std::vector<Vector> vectors;
  double residual_hs = 0.0;
  double eps_lower = 0.0;  // best injective value known (power method or oracle)
  double eps_gap = 0.0;    // | |lambda| - eps_lower |
  double lambda_gap = 0.0; // |lambda - <z, x_1 (x) .. (x) x_d>|
  bool oracle_verified = false;
  int iterations = 0;
  std::uint64_t seed = 0;
};

/// Best rank-1 approximation lambda x_1 (x) .. (x) x_d of z in the HS norm.
inline Rank1Certificate best_rank1(const Tensor& z, const SolverConfig& cfg) {
  const auto pts = alternating_rank1_restarts(z, cfg);
  const auto& p = pts[best_index(pts)];
  Rank1Certificate c;
  c.seed = cfg.seed;
  for (const auto& q : pts) c.iterations += q.iterations;
  c.vectors = p.vectors;
  const Tensor x = elementary(z.field(), c.vectors);
  c.lambda = inner_product(z, x);
  c.lambda_gap = std::abs(c.lambda - p.lambda);
  c.residual_hs = hs_norm(z - c.lambda * x);
  c.eps_lower = std::abs(c.lambda);
  if (z.size() <= cfg.oracle_cutoff) {
    const auto orc = injective_oracle(z, cfg);
    c.oracle_verified = std::abs(orc.value - c.eps_lower) <= kOracleAgreement;
    c.eps_lower = std::max(c.eps_lower, orc.value);
  }
  c.eps_gap = std::abs(std::abs(c.lambda) - c.eps_lower);
  return c;
}

enum class Rank1Structure { collinear, coplanar, violation };

inline const char* to_string(Rank1Structure s) {
  switch (s) {
    case Rank1Structure::collinear: return "collinear";
    case Rank1Structure::coplanar: return "coplanar";
    case Rank1Structure::violation: return "violation";
  }
  return "?";
}

/// Classifies span{x_1..x_d} of a near-optimal certificate for symmetric z.
/// Over R the span has dimension at most 2; over C with d > 2 it is a line.
inline Rank1Structure rank1_structure_check(const Tensor& z, const Rank1Certificate& cert, double tol,
                                            double span_tol = 1e-6) {
  if (!z.is_cubical() || !is_symmetric(z, 1e-10 * std::max(1.0, max_abs(z)))) {
    throw PreconditionError("rank1_structure_check: tensor is not symmetric");
  }
  if (cert.eps_gap > tol) {
    throw PreconditionError("rank1_structure_check: certificate is not near-optimal (eps_gap " +
                            std::to_string(cert.eps_gap) + ")");
  }
  const std::size_t dim = span_dimension(cert.vectors, span_tol);
  if (dim == 1) return Rank1Structure::collinear;
  const bool plane_allowed = z.field() == Field::real || z.order() == 2;
  if (dim == 2 && plane_allowed) return Rank1Structure::coplanar;
  return Rank1Structure::violation;
}

struct SymRank1Certificate {
  Scalar lambda{};
  std::vector<Vector> vectors;
  double ratio = 0.0;  // |L_z(x_1..x_d)| / HS(x_1 v .. v x_d)
  double residual_hs = 0.0;
  int iterations = 0;
  std::uint64_t seed = 0;
};

namespace detail {

struct SymRatio {
  double value = 0.0;
  Scalar inner{};  // <z, x_1 v .. v x_d>
  double hs = 0.0; // HS(x_1 v .. v x_d)
  std::vector<Vector> grad;
};

inline SymRatio sym_ratio(const Tensor& z, const std::vector<Vector>& u, bool with_grad) {
  const std::size_t d = z.order();
  SymRatio r;
  const Tensor s = sym_decomposable(z.field(), u);
  r.hs = hs_norm(s);
  r.inner = inner_product(z, s);
  const double l = std::abs(r.inner);
  r.value = r.hs > 0.0 ? l / r.hs : 0.0;
  if (!with_grad || r.hs == 0.0) return r;
  const auto cu = conjugated(u);
  const Scalar phase = l > 0.0 ? std::conj(r.inner) / l : Scalar{0.0};
  for (std::size_t k = 0; k < d; ++k) {
    const Vector gl = phase * contract_all_but(z, cu, k);  // gradient of |L_z(u)|
    const Vector gh = contract_all_but(s, cu, k) / r.hs;   // gradient of HS(sigma(u))
    Vector g = (gl * r.hs - l * gh) / (r.hs * r.hs);
    if (z.field() == Field::real) g = g.real().cast<Scalar>();
    g -= u[k] * std::real(u[k].dot(g));
    r.grad.push_back(std::move(g));
  }
  return r;
}

inline SymRatio ascend_sym_ratio(const Tensor& z, std::vector<Vector>& u, const SolverConfig& cfg, int* iterations) {
  auto cur = sym_ratio(z, u, true);
  double step = 1.0;
  for (int it = 0; it < cfg.max_iter; ++it) {
    double gn = 0.0;
    for (const auto& g : cur.grad) gn += g.squaredNorm();
    if (iterations) ++*iterations;
    if (std::sqrt(gn) <= 1e-13 * std::max(1.0, cur.value)) break;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      std::vector<Vector> trial(u.size());
      for (std::size_t k = 0; k < u.size(); ++k) {
        trial[k] = normalized_in_field(u[k] + step * cur.grad[k], z.field());
      }
      auto t = sym_ratio(z, trial, true);
      if (t.value >= cur.value + 1e-4 * step * gn) {
        u = std::move(trial);
        cur = std::move(t);
        step *= 2.0;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // Value differences are below roundoff here; continue while the gradient shrinks.
      double s = 1.0 / std::max(1e-300, cur.value);
      for (int bt = 0; bt < 40 && !accepted; ++bt, s *= 0.5) {
        std::vector<Vector> trial(u.size());
        for (std::size_t k = 0; k < u.size(); ++k) {
          trial[k] = normalized_in_field(u[k] + s * cur.grad[k], z.field());
        }
        auto t = sym_ratio(z, trial, true);
        double tn = 0.0;
        for (const auto& g : t.grad) tn += g.squaredNorm();
        if (tn < 0.81 * gn && t.value >= cur.value - 1e-15 * std::max(1.0, cur.value)) {
          u = std::move(trial);
          cur = std::move(t);
          accepted = true;
        }
      }
      if (!accepted) break;
    }
  }
  return cur;
}

// Levenberg-Marquardt on ||z - lambda u_1 v .. v u_d||^2 in real coordinates.
inline void polish_sym_rank1(const Tensor& z, std::vector<Vector>& u, Scalar& lambda, int max_iter) {
  const std::size_t d = z.order();
  const auto n = static_cast<Eigen::Index>(z.dim(0));
  const bool cplx = z.field() == Field::complex;
  const Eigen::Index per = cplx ? 2 : 1;
  const Eigen::Index m = per * (static_cast<Eigen::Index>(d) * n + 1);
  const auto big_n = static_cast<Eigen::Index>(z.size());
  auto residual = [&](const std::vector<Vector>& v, Scalar l) {
    const Tensor r = z - l * sym_decomposable(z.field(), v);
    Eigen::VectorXd out(per * big_n);
    for (Eigen::Index i = 0; i < big_n; ++i) {
      out(per * i) = r[static_cast<std::size_t>(i)].real();
      if (cplx) out(per * i + 1) = r[static_cast<std::size_t>(i)].imag();
    }
    return out;
  };
  auto cost = [&](const std::vector<Vector>& v, Scalar l) { return residual(v, l).squaredNorm(); };
  double mu = 1e-3;
  double f = cost(u, lambda);
  for (int it = 0; it < max_iter && f > 0.0; ++it) {
    // Fix the scaling gauge: unit factors, scale carried by lambda.
    for (auto& v : u) {
      const double nv = v.norm();
      if (nv > 0.0) {
        v /= nv;
        lambda *= nv;
      }
    }
    Eigen::MatrixXd jac(per * big_n, m);
    auto put = [&](Eigen::Index col, const Tensor& t, Scalar factor) {
      for (Eigen::Index i = 0; i < big_n; ++i) {
        const Scalar v = -factor * t[static_cast<std::size_t>(i)];
        jac(per * i, col) = v.real();
        if (cplx) jac(per * i + 1, col) = v.imag();
      }
    };
    Eigen::Index col = 0;
    for (std::size_t k = 0; k < d; ++k) {
      for (Eigen::Index j = 0; j < n; ++j) {
        auto v = u;
        v[k] = basis_vector(static_cast<std::size_t>(n), static_cast<std::size_t>(j));
        const Tensor t = sym_decomposable(z.field(), v);
        put(col++, t, lambda);
        if (cplx) put(col++, t, Scalar{0.0, 1.0} * lambda);
      }
    }
    const Tensor base = sym_decomposable(z.field(), u);
    put(col++, base, 1.0);
    if (cplx) put(col++, base, Scalar{0.0, 1.0});
    const Eigen::VectorXd r = residual(u, lambda);
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd g = jac.transpose() * r;
    bool improved = false;
    for (int bt = 0; bt < 30; ++bt) {
      Eigen::MatrixXd a = jtj;
      a.diagonal().array() += mu * (1.0 + jtj.diagonal().array());
      const Eigen::VectorXd step = a.ldlt().solve(-g);
      auto v = u;
      Eigen::Index c = 0;
      for (std::size_t k = 0; k < d; ++k) {
        for (Eigen::Index j = 0; j < n; ++j) {
          v[k][j] += cplx ? Scalar(step(c), step(c + 1)) : Scalar(step(c), 0.0);
          c += per;
        }
      }
      const Scalar l = lambda + (cplx ? Scalar(step(c), step(c + 1)) : Scalar(step(c), 0.0));
      const double ft = cost(v, l);
      if (ft < f) {
        u = std::move(v);
        lambda = l;
        const double rel = (f - ft) / f;
        f = ft;
        mu = std::max(1e-10, mu * 0.3);
        improved = rel > 1e-14;
        break;
      }
      mu *= 10.0;
    }
    if (!improved) break;
  }
  for (auto& v : u) {
    const double nv = v.norm();
    if (nv > 0.0) v /= nv;
  }
}

}  // namespace detail

/// Best decomposable symmetric rank-1 approximation lambda x_1 v .. v x_d of
/// symmetric z: maximizes |<z, x_1 v .. v x_d>| / HS(x_1 v .. v x_d) over unit
/// vectors by projected gradient ascent with restarts.
inline SymRank1Certificate best_sym_rank1(const Tensor& z, const SolverConfig& cfg) {
  if (!z.is_cubical() || !is_symmetric(z, 1e-10 * std::max(1.0, max_abs(z)))) {
    throw PreconditionError("best_sym_rank1: tensor is not symmetric");
  }
  const std::size_t d = z.order();
  const std::size_t n = z.dim(0);
  SymRank1Certificate out;
  out.seed = cfg.seed;

  std::vector<std::vector<Vector>> starts;
  {
    SolverConfig c = cfg;
    c.oracle_cutoff = 0;
    const auto sym = injective_sym(z, c);
    starts.push_back(sym.vectors);
    const auto pts = alternating_rank1_restarts(z, c);
    starts.push_back(pts[best_index(pts)].vectors);
  }
  for (int r = 2; r < std::max(2, cfg.restarts / 4); ++r) {
    Rng rng(sub_seed(cfg.seed ^ 0x73723121ULL, static_cast<std::uint64_t>(r)));
    std::vector<Vector> u;
    for (std::size_t k = 0; k < d; ++k) u.push_back(random_unit_vector(rng, z.field(), n));
    starts.push_back(std::move(u));
  }

  // Candidates are ranked by residual: near the optimum the ratio differs
  // from HS(z) only at rounding level.
  auto residual_of = [&](const std::vector<Vector>& v, const detail::SymRatio& r) {
    const Scalar l = r.hs > 0.0 ? r.inner / (r.hs * r.hs) : Scalar{};
    return hs_norm(z - l * sym_decomposable(z.field(), v));
  };
  double best = -1.0;
  SolverConfig ascent = cfg;
  ascent.max_iter = std::min(cfg.max_iter, 500);
  for (auto& u : starts) {
    detail::ascend_sym_ratio(z, u, ascent, &out.iterations);
    auto r = detail::sym_ratio(z, u, false);
    double res = residual_of(u, r);
    Scalar l = r.hs > 0.0 ? r.inner / (r.hs * r.hs) : Scalar{};
    auto v = u;
    detail::polish_sym_rank1(z, v, l, 200);
    const auto polished = detail::sym_ratio(z, v, false);
    const double polished_res = residual_of(v, polished);
    if (polished_res <= res) {
      r = polished;
      res = polished_res;
      u = std::move(v);
    }
    if (best < 0.0 || res < best) {
      best = res;
      out.vectors = u;
      out.ratio = r.value;
      out.lambda = r.hs > 0.0 ? r.inner / (r.hs * r.hs) : Scalar{};
    }
  }
  out.residual_hs = hs_norm(z - out.lambda * sym_decomposable(z.field(), out.vectors));
  return out;
}

struct NonUniquenessFamily {
  Tensor tensor;  // L_a
  Vector w;       // unit vector orthogonal to the span of the base point
  Matrix projector;
  Scalar base_value{};  // L_a(x_1..x_d)
};

/// L_a(y_1..y_d) = L(P y_1, .., P y_d) + a <y_1,w> .. <y_d,w>, with P the
/// orthogonal projection onto span{x_1..x_d} and w a unit vector orthogonal
/// to it. `base` is the symmetric tensor of a norm-one form L attaining its
/// norm at the x_i.
inline NonUniquenessFamily non_uniqueness_family(const Tensor& base, std::span<const Vector> x, double a,
                                                 double tol = 1e-8) {
  if (!base.is_cubical() || !is_symmetric(base, tol)) {
    throw PreconditionError("non_uniqueness_family: base form is not symmetric");
  }
  const std::size_t n = base.dim(0);
  const std::size_t d = base.order();
  if (n < 3) throw PreconditionError("non_uniqueness_family: ambient dimension must be at least 3");
  if (std::abs(a) > 1.0) throw PreconditionError("non_uniqueness_family: |a| must not exceed 1");
  if (x.size() != d) throw ShapeError("non_uniqueness_family: need one vector per slot");
  const std::size_t dim = span_dimension(x, tol);
  if (dim > 2) throw PreconditionError("non_uniqueness_family: vectors must span at most a plane");
  if (dim >= n) throw PreconditionError("non_uniqueness_family: no unit vector orthogonal to the span");

  const Matrix q = orthonormal_basis(x, tol);
  Matrix p = q * q.adjoint();
  // First column of the complement, from a full QR of [Q | I].
  Matrix aug(static_cast<Eigen::Index>(n), q.cols() + static_cast<Eigen::Index>(n));
  aug << q, Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  if (base.field() == Field::real) {
    aug = aug.real().cast<Scalar>();
    p = p.real().cast<Scalar>();
  }
  Eigen::HouseholderQR<Matrix> qr(aug);
  const Matrix full = qr.householderQ() * Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Vector w = full.col(q.cols());
  w -= q * (q.adjoint() * w);
  if (base.field() == Field::real) w = w.real().cast<Scalar>();
  w /= w.norm();

  Tensor t = base;
  for (std::size_t k = 0; k < d; ++k) t = apply_along(t, k, p);
  std::vector<Vector> ws(d, w);
  t += Scalar{a} * elementary(base.field(), ws);
  t = cleaned(t);

  NonUniquenessFamily out{t, w, p, multilinear_eval(t, x)};
  const Scalar expected = multilinear_eval(base, x);
  if (std::abs(out.base_value - expected) > tol * std::max(1.0, std::abs(expected))) {
    throw ContractViolation("non_uniqueness_family.base_value",
                            "L_a differs from L at the base point by " + std::to_string(std::abs(out.base_value - expected)));
  }
  return out;
}

}  // namespace symtensor
