#pragma once

// Decomposable symmetric rank: approximation by symmetrization, binary forms
// on C^2, and the border-rank family in (x)^3 K^6.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "symtensor/binary_form.hpp"
#include "symtensor/decomposition.hpp"
#include "symtensor/linalg.hpp"
#include "symtensor/norms.hpp"
#include "symtensor/random.hpp"
#include "symtensor/recovery.hpp"

namespace symtensor {

// ------------------------------------------------------- approximation

enum class NormKind { hs, injective, projective };

inline const char* to_string(NormKind k) {
  switch (k) {
    case NormKind::hs: return "hs";
    case NormKind::injective: return "eps";
    case NormKind::projective: return "pi";
  }
  return "?";
}

inline NormKind parse_norm_kind(const std::string& s) {
  if (s == "hs") return NormKind::hs;
  if (s == "eps" || s == "injective") return NormKind::injective;
  if (s == "pi" || s == "projective") return NormKind::projective;
  throw PreconditionError("unknown norm \"" + s + "\" (expected hs, eps or pi)");
}

struct ApproximationResult {
  Tensor x{Field::real, {1}};  // sigma(y)
  double before = 0.0;         // alpha(z - y), or its certified upper bound
  double after = 0.0;          // alpha(z - x), or its certified upper bound
  double improvement = 0.0;    // before - after
  NormKind norm = NormKind::hs;
  bool exact = true;           // false when before/after are certified bounds
};

/// x = sigma(y) approximates symmetric z at least as well as y does.
/// HS values are exact. For eps both residuals go through the same bound
/// (mean of unfolding spectral norms). For pi the bound on z - y is a
/// certified decomposition D, and the bound on z - x is the smaller of the
/// symmetrized D (same value) and a fresh search.
inline ApproximationResult symmetrize_approximation(const Tensor& z, const Tensor& y, NormKind norm,
                                                    const SolverConfig& cfg = {}, std::size_t r_max = 8) {
  if (!z.is_cubical() || !is_symmetric(z, 1e-10 * std::max(1.0, max_abs(z)))) {
    throw PreconditionError("symmetrize_approximation: z is not symmetric");
  }
  z.require_compatible(y);
  ApproximationResult out;
  out.norm = norm;
  out.x = symmetrize(y);
  const Tensor ry = z - y;
  const Tensor rx = z - out.x;
  switch (norm) {
    case NormKind::hs:
      out.before = hs_norm(ry);
      out.after = hs_norm(rx);
      break;
    case NormKind::injective:
      out.exact = false;
      out.before = flattening_mean_upper(ry);
      out.after = flattening_mean_upper(rx);
      break;
    case NormKind::projective: {
      out.exact = false;
      const auto up = projective_upper(ry, r_max, cfg);
      out.before = up.value;
      const auto& dec = std::get<CpDecomposition>(up.witness);
      // sigma(z - y) = z - sigma(y); sigma keeps sum |c| prod ||v|| termwise.
      const double transported = expand_permutations(symmetrize_terms(dec)).nuclear_sum();
      const auto fresh = projective_upper(rx, r_max, cfg);
      out.after = std::min(transported, fresh.value);
      break;
    }
  }
  out.improvement = out.before - out.after;
  return out;
}

struct StrictImprovement {
  double pi_upper_sigma = 0.0;  // certified upper bound for pi(sigma(w))
  double pi_lower_w = 0.0;      // certified lower bound for pi(w)
  bool demonstrated = false;    // upper < lower
};

/// Compares certified bounds for pi(sigma(w)) and pi(w), w complex, d > 2.
inline StrictImprovement strict_improvement_complex(const Tensor& w, const SolverConfig& cfg = {},
                                                    std::size_t r_max = 8) {
  if (w.field() != Field::complex) throw FieldError("strict_improvement_complex: w must be complex");
  if (w.order() <= 2) throw PreconditionError("strict_improvement_complex: requires d > 2");
  if (!w.is_cubical()) throw ShapeError("strict_improvement_complex: w must be cubical");
  if (is_symmetric(w, 1e-12 * std::max(1.0, max_abs(w)))) {
    throw PreconditionError("strict_improvement_complex: w is already symmetric");
  }
  StrictImprovement out;
  out.pi_upper_sigma = projective_upper(symmetrize(w), r_max, cfg).value;
  out.pi_lower_w = projective_lower(w, cfg).value;
  out.demonstrated = out.pi_upper_sigma < out.pi_lower_w;
  return out;
}

struct InjectiveNonstrict {
  Tensor w{Field::real, {1}};
  Tensor sigma_w{Field::real, {1}};
  double eps_w = 0.0;
  double eps_sigma_w = 0.0;
};

/// w = e_1 (x) e_1 + t (e_2 (x) e_3 - e_3 (x) e_2) in (x)^2 K^3, for which
/// eps(w) = eps(sigma(w)) = 1 while |t| <= 1.
inline InjectiveNonstrict injective_nonstrict_example(double t, Field field = Field::real,
                                                      const SolverConfig& cfg = {}) {
  const Vector e1 = basis_vector(3, 0), e2 = basis_vector(3, 1), e3 = basis_vector(3, 2);
  InjectiveNonstrict out;
  out.w = elementary(field, {e1, e1}) + Scalar{t} * (elementary(field, {e2, e3}) - elementary(field, {e3, e2}));
  out.sigma_w = symmetrize(out.w);
  out.eps_w = injective_norm(out.w, cfg).value;
  out.eps_sigma_w = injective_norm(out.sigma_w, cfg).value;
  if (out.eps_w > 1.0 + kOracleAgreement) {
    throw PreconditionError("injective_nonstrict_example: t = " + std::to_string(t) + " gives eps(w) = " +
                            std::to_string(out.eps_w) + " > 1; the example needs |t| <= 1");
  }
  return out;
}

// ------------------------------------------------------ binary forms

namespace detail {

inline Matrix2 random_unitary2(std::uint64_t seed) {
  Rng rng(seed);
  const auto [a, b] = random_orthonormal_pair(rng, Field::complex, 2);
  Matrix2 u;
  u.col(0) = a;
  u.col(1) = b;
  return u;
}

// One root t1/t2 of sum_k c[k] t1^(d-k) t2^k with c[0] != 0.
inline Scalar dehomogenized_root(const std::vector<Scalar>& c) {
  const std::size_t d = c.size() - 1;
  if (d == 1) return -c[1] / c[0];
  Matrix comp = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) comp(0, static_cast<Eigen::Index>(i)) = -c[i + 1] / c[0];
  for (std::size_t i = 1; i < d; ++i) comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  Eigen::ComplexEigenSolver<Matrix> es(comp, false);
  const auto& ev = es.eigenvalues();
  // Root with the smallest residual.
  auto residual = [&](Scalar r) {
    Scalar p{};
    for (std::size_t k = 0; k <= d; ++k) p = p * r + c[k];
    return std::abs(p / c[0]) / std::max(1.0, std::pow(std::abs(r), static_cast<double>(d)));
  };
  Eigen::Index best = 0;
  double best_res = -1.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double res = residual(ev(i));
    if (best_res < 0.0 || res < best_res) {
      best_res = res;
      best = i;
    }
  }
  // A multiple root splits into a cluster of radius ~eps^(1/m); the cluster
  // mean is accurate to working precision.
  const double radius = 1e-3 * std::max(1.0, std::abs(ev(best)));
  Scalar sum{};
  int count = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i) - ev(best)) <= radius) {
      sum += ev(i);
      ++count;
    }
  }
  if (count > 1) {
    const Scalar mean = sum / static_cast<double>(count);
    if (residual(mean) <= std::max(10.0 * best_res, 1e-13)) return mean;
  }
  return ev(best);
}

}  // namespace detail

/// P = phi_1 * .. * phi_d as polynomials on C^2. Follows the induction:
/// find b_1 with P(b_1) = 0, write P = t_2 Q in a basis {b_1, b_2}, recurse
/// on Q. Factors are returned in canonical coordinates, phi_2..phi_d of unit
/// coefficient norm and the scalar content in phi_1.
inline std::vector<LinearForm> factor_binary_form(const BinaryForm& p, std::uint64_t seed = 0) {
  p.validate();
  const double scale = std::accumulate(p.coeffs.begin(), p.coeffs.end(), 0.0,
                                       [](double a, const Scalar& c) { return std::max(a, std::abs(c)); });
  if (scale == 0.0) throw PreconditionError("factor_binary_form: zero polynomial");
  if (p.degree == 0) throw PreconditionError("factor_binary_form: constant polynomial has no linear factors");

  std::vector<LinearForm> peeled;
  BinaryForm cur = p.canonical();
  for (std::size_t level = 0; cur.degree > 1; ++level) {
    // Make the t1^d coefficient non-negligible.
    int attempt = 0;
    while (std::abs(cur.coeffs[0]) < 1e-12 * scale) {
      if (attempt == 8) throw PreconditionError("factor_binary_form: no usable basis after 8 rotations");
      cur = cur.in_basis(cur.basis * detail::random_unitary2(sub_seed(seed, level * 16 + static_cast<std::size_t>(attempt))));
      ++attempt;
    }
    const Scalar r = detail::dehomogenized_root(cur.coeffs);
    // b_1 = r a_1 + a_2 in the current basis {a_1, a_2}; b_2 completes it orthogonally.
    Vector2 b1 = cur.basis * Vector2(r, 1.0);
    b1 /= b1.norm();
    Vector2 b2(-std::conj(b1[1]), std::conj(b1[0]));
    Matrix2 nb;
    nb.col(0) = b1;
    nb.col(1) = b2;
    BinaryForm next = cur.in_basis(nb);
    // The t2 factor: t = nb^{-1} y, second coordinate.
    const Matrix2 inv = nb.inverse();
    peeled.push_back(LinearForm{inv(1, 0), inv(1, 1)});
    std::vector<Scalar> q(next.coeffs.begin() + 1, next.coeffs.end());
    cur = BinaryForm(std::move(q), nb);
  }
  // Degree one: c0 t1 + c1 t2 with t = B^{-1} y.
  const Matrix2 inv = cur.basis.inverse();
  LinearForm first{cur.coeffs[0] * inv(0, 0) + cur.coeffs[1] * inv(1, 0),
                   cur.coeffs[0] * inv(0, 1) + cur.coeffs[1] * inv(1, 1)};
  std::vector<LinearForm> out{first};
  for (auto& f : peeled) {
    const double nf = std::sqrt(std::norm(f.p) + std::norm(f.q));
    out[0].p *= nf;
    out[0].q *= nf;
    out.push_back({f.p / nf, f.q / nf});
  }

  // Check the product on d + 1 sample points.
  Rng rng(sub_seed(seed ^ 0x666163ULL, 0));
  double worst = 0.0;
  for (std::size_t i = 0; i <= p.degree; ++i) {
    const Vector y = random_unit_vector(rng, Field::complex, 2);
    const Vector2 y2(y[0], y[1]);
    Scalar prod{1.0};
    for (const auto& f : out) prod *= f(y2);
    worst = std::max(worst, std::abs(prod - p(y2)));
  }
  if (worst > 1e-8 * scale) {
    throw ContractViolation("factor_binary_form.product", "product of factors differs from P by " +
                                                              std::to_string(worst));
  }
  return out;
}

/// P_z(y) = <y^(x)d, z> as a binary form: coefficient of y1^(d-k) y2^k is
/// C(d,k) conj(z[0..0 1..1]) with k ones.
inline BinaryForm polynomial_of(const Tensor& z) {
  if (!z.is_cubical() || z.dim(0) != 2) throw ShapeError("polynomial_of: need a tensor in (x)^d K^2");
  const std::size_t d = z.order();
  std::vector<Scalar> c(d + 1);
  for (std::size_t k = 0; k <= d; ++k) {
    std::vector<std::size_t> idx(d, 0);
    for (std::size_t i = d - k; i < d; ++i) idx[i] = 1;
    c[k] = binomial(d, k) * std::conj(z.at(idx));
  }
  return BinaryForm(std::move(c));
}

/// Single-term decomposition z = z_1 v .. v z_d of a symmetric z in (x)^d C^2.
inline SymDecomposition sym_rank1_on_c2(const Tensor& z, std::uint64_t seed = 0, double tol = 1e-8) {
  if (z.field() != Field::complex) throw FieldError("sym_rank1_on_c2: tensor must be complex");
  if (!z.is_cubical() || z.dim(0) != 2) throw ShapeError("sym_rank1_on_c2: need a tensor in (x)^d C^2");
  if (!is_symmetric(z, 1e-10 * std::max(1.0, max_abs(z)))) throw PreconditionError("sym_rank1_on_c2: not symmetric");
  const auto factors = factor_binary_form(polynomial_of(z), seed);
  Term t;
  t.coeff = 1.0;
  // phi(y) = p y1 + q y2 = <y, conj((p, q))>.
  for (const auto& f : factors) {
    Vector v(2);
    v << std::conj(f.p), std::conj(f.q);
    t.vectors.push_back(v);
  }
  SymDecomposition out{Field::complex, 2, z.order(), {t}};
  const double err = hs_norm(out.densify() - z);
  if (err > tol * std::max(1.0, hs_norm(z))) {
    throw ContractViolation("sym_rank1_on_c2.round_trip", "HS error " + std::to_string(err));
  }
  return out;
}

// -------------------------------------------------- border rank family

struct BorderRankInstance {
  std::size_t n = 1;
  Tensor y_n{Field::real, {1}};
  Tensor y_limit{Field::real, {1}};
  double gap_hs = 0.0;
  double expansion_error = 0.0;  // max entry deviation of y_n - y from its closed expansion
  SymDecomposition y_n_terms;    // two terms
  SymDecomposition y_terms;      // three terms
};

inline double border_gap_formula(double n) { return std::sqrt(1.0 / (2.0 * n * n) + 1.0 / (6.0 * n * n * n * n)); }

inline SymDecomposition border_limit_terms(Field field = Field::real) {
  auto e = [](std::size_t k) { return basis_vector(6, k - 1); };
  return SymDecomposition{field, 6, 3,
                          {Term{1.0, {e(1), e(2), e(6)}}, Term{1.0, {e(1), e(3), e(5)}}, Term{1.0, {e(2), e(3), e(4)}}}};
}

/// y_n = n (e1 + e4/n) v (e2 + e5/n) v (e3 + e6/n) - n e1 v e2 v e3 and its limit.
inline BorderRankInstance border_rank_instance(std::size_t n, Field field = Field::real) {
  if (n < 1) throw PreconditionError("border_rank_instance: n must be at least 1");
  auto e = [](std::size_t k) { return basis_vector(6, k - 1); };
  const double h = 1.0 / static_cast<double>(n);
  BorderRankInstance out;
  out.n = n;
  out.y_n_terms = SymDecomposition{
      field, 6, 3,
      {Term{static_cast<double>(n), {e(1) + h * e(4), e(2) + h * e(5), e(3) + h * e(6)}},
       Term{-static_cast<double>(n), {e(1), e(2), e(3)}}}};
  out.y_terms = border_limit_terms(field);
  out.y_n = out.y_n_terms.densify();
  out.y_limit = out.y_terms.densify();
  const Tensor diff = out.y_n - out.y_limit;
  out.gap_hs = hs_norm(diff);
  const SymDecomposition expansion{field, 6, 3,
                                   {Term{h, {e(3), e(4), e(5)}}, Term{h, {e(2), e(4), e(6)}},
                                    Term{h, {e(1), e(5), e(6)}}, Term{h * h, {e(4), e(5), e(6)}}}};
  out.expansion_error = max_abs(diff - expansion.densify());
  return out;
}

/// E(u, v, w)_c = sum_{a,b} u[a,b,c] v_a w_b, i.e. E(x1 (x) x2 (x) x3, v, w) = (x1.v)(x2.w) x3.
inline Vector e_operator(const Tensor& u, const Vector& v, const Vector& w) {
  if (u.order() != 3) throw ShapeError("e_operator: u must have order 3");
  if (static_cast<std::size_t>(v.size()) != u.dim(0) || static_cast<std::size_t>(w.size()) != u.dim(1)) {
    throw ShapeError("e_operator: vector lengths do not match the first two slots");
  }
  const Vector args[3] = {v, w, Vector()};
  return contract_all_but(u, std::span<const Vector>(args, 3), 2);
}

namespace detail {

// Exact rank of an integer matrix by fraction-free (Bareiss) elimination.
inline std::size_t bareiss_rank(std::vector<std::vector<long long>> a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::size_t rank = 0;
  long long prev = 1;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      for (std::size_t k = c + 1; k < cols; ++k) {
        a[r][k] = (a[r][k] * a[rank][c] - a[rank][k] * a[r][c]) / prev;
      }
      a[r][c] = 0;
    }
    prev = a[rank][c];
    ++rank;
  }
  return rank;
}

// <u_1 v .. v u_d, w_1 v .. v w_d> = (1/d!) sum over permutations of prod <u_k, w_eta(k)>.
inline Scalar sym_inner(std::span<const Vector> u, std::span<const Vector> w) {
  const std::size_t d = u.size();
  Matrix g(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) g(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = w[b].dot(u[a]);
  }
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  Scalar s{};
  double count = 0.0;
  do {
    Scalar p{1.0};
    for (std::size_t a = 0; a < d; ++a) p *= g(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(perm[a]));
    s += p;
    count += 1.0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return s / count;
}

}  // namespace detail

struct SymAlsFit {
  double residual_hs = 0.0;
  std::vector<std::vector<Vector>> terms;
  int sweeps = 0;
};

/// Alternating least squares for z ~ sum_{i<r} u_1^i v .. v u_d^i with each
/// vector solved exactly while the others are fixed.
inline SymAlsFit sym_als(const Tensor& z, std::size_t r, std::uint64_t seed, int max_sweeps) {
  const std::size_t d = z.order();
  const std::size_t n = z.dim(0);
  const auto ni = static_cast<Eigen::Index>(n);
  Rng rng(seed);
  SymAlsFit fit;
  for (std::size_t i = 0; i < r; ++i) {
    std::vector<Vector> t;
    for (std::size_t k = 0; k < d; ++k) t.push_back(random_vector(rng, z.field(), n));
    fit.terms.push_back(std::move(t));
  }
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double moved = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        std::vector<Vector> others;
        for (std::size_t m = 0; m < d; ++m) {
          if (m != k) others.push_back(fit.terms[i][m]);
        }
        std::vector<std::vector<Vector>> cols;
        for (std::size_t a = 0; a < n; ++a) {
          std::vector<Vector> c{basis_vector(n, a)};
          c.insert(c.end(), others.begin(), others.end());
          cols.push_back(std::move(c));
        }
        Matrix g(ni, ni);
        Vector rhs(ni);
        std::vector<Vector> w(d);
        for (std::size_t m = 1; m < d; ++m) w[m] = others[m - 1].conjugate();
        const Vector zy = contract_all_but(z, w, 0);
        for (std::size_t l = 0; l < n; ++l) {
          for (std::size_t a = 0; a < n; ++a) {
            g(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(a)) = detail::sym_inner(cols[a], cols[l]);
          }
          Scalar s = zy[static_cast<Eigen::Index>(l)];
          for (std::size_t j = 0; j < r; ++j) {
            if (j != i) s -= detail::sym_inner(fit.terms[j], cols[l]);
          }
          rhs[static_cast<Eigen::Index>(l)] = s;
        }
        const double ridge = 1e-14 * std::max(1.0, g.cwiseAbs().maxCoeff());
        g.diagonal().array() += ridge;
        Vector x;
        if (z.field() == Field::real) {
          x = g.real().ldlt().solve(rhs.real()).cast<Scalar>();
        } else {
          x = g.ldlt().solve(rhs);
        }
        moved = std::max(moved, (x - fit.terms[i][k]).norm());
        fit.terms[i][k] = x;
      }
    }
    fit.sweeps = sweep + 1;
    if (moved <= 1e-13) break;
  }
  SymDecomposition s{z.field(), n, d, {}};
  for (const auto& t : fit.terms) s.terms.push_back(Term{1.0, t});
  fit.residual_hs = hs_norm(z - s.densify());
  return fit;
}

struct YRankReport {
  // Probe evaluations E(y, p_i, q_i) and their exact rank (entries scaled by 3!).
  std::vector<Vector> probe_values;
  double probe_error = 0.0;  // deviation from the displayed values e_i / 3!
  std::size_t probe_rank = 0;

  // Candidate two-term decomposition, when supplied.
  bool candidate_checked = false;
  double candidate_residual_hs = 0.0;
  std::size_t candidate_span_dim = 0;
  std::size_t dual_index = 0;             // i with <y_i*, e_1> != 0
  std::size_t image_rank_y = 0;           // rank of E(y, y_i*, .)
  std::size_t image_bound_candidate = 2;  // rank bound forced by the candidate
  long violated_by = 0;                   // image_rank_y - image_bound_candidate

  // Two-term ALS fits of y.
  double als_min_residual = 0.0;
  std::vector<double> als_residuals;
};

/// Replays the rank-3 argument for y = e1 v e2 v e6 + e1 v e3 v e5 + e2 v e3 v e4.
/// `candidate` is an optional two-term SymDecomposition to falsify.
inline YRankReport y_rank_lower_bound_check(const std::optional<SymDecomposition>& candidate = std::nullopt,
                                            int als_restarts = 64, int als_sweeps = 500, std::uint64_t seed = 0) {
  auto e = [](std::size_t k) { return basis_vector(6, k - 1); };
  const Tensor y = border_limit_terms().densify();
  YRankReport rep;

  const std::size_t probes[6][2] = {{2, 6}, {1, 6}, {1, 5}, {2, 3}, {1, 3}, {1, 2}};
  std::vector<std::vector<long long>> scaled;
  for (std::size_t i = 0; i < 6; ++i) {
    const Vector v = e_operator(y, e(probes[i][0]), e(probes[i][1]));
    rep.probe_values.push_back(v);
    rep.probe_error = std::max(rep.probe_error, (v - e(i + 1) / 6.0).cwiseAbs().maxCoeff());
    std::vector<long long> row;
    for (Eigen::Index c = 0; c < 6; ++c) {
      const double s = 6.0 * v[c].real();
      if (std::abs(s - std::round(s)) > 1e-9 || std::abs(v[c].imag()) > 1e-12) {
        throw ContractViolation("y_rank.probe_integrality", "probe entry is not a multiple of 1/3!");
      }
      row.push_back(std::llround(s));
    }
    scaled.push_back(std::move(row));
  }
  rep.probe_rank = detail::bareiss_rank(scaled);

  if (candidate) {
    if (candidate->n != 6 || candidate->d != 3 || candidate->terms.size() != 2) {
      throw PreconditionError("y_rank_lower_bound_check: candidate must be a two-term decomposition in (x)^3 K^6");
    }
    rep.candidate_checked = true;
    rep.candidate_residual_hs = hs_norm(candidate->densify() - y);
    std::vector<Vector> ys;
    for (const auto& t : candidate->terms) {
      for (std::size_t k = 0; k < 3; ++k) ys.push_back(k == 0 ? Vector(t.coeff * t.vectors[k]) : t.vectors[k]);
    }
    rep.candidate_span_dim = span_dimension(ys, 1e-10);
    if (rep.candidate_span_dim == 6) {
      // Dual basis for the bilinear pairing used by E: Y^T V = I.
      const Matrix ymat = column_matrix(ys);
      const Matrix dual = ymat.transpose().inverse();
      Eigen::Index best = 0;
      for (Eigen::Index i = 1; i < 6; ++i) {
        if (std::abs(dual(0, i)) > std::abs(dual(0, best))) best = i;
      }
      rep.dual_index = static_cast<std::size_t>(best);
      Matrix img(6, 6);
      for (std::size_t b = 0; b < 6; ++b) img.col(static_cast<Eigen::Index>(b)) = e_operator(y, dual.col(best), e(b + 1));
      rep.image_rank_y = numerical_rank(img, 1e-9);
    } else {
      // The probes show the image of E(y, ., .) is 6-dimensional, so 6 vectors must span.
      rep.image_rank_y = rep.probe_rank;
      rep.image_bound_candidate = rep.candidate_span_dim;
    }
    rep.violated_by = static_cast<long>(rep.image_rank_y) - static_cast<long>(rep.image_bound_candidate);
  }

  for (int r = 0; r < als_restarts; ++r) {
    const auto fit = sym_als(y, 2, sub_seed(seed ^ 0x616c73ULL, static_cast<std::uint64_t>(r)), als_sweeps);
    rep.als_residuals.push_back(fit.residual_hs);
  }
  rep.als_min_residual =
      rep.als_residuals.empty() ? 0.0 : *std::min_element(rep.als_residuals.begin(), rep.als_residuals.end());
  return rep;
}

}  // namespace symtensor
