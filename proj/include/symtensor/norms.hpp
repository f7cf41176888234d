#pragma once

// Injective and projective norm estimates.
//
// Every estimate states its kind. Injective values from the power method are
// lower bounds; they become exact only when the brute-force oracle agrees.
// Projective upper bounds come with a decomposition that densifies to z;
// projective lower bounds come with a dual witness u and use
// |<z,u>| <= pi(z) * eps(u) together with a certified bound on eps(u).

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "symtensor/decomposition.hpp"
#include "symtensor/linalg.hpp"
#include "symtensor/oracle.hpp"
#include "symtensor/power.hpp"
#include "symtensor/random.hpp"

namespace symtensor {

enum class EstimateKind { exact, lower_bound, upper_bound };

inline const char* to_string(EstimateKind k) {
  switch (k) {
    case EstimateKind::exact: return "exact";
    case EstimateKind::lower_bound: return "lower_bound";
    case EstimateKind::upper_bound: return "upper_bound";
  }
  return "?";
}

using Witness = std::variant<std::monostate, Tensor, CpDecomposition, SymDecomposition>;

struct NormEstimate {
  double value = 0.0;
  EstimateKind kind = EstimateKind::lower_bound;
  Witness witness;
  std::vector<Vector> vectors;  // maximizer for injective estimates
  Scalar attained{};            // <z, witness> for injective estimates (keeps the sign over R)
  int iterations = 0;
  std::uint64_t seed = 0;
  bool oracle_used = false;
  double oracle_value = 0.0;
};

inline constexpr double kOracleAgreement = 1e-6;

// ---------------------------------------------------------------- injective

/// eps(z) = max |<z, y_1 (x) .. (x) y_d>| over unit vectors.
inline NormEstimate injective_norm(const Tensor& z, const SolverConfig& cfg) {
  NormEstimate est;
  est.seed = cfg.seed;
  const auto pts = alternating_rank1_restarts(z, cfg);
  const auto& best = pts[best_index(pts)];
  for (const auto& p : pts) est.iterations += p.iterations;
  est.value = std::abs(best.lambda);
  est.vectors = best.vectors;
  est.kind = EstimateKind::lower_bound;

  if (z.size() <= cfg.oracle_cutoff) {
    const auto orc = injective_oracle(z, cfg);
    est.oracle_used = true;
    est.oracle_value = orc.value;
    if (std::abs(orc.value - est.value) <= kOracleAgreement) est.kind = EstimateKind::exact;
    if (orc.value > est.value) {
      est.value = orc.value;
      est.vectors = orc.vectors;
    }
  }
  const Tensor w = elementary(z.field(), est.vectors);
  est.attained = inner_product(z, w);
  est.witness = w;
  return est;
}

/// eps_s(z) = max |P_z(y)| over unit y, for symmetric z.
inline NormEstimate injective_sym(const Tensor& z, const SolverConfig& cfg) {
  if (!z.is_cubical() || !is_symmetric(z, 1e-10 * std::max(1.0, max_abs(z)))) {
    throw PreconditionError("injective_sym: tensor is not symmetric");
  }
  const std::size_t d = z.order();
  const std::size_t n = z.dim(0);
  NormEstimate est;
  est.seed = cfg.seed;
  SymmetricPoint best;
  const int restarts = std::max(1, cfg.restarts);
  for (int r = 0; r < restarts; ++r) {
    Vector y0;
    if (r == 0) {
      y0 = detail::top_singular(unfold(z, 0), z.field()).u;
      if (y0.norm() == 0.0) y0 = basis_vector(n, 0);
    } else {
      Rng rng(sub_seed(cfg.seed, static_cast<std::uint64_t>(r)));
      y0 = random_unit_vector(rng, z.field(), n);
    }
    auto p = symmetric_power(z, y0, cfg);
    est.iterations += p.iterations;
    if (r == 0 || std::abs(p.value) > std::abs(best.value)) best = std::move(p);
  }
  est.value = std::abs(best.value);
  est.vectors.assign(d, best.y);
  est.kind = EstimateKind::lower_bound;

  if (z.size() <= cfg.oracle_cutoff) {
    const auto orc = injective_sym_oracle(z, cfg);
    est.oracle_used = true;
    est.oracle_value = orc.value;
    if (std::abs(orc.value - est.value) <= kOracleAgreement) est.kind = EstimateKind::exact;
    if (orc.value > est.value) {
      est.value = orc.value;
      est.vectors = orc.vectors;
    }
  }
  const Tensor w = elementary(z.field(), est.vectors);
  est.attained = inner_product(z, w);
  est.witness = w;
  return est;
}

struct BanachCheck {
  double eps_s = 0.0;
  double eps = 0.0;
  double gap = 0.0;
  bool oracle_verified = false;
};

/// Compares the polynomial norm with the multilinear norm of a symmetric tensor.
inline BanachCheck banach_check(const Tensor& z, const SolverConfig& cfg) {
  const auto s = injective_sym(z, cfg);
  const auto e = injective_norm(z, cfg);
  return {s.value, e.value, std::abs(e.value - s.value),
          s.kind == EstimateKind::exact && e.kind == EstimateKind::exact};
}

/// Certified upper bound for eps(z): the best unfolding spectral norm.
inline NormEstimate injective_upper(const Tensor& z) {
  NormEstimate est;
  est.value = flattening_upper(z);
  est.kind = EstimateKind::upper_bound;
  return est;
}

// --------------------------------------------------------------- projective

namespace detail {

// pi(z) <= sum over fixed indices of the other slots of the nuclear norm of
// the (a, b) matrix slice. Returns the decomposition realizing that sum.
inline CpDecomposition slice_decomposition(const Tensor& z, std::size_t a, std::size_t b) {
  const std::size_t d = z.order();
  CpDecomposition out{z.field(), z.shape(), {}};
  Shape other;
  std::vector<std::size_t> other_slots;
  for (std::size_t k = 0; k < d; ++k) {
    if (k != a && k != b) {
      other.push_back(z.dim(k));
      other_slots.push_back(k);
    }
  }
  if (other.empty()) other.push_back(1);
  std::vector<std::size_t> oidx(other.size(), 0);
  do {
    Matrix m(static_cast<Eigen::Index>(z.dim(a)), static_cast<Eigen::Index>(z.dim(b)));
    std::vector<std::size_t> idx(d, 0);
    for (std::size_t s = 0; s < other_slots.size(); ++s) idx[other_slots[s]] = oidx[s];
    for (std::size_t i = 0; i < z.dim(a); ++i) {
      for (std::size_t j = 0; j < z.dim(b); ++j) {
        idx[a] = i;
        idx[b] = j;
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = z.at(idx);
      }
    }
    if (m.cwiseAbs().maxCoeff() == 0.0) continue;
    Matrix u, v;
    Eigen::VectorXd s;
    if (z.field() == Field::real) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.real(), Eigen::ComputeThinU | Eigen::ComputeThinV);
      u = svd.matrixU().cast<Scalar>();
      v = svd.matrixV().cast<Scalar>();
      s = svd.singularValues();
    } else {
      Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
      u = svd.matrixU();
      v = svd.matrixV();
      s = svd.singularValues();
    }
    for (Eigen::Index r = 0; r < s.size(); ++r) {
      if (s(r) <= 0.0) continue;
      Term t;
      t.coeff = s(r);
      t.vectors.resize(d);
      for (std::size_t q = 0; q < other_slots.size(); ++q) {
        t.vectors[other_slots[q]] = basis_vector(z.dim(other_slots[q]), oidx[q]);
      }
      t.vectors[a] = u.col(r);
      t.vectors[b] = v.col(r).conjugate();
      out.terms.push_back(std::move(t));
    }
  } while (next_index(oidx, other));
  return out;
}

// Best slice decomposition over all slot pairs (a plain vector for d = 1).
inline CpDecomposition best_slice_decomposition(const Tensor& z) {
  if (z.order() == 1) {
    CpDecomposition out{z.field(), z.shape(), {}};
    const Vector v = unfold(z, 0).col(0);
    if (v.norm() > 0.0) out.terms.push_back(Term{Scalar{1.0}, {v}});
    return out;
  }
  std::optional<CpDecomposition> best;
  for (std::size_t a = 0; a < z.order(); ++a) {
    for (std::size_t b = a + 1; b < z.order(); ++b) {
      auto c = slice_decomposition(z, a, b);
      if (!best || c.nuclear_sum() < best->nuclear_sum()) best = std::move(c);
    }
  }
  return *best;
}

// Appends the slice decomposition of z - densify(dec) so the result sums to z exactly.
inline CpDecomposition certified(CpDecomposition dec, const Tensor& z) {
  const Tensor residual = z - dec.densify();
  if (max_abs(residual) > 0.0) {
    auto rest = best_slice_decomposition(residual);
    for (auto& t : rest.terms) dec.terms.push_back(std::move(t));
  }
  return dec;
}

// Moves all scalar weight into the factors and equalizes the factor norms.
inline void balance(Term& t) {
  double logsum = 0.0;
  for (const auto& v : t.vectors) {
    if (v.norm() == 0.0) return;
    logsum += std::log(v.norm());
  }
  const double target = std::exp((logsum + std::log(std::abs(t.coeff))) / static_cast<double>(t.vectors.size()));
  const Scalar phase = t.coeff / std::abs(t.coeff);
  t.vectors[0] *= phase;
  for (auto& v : t.vectors) v *= target / v.norm();
  t.coeff = 1.0;
}

// Greedy rank-1 deflation: repeatedly peel off the best rank-1 term.
inline CpDecomposition greedy_terms(const Tensor& z, std::size_t r, const SolverConfig& cfg) {
  CpDecomposition out{z.field(), z.shape(), {}};
  Tensor residual = z;
  SolverConfig c = cfg;
  c.restarts = std::min(cfg.restarts, 8);
  for (std::size_t i = 0; i < r; ++i) {
    if (hs_norm(residual) <= 1e-14 * std::max(1.0, hs_norm(z))) break;
    c.seed = sub_seed(cfg.seed ^ 0x677265ULL, i);
    const auto pts = alternating_rank1_restarts(residual, c);
    const auto& p = pts[best_index(pts)];
    if (std::abs(p.lambda) == 0.0) break;
    Term t{p.lambda, p.vectors};
    residual -= t.coeff * elementary(z.field(), t.vectors);
    balance(t);
    out.terms.push_back(std::move(t));
  }
  return out;
}

// Least-squares refit of the term weights with the directions held fixed.
inline CpDecomposition debiased(const CpDecomposition& dec, const Tensor& z) {
  if (dec.terms.empty()) return dec;
  Matrix a(static_cast<Eigen::Index>(z.size()), static_cast<Eigen::Index>(dec.terms.size()));
  for (std::size_t j = 0; j < dec.terms.size(); ++j) {
    const Tensor e = elementary(z.field(), dec.terms[j].vectors);
    for (std::size_t i = 0; i < z.size(); ++i) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = e[i];
  }
  Vector rhs(static_cast<Eigen::Index>(z.size()));
  for (std::size_t i = 0; i < z.size(); ++i) rhs[static_cast<Eigen::Index>(i)] = z[i];
  Vector c;
  if (z.field() == Field::real) {
    c = a.real().completeOrthogonalDecomposition().solve(rhs.real()).cast<Scalar>();
  } else {
    c = a.completeOrthogonalDecomposition().solve(rhs);
  }
  CpDecomposition out = dec;
  for (std::size_t j = 0; j < out.terms.size(); ++j) {
    out.terms[j].coeff *= c[static_cast<Eigen::Index>(j)];
    balance(out.terms[j]);
  }
  std::erase_if(out.terms, [](const Term& t) { return t.norm_product() == 0.0; });
  return out;
}

// Penalized block-coordinate descent on
//   sum_i prod_k ||a_ik|| + (rho/2) ||z - sum_i a_i1 (x) .. (x) a_id||^2
// with rho increased by 10x per stage. Each block update is a group
// soft-threshold, so terms can vanish.
inline CpDecomposition penalized_descent(const Tensor& z, CpDecomposition dec, const SolverConfig& cfg,
                                         int* iterations) {
  const std::size_t d = z.order();
  for (auto& t : dec.terms) balance(t);
  Tensor residual = z - dec.densify();
  const double scale = std::max(hs_norm(z), 1e-300);
  double rho = 10.0 / scale;
  const int sweeps = std::max(1, std::min(cfg.max_iter, 400));
  for (int stage = 0; stage < 11; ++stage, rho *= 10.0) {
    for (int sweep = 0; sweep < sweeps; ++sweep) {
      double change = 0.0;
      for (auto& t : dec.terms) {
        for (std::size_t k = 0; k < d; ++k) {
          double beta = 1.0;
          std::vector<Vector> w(d);
          for (std::size_t m = 0; m < d; ++m) {
            if (m == k) continue;
            beta *= t.vectors[m].squaredNorm();
            w[m] = t.vectors[m].conjugate();
          }
          if (beta == 0.0) continue;
          const Vector h = contract_all_but(residual, w, k) + beta * t.vectors[k];
          const double c = std::sqrt(beta);
          const double hn = h.norm();
          Vector a = Vector::Zero(h.size());
          if (hn > 0.0) a = std::max(0.0, 1.0 - c / (rho * hn)) * (h / beta);
          const Vector delta = a - t.vectors[k];
          if (delta.norm() == 0.0) continue;
          change = std::max(change, delta.norm());
          std::vector<Vector> parts = t.vectors;
          parts[k] = delta;
          residual -= elementary(z.field(), parts);
          t.vectors[k] = a;
        }
      }
      std::erase_if(dec.terms, [](const Term& t) { return t.norm_product() == 0.0; });
      for (auto& t : dec.terms) balance(t);
      if (iterations) ++*iterations;
      if (change <= 1e-13 * scale) break;
    }
    residual = z - dec.densify();
  }
  return dec;
}

// Symmetric search: gradient descent with Armijo backtracking on
//   sum_i ||a_i||^d + (rho/2) ||z - sum_i s_i a_i^(x)d||^2.
inline CpDecomposition symmetric_descent(const Tensor& z, const SolverConfig& cfg, std::size_t r, int* iterations) {
  const std::size_t d = z.order();
  const std::size_t n = z.dim(0);
  const double dd = static_cast<double>(d);
  struct SymTerm {
    double s;
    Vector a;
  };
  std::vector<SymTerm> terms;
  Tensor residual = z;
  SolverConfig c = cfg;
  c.restarts = std::min(cfg.restarts, 8);
  for (std::size_t i = 0; i < r; ++i) {
    if (hs_norm(residual) <= 1e-14 * std::max(1.0, hs_norm(z))) break;
    SymmetricPoint best;
    for (int q = 0; q < c.restarts; ++q) {
      Rng rng(sub_seed(cfg.seed ^ 0x73796dULL, i * 64 + static_cast<std::size_t>(q)));
      auto p = symmetric_power(residual, random_unit_vector(rng, z.field(), n), c);
      if (q == 0 || std::abs(p.value) > std::abs(best.value)) best = std::move(p);
    }
    const double mag = std::abs(best.value);
    if (mag == 0.0) break;
    SymTerm t{1.0, best.y};
    if (z.field() == Field::complex) {
      t.a *= std::pow(mag, 1.0 / dd) * std::polar(1.0, std::arg(best.value) / dd);
    } else if (d % 2 == 1) {
      t.a *= std::pow(mag, 1.0 / dd) * (best.value.real() < 0 ? -1.0 : 1.0);
    } else {
      t.a *= std::pow(mag, 1.0 / dd);
      t.s = best.value.real() < 0 ? -1.0 : 1.0;
    }
    std::vector<Vector> rep(d, t.a);
    residual -= t.s * elementary(z.field(), rep);
    terms.push_back(std::move(t));
  }

  auto power_of = [&](const Vector& a) {
    std::vector<Vector> rep(d, a);
    return elementary(z.field(), rep);
  };
  auto objective = [&](const std::vector<SymTerm>& ts, double rho, Tensor* res) {
    Tensor rr = z;
    double pen = 0.0;
    for (const auto& t : ts) {
      rr -= t.s * power_of(t.a);
      pen += std::pow(t.a.norm(), dd);
    }
    const double hs = hs_norm(rr);
    if (res) *res = std::move(rr);
    return pen + 0.5 * rho * hs * hs;
  };

  const double scale = std::max(hs_norm(z), 1e-300);
  double rho = 10.0 / scale;
  const int steps = std::max(1, std::min(cfg.max_iter, 400));
  for (int stage = 0; stage < 11 && !terms.empty(); ++stage, rho *= 10.0) {
    double step = 1.0 / (rho * dd * std::max(1.0, scale));
    Tensor res;
    double f = objective(terms, rho, &res);
    for (int it = 0; it < steps; ++it) {
      std::vector<Vector> grad;
      double gn = 0.0;
      for (const auto& t : terms) {
        std::vector<Vector> w(d, t.a.conjugate());
        const Vector cc = contract_all_but(res, w, 0);
        const double an = t.a.norm();
        Vector g = dd * std::pow(an, dd - 2.0) * t.a - rho * dd * t.s * cc;
        if (z.field() == Field::real) g = g.real().cast<Scalar>();
        gn += g.squaredNorm();
        grad.push_back(std::move(g));
      }
      if (iterations) ++*iterations;
      if (std::sqrt(gn) <= 1e-14 * std::max(1.0, f)) break;
      bool accepted = false;
      for (int bt = 0; bt < 60; ++bt) {
        auto trial = terms;
        for (std::size_t i = 0; i < trial.size(); ++i) trial[i].a -= step * grad[i];
        Tensor tres;
        const double ft = objective(trial, rho, &tres);
        if (ft <= f - 1e-4 * step * gn) {
          terms = std::move(trial);
          res = std::move(tres);
          const double rel = (f - ft) / std::max(1e-300, std::abs(f));
          f = ft;
          step *= 2.0;
          accepted = true;
          if (rel < 1e-15) it = steps;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
    }
  }
  CpDecomposition out{z.field(), z.shape(), {}};
  for (const auto& t : terms) {
    if (t.a.norm() == 0.0) continue;
    out.terms.push_back(Term{Scalar{t.s}, std::vector<Vector>(d, t.a)});
  }
  return out;
}

}  // namespace detail

/// Certified upper bound for pi(z). The witness is a CpDecomposition summing
/// to z whose value sum_i |c_i| prod_k ||z_k^i|| equals the returned value.
/// Candidates: slice SVD bounds, greedy deflation, penalized block descent
/// with up to r_max terms and, for symmetric z, a symmetric search.
inline NormEstimate projective_upper(const Tensor& z, std::size_t r_max, const SolverConfig& cfg) {
  if (r_max < 1) throw PreconditionError("projective_upper: r_max must be at least 1");
  NormEstimate est;
  est.kind = EstimateKind::upper_bound;
  est.seed = cfg.seed;
  std::vector<CpDecomposition> candidates;
  candidates.push_back(detail::best_slice_decomposition(z));
  if (z.order() >= 2 && max_abs(z) > 0.0) {
    const auto greedy = detail::greedy_terms(z, r_max, cfg);
    candidates.push_back(detail::certified(greedy, z));
    const auto descent = detail::penalized_descent(z, greedy, cfg, &est.iterations);
    candidates.push_back(detail::certified(descent, z));
    candidates.push_back(detail::certified(detail::debiased(descent, z), z));
    if (z.is_cubical() && is_symmetric(z, 1e-12 * std::max(1.0, max_abs(z)))) {
      const auto sym = detail::symmetric_descent(z, cfg, r_max, &est.iterations);
      candidates.push_back(detail::certified(sym, z));
      candidates.push_back(detail::certified(detail::debiased(sym, z), z));
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (candidates[i].nuclear_sum() < candidates[best].nuclear_sum()) best = i;
  }
  est.value = candidates[best].nuclear_sum();
  est.witness = std::move(candidates[best]);
  return est;
}

/// Certified lower bound for pi(z) from |<z,u>| / eps_upper(u), maximized over
/// a few dual candidates u. The best u is the witness.
inline NormEstimate projective_lower(const Tensor& z, const SolverConfig& cfg) {
  NormEstimate est;
  est.kind = EstimateKind::lower_bound;
  est.seed = cfg.seed;
  if (max_abs(z) == 0.0) {
    est.witness = Tensor(z.field(), z.shape());
    return est;
  }
  std::vector<Tensor> cands{z};
  {
    const auto pts = alternating_rank1_restarts(z, cfg);
    const auto& p = pts[best_index(pts)];
    for (const auto& q : pts) est.iterations += q.iterations;
    cands.push_back(elementary(z.field(), p.vectors));
  }
  for (std::size_t k = 0; k < z.order(); ++k) {
    const Matrix m = unfold(z, k);
    Matrix polar;
    if (z.field() == Field::real) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.real(), Eigen::ComputeThinU | Eigen::ComputeThinV);
      polar = (svd.matrixU() * svd.matrixV().adjoint()).cast<Scalar>();
    } else {
      Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
      polar = svd.matrixU() * svd.matrixV().adjoint();
    }
    cands.push_back(fold(polar, z.field(), z.shape(), k));
  }
  if (z.is_cubical() && z.order() <= kMaxOrder && is_symmetric(z, 1e-12 * std::max(1.0, max_abs(z)))) {
    const std::size_t base = cands.size();
    for (std::size_t i = 0; i < base; ++i) cands.push_back(symmetrize(cands[i]));
  }
  for (auto& u : cands) {
    const double eu = flattening_upper(u);
    if (eu <= 0.0) continue;
    const double ratio = std::abs(inner_product(z, u)) / eu;
    if (ratio > est.value) {
      est.value = ratio;
      est.witness = u * Scalar{1.0 / eu};
    }
  }
  return est;
}

// ----------------------------------------------------- nuclear structure

struct NuclearStructureReport {
  std::vector<std::size_t> span_dims;
  std::vector<std::size_t> violations;  // terms whose span dimension exceeds the field's bound
  Tensor witness_form{Field::real, {1}};
  std::vector<double> residuals;  // |L_u(z_1^i..z_d^i) - prod_k ||z_k^i|||
  double max_residual = 0.0;
  bool witness_found = false;
  double tol = 0.0;
};

/// Expands z = sum_i c_i z_1^i v .. v z_d^i into its d! permutation terms.
inline CpDecomposition expand_permutations(const SymDecomposition& s) {
  s.validate();
  CpDecomposition out{s.field, cubical_shape(s.n, s.d), {}};
  std::vector<std::size_t> perm(s.d);
  double fact = 1.0;
  for (std::size_t k = 2; k <= s.d; ++k) fact *= static_cast<double>(k);
  for (const auto& t : s.terms) {
    std::iota(perm.begin(), perm.end(), 0);
    do {
      Term e;
      e.coeff = t.coeff / fact;
      for (auto p : perm) e.vectors.push_back(t.vectors[p]);
      out.terms.push_back(std::move(e));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

/// Structural check of an allegedly optimal nuclear decomposition of a
/// symmetric tensor. `pi_certificate` is a certified value of pi(z) supplied
/// by the caller; the decomposition must sum to z and reach it.
inline NuclearStructureReport nuclear_structure_check(const Tensor& z, const CpDecomposition& decomp,
                                                      std::optional<double> pi_certificate, double tol,
                                                      const SolverConfig& cfg = {}) {
  if (!z.is_cubical() || !is_symmetric(z, tol)) throw PreconditionError("nuclear_structure_check: z is not symmetric");
  if (!pi_certificate) throw PreconditionError("nuclear_structure_check: projective norm certificate missing");
  if (decomp.shape != z.shape() || decomp.field != z.field()) {
    throw ShapeError("nuclear_structure_check: decomposition shape or field differs from z");
  }
  const double err = hs_norm(decomp.densify() - z);
  if (err > tol) {
    throw PreconditionError("nuclear_structure_check: decomposition does not sum to z (HS error " +
                            std::to_string(err) + ")");
  }
  if (std::abs(decomp.nuclear_sum() - *pi_certificate) > tol) {
    throw PreconditionError("nuclear_structure_check: decomposition value " + std::to_string(decomp.nuclear_sum()) +
                            " does not match the certificate " + std::to_string(*pi_certificate));
  }

  NuclearStructureReport rep;
  rep.tol = tol;
  const std::size_t bound = z.field() == Field::complex ? 1 : 2;
  // Terms with the scalar folded into the first vector.
  std::vector<std::vector<Vector>> terms;
  for (const auto& t : decomp.terms) {
    auto v = t.vectors;
    v[0] *= t.coeff;
    terms.push_back(v);
    const std::size_t dim = span_dimension(v, tol);
    rep.span_dims.push_back(dim);
    if (dim > bound) rep.violations.push_back(rep.span_dims.size() - 1);
  }

  auto residuals_for = [&](const Tensor& u) {
    std::vector<double> res;
    for (const auto& v : terms) {
      double p = 1.0;
      for (const auto& x : v) p *= x.norm();
      res.push_back(std::abs(multilinear_eval(u, v) - p));
    }
    return res;
  };

  // Candidate norm-one symmetric forms u, each rescaled to eps(u) = 1.
  std::vector<Tensor> cands;
  {
    const auto s = injective_sym(z, cfg);
    cands.push_back(elementary(z.field(), std::vector<Vector>(z.order(), s.vectors[0])));
    const auto lower = projective_lower(z, cfg);
    if (const auto* u = std::get_if<Tensor>(&lower.witness)) cands.push_back(symmetrize(*u));
    cands.push_back(z);
  }
  bool first = true;
  for (auto& u : cands) {
    const double e = injective_norm(u, cfg).value;
    if (e <= 0.0) continue;
    Tensor unit = u * Scalar{1.0 / e};
    auto res = residuals_for(unit);
    const double worst = res.empty() ? 0.0 : *std::max_element(res.begin(), res.end());
    if (first || worst < rep.max_residual) {
      rep.witness_form = std::move(unit);
      rep.residuals = std::move(res);
      rep.max_residual = worst;
      first = false;
    }
  }
  rep.witness_found = rep.max_residual <= 1e-6;
  return rep;
}

}  // namespace symtensor
