#pragma once

// Subcommands of the command-line tool. Each returns a JSON report that is a
// pure function of the input bytes and options.

#include <chrono>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "symtensor/io.hpp"
#include "symtensor/norms.hpp"
#include "symtensor/rank1.hpp"
#include "symtensor/recovery.hpp"
#include "symtensor/symrank.hpp"

namespace symtensor::cli {

using json = nlohmann::json;

struct Options {
  std::uint64_t seed = 0;
  double tol = 1e-8;
  int restarts = 32;
  bool trace = false;
  std::optional<std::string> norm;  // hs, eps or pi; all when unset
  std::size_t r_max = 8;
};

struct Demo {
  json report;
  std::string csv;
};

inline SolverConfig solver_config(const Options& o) {
  SolverConfig cfg;
  cfg.seed = o.seed;
  cfg.restarts = o.restarts;
  return cfg;
}

namespace detail {

inline json envelope(const std::string& command, json inputs, json results, const Options& o) {
  return json{{"command", command}, {"inputs", std::move(inputs)}, {"results", std::move(results)}, {"seed", o.seed}};
}

inline json vectors_json(std::span<const Vector> vs, Field f) { return io::to_json(vs, f); }

inline json term_json(const Term& t, Field f) {
  return json{{"coeff", io::detail::scalar_json(t.coeff, f)}, {"vectors", vectors_json(t.vectors, f)}};
}

inline json decomposition_json(const CpDecomposition& d) {
  json terms = json::array();
  for (const auto& t : d.terms) terms.push_back(term_json(t, d.field));
  return json{{"terms", std::move(terms)}, {"nuclear_sum", d.nuclear_sum()}};
}

inline json decomposition_json(const SymDecomposition& d) {
  json terms = json::array();
  for (const auto& t : d.terms) terms.push_back(term_json(t, d.field));
  return json{{"symmetric_terms", std::move(terms)}};
}

inline json estimate_json(const NormEstimate& e, Field f, bool trace) {
  json j{{"value", e.value}, {"kind", to_string(e.kind)}};
  if (!e.vectors.empty()) {
    j["vectors"] = vectors_json(e.vectors, f);
    j["attained"] = io::detail::scalar_json(e.attained, f);
  }
  if (e.oracle_used) j["oracle_value"] = e.oracle_value;
  if (const auto* d = std::get_if<CpDecomposition>(&e.witness)) {
    j["terms"] = d->terms.size();
    if (trace) j["decomposition"] = decomposition_json(*d);
  }
  if (const auto* t = std::get_if<Tensor>(&e.witness); t && trace) j["witness"] = io::to_json(*t);
  return j;
}

inline bool symmetric(const Tensor& z) { return z.is_cubical() && is_symmetric(z, 1e-10 * std::max(1.0, max_abs(z))); }

inline std::string format_double(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

}  // namespace detail

/// Best rank-1 certificate, plus structure and decomposable symmetric
/// approximation for symmetric input.
inline json cmd_rank1_tensor(const Tensor& z, const Options& o, json inputs = json::object()) {
  const auto cfg = solver_config(o);
  const auto cert = best_rank1(z, cfg);
  const Field f = z.field();
  json r{{"lambda", io::detail::scalar_json(cert.lambda, f)},
         {"abs_lambda", std::abs(cert.lambda)},
         {"vectors", detail::vectors_json(cert.vectors, f)},
         {"residual_hs", cert.residual_hs},
         {"hs", hs_norm(z)},
         {"eps_lower", cert.eps_lower},
         {"eps_gap", cert.eps_gap},
         {"lambda_gap", cert.lambda_gap},
         {"oracle_verified", cert.oracle_verified},
         {"span_dimension", span_dimension(cert.vectors, 1e-6)},
         {"symmetric_input", detail::symmetric(z)}};
  const double identity = std::abs(cert.residual_hs * cert.residual_hs + std::norm(cert.lambda) -
                                   std::pow(hs_norm(z), 2));
  r["pythagoras_error"] = identity;
  if (identity > o.tol * std::max(1.0, std::pow(hs_norm(z), 2))) {
    throw ContractViolation("rank1.pythagoras", "residual^2 + |lambda|^2 differs from HS^2 by " +
                                                    detail::format_double(identity));
  }
  if (r["symmetric_input"].get<bool>()) {
    if (cert.eps_gap <= o.tol) {
      r["structure"] = to_string(rank1_structure_check(z, cert, o.tol));
    } else {
      r["structure"] = "uncertified";
    }
    bool nonsymmetric = span_dimension(cert.vectors, 1e-6) > 1;
    if (z.order() == 2 && f == Field::complex) {
      // A repeated top singular value gives the optimal pair
      // ((u1 + i u2)/sqrt2, conj((v1 + i v2)/sqrt2)).
      Eigen::JacobiSVD<Matrix> svd(unfold(z, 0), Eigen::ComputeThinU | Eigen::ComputeThinV);
      const auto& s = svd.singularValues();
      if (s.size() > 1 && s(0) - s(1) <= 1e-10 * std::max(1.0, s(0))) {
        const Scalar i{0.0, 1.0};
        const Vector u = (svd.matrixU().col(0) + i * svd.matrixU().col(1)) / std::sqrt(2.0);
        const Vector v = (svd.matrixV().col(0) + i * svd.matrixV().col(1)) / std::sqrt(2.0);
        const std::vector<Vector> alt{u, v.conjugate()};
        const Scalar lambda = inner_product(z, elementary(f, alt));
        const std::size_t dim = span_dimension(alt, 1e-6);
        r["alternative_optimum"] = json{{"vectors", detail::vectors_json(alt, f)},
                                        {"lambda", io::detail::scalar_json(lambda, f)},
                                        {"abs_lambda", std::abs(lambda)},
                                        {"span_dimension", dim}};
        if (dim == 2 && std::abs(std::abs(lambda) - cert.eps_lower) <= o.tol) nonsymmetric = true;
      }
    }
    r["nonsymmetric_optimum_found"] = nonsymmetric;
    const auto sym = best_sym_rank1(z, cfg);
    r["sym_rank1"] = json{{"lambda", io::detail::scalar_json(sym.lambda, f)},
                          {"vectors", detail::vectors_json(sym.vectors, f)},
                          {"ratio", sym.ratio},
                          {"residual_hs", sym.residual_hs}};
  }
  if (o.trace) r["iterations"] = cert.iterations;
  return detail::envelope("rank1", std::move(inputs), std::move(r), o);
}

inline json cmd_rank1(const std::string& path, const Options& o) {
  const std::string text = io::read_text(path);
  return cmd_rank1_tensor(io::read_tensor_file(path), o, json{{path, io::digest(text)}});
}

/// Input: {"tensor": <tensor>, "point": [[..], ..]}. Without "point" the best
/// rank-1 vectors of the tensor are used.
inline json cmd_recover_json(const json& in, const Options& o, json inputs = json::object()) {
  if (!in.is_object() || !in.contains("tensor")) throw ParseError("recover input needs a \"tensor\" object");
  const Tensor z = io::tensor_from_json(in["tensor"]);
  std::vector<Vector> x;
  bool searched = false;
  if (in.contains("point")) {
    const auto& p = in["point"];
    if (!p.is_array() || p.size() != z.order()) throw ParseError("\"point\" must hold one vector per slot");
    for (std::size_t i = 0; i < p.size(); ++i) x.push_back(io::vector_from_json(p[i], z.field(), "point[" + std::to_string(i) + "]"));
  } else {
    const auto cert = best_rank1(z, solver_config(o));
    if (cert.eps_gap > o.tol) throw PreconditionError("recover: best rank-1 point is not certified");
    x = cert.vectors;
    searched = true;
  }
  const auto rep = recover_from_rank1(z, x, o.tol);
  const Field f = z.field();
  json r{{"v", io::to_json(rep.v, f)},
         {"w", io::to_json(rep.w, f)},
         {"sign", rep.sign},
         {"parity", to_string(rep.parity)},
         {"lambda", io::detail::scalar_json(rep.lambda, f)},
         {"degenerate", rep.degenerate},
         {"max_value_drift", rep.max_value_drift},
         {"check_error", rep.check_error},
         {"point_from_search", searched},
         {"reconstructed", io::to_json(rep.reconstructed)}};
  if (rep.hs_error_on_span) r["hs_error_on_span"] = *rep.hs_error_on_span;
  if (rep.hs_error_global) r["hs_error_global"] = *rep.hs_error_global;
  if (o.trace) {
    json steps = json::array();
    for (const auto& s : rep.steps) {
      steps.push_back(json{{"stage", s.stage}, {"args", detail::vectors_json(s.args, f)}, {"value", s.value}});
    }
    r["steps"] = std::move(steps);
  }
  return detail::envelope("recover", std::move(inputs), std::move(r), o);
}

inline json cmd_recover(const std::string& path, const Options& o) {
  const std::string text = io::read_text(path);
  return cmd_recover_json(io::parse_json_text(text, path), o, json{{path, io::digest(text)}});
}

inline json cmd_norms_tensor(const Tensor& z, const Options& o, json inputs = json::object()) {
  const auto cfg = solver_config(o);
  const Field f = z.field();
  const std::string which = o.norm.value_or("all");
  if (which != "all") parse_norm_kind(which);
  const bool all = which == "all";
  json r{{"hs", hs_norm(z)}, {"symmetric_input", detail::symmetric(z)}};
  if (all || which == "eps" || which == "injective") {
    const auto lo = injective_norm(z, cfg);
    const auto up = injective_upper(z);
    json e{{"estimate", detail::estimate_json(lo, f, o.trace)}, {"upper", up.value}};
    if (r["symmetric_input"].get<bool>()) {
      const auto b = banach_check(z, cfg);
      e["banach"] = json{{"eps_s", b.eps_s}, {"eps", b.eps}, {"gap", b.gap}, {"oracle_verified", b.oracle_verified}};
    }
    if (lo.value > hs_norm(z) * (1.0 + 1e-12) + 1e-12) {
      throw ContractViolation("norms.sandwich", "eps lower bound exceeds HS");
    }
    r["eps"] = std::move(e);
  }
  if (all || which == "pi" || which == "projective") {
    const auto lo = projective_lower(z, cfg);
    const auto up = projective_upper(z, o.r_max, cfg);
    if (up.value < hs_norm(z) * (1.0 - 1e-12) - 1e-12) {
      throw ContractViolation("norms.sandwich", "pi upper bound is below HS");
    }
    r["pi"] = json{{"lower", detail::estimate_json(lo, f, o.trace)}, {"upper", detail::estimate_json(up, f, o.trace)}};
  }
  return detail::envelope("norms", std::move(inputs), std::move(r), o);
}

inline json cmd_norms(const std::string& path, const Options& o) {
  const std::string text = io::read_text(path);
  return cmd_norms_tensor(io::read_tensor_file(path), o, json{{path, io::digest(text)}});
}

inline json cmd_factor_form(const BinaryForm& p, const Options& o, json inputs = json::object()) {
  const auto factors = factor_binary_form(p, o.seed);
  // Round trip on the coefficients in the canonical basis.
  std::vector<Scalar> prod{Scalar{1.0}};
  json jf = json::array();
  for (const auto& phi : factors) {
    prod = symtensor::detail::multiply_forms(prod, {phi.p, phi.q});
    jf.push_back(json{{"p", io::detail::scalar_json(phi.p, Field::complex)},
                      {"q", io::detail::scalar_json(phi.q, Field::complex)}});
  }
  const BinaryForm canon = p.canonical();
  double err = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < prod.size(); ++k) {
    err = std::max(err, std::abs(prod[k] - canon.coeffs[k]));
    scale = std::max(scale, std::abs(canon.coeffs[k]));
  }
  if (err > o.tol * std::max(1.0, scale)) {
    throw ContractViolation("factor.round_trip", "coefficient error " + detail::format_double(err));
  }
  json r{{"degree", p.degree}, {"factors", std::move(jf)}, {"coefficient_error", err}};
  return detail::envelope("factor", std::move(inputs), std::move(r), o);
}

inline json cmd_factor(const std::string& path, const Options& o) {
  const std::string text = io::read_text(path);
  return cmd_factor_form(io::parse_binary_form(text, path), o, json{{path, io::digest(text)}});
}

/// Packaged constructions with CSV series.
///   border-rank:    n = 1..n_max, gap against the closed form
///   nonuniqueness:  a-grid in [-1, 1], value at the base point and sampled diagonal bound
///   improvement:    random (z, y) pairs, alpha(z - y) - alpha(z - sigma(y))
inline Demo cmd_demo(const std::string& name, const Options& o, std::size_t count = 0) {
  Demo out;
  std::ostringstream csv;
  json r;
  if (name == "border-rank") {
    const std::size_t n_max = count ? count : 100;
    csv << "n,gap_hs,gap_formula,expansion_error\n";
    double worst = 0.0;
    for (std::size_t n = 1; n <= n_max; ++n) {
      const auto b = border_rank_instance(n);
      const double g = border_gap_formula(static_cast<double>(n));
      worst = std::max(worst, std::abs(b.gap_hs - g));
      csv << n << ',' << detail::format_double(b.gap_hs) << ',' << detail::format_double(g) << ','
          << detail::format_double(b.expansion_error) << '\n';
    }
    const auto y = y_rank_lower_bound_check(std::nullopt, o.restarts, 500, o.seed);
    json probes = json::array();
    for (const auto& v : y.probe_values) probes.push_back(io::to_json(v, Field::real));
    r = json{{"n_max", n_max},
             {"max_gap_deviation", worst},
             {"probe_values", std::move(probes)},
             {"probe_rank", y.probe_rank},
             {"als_restarts", y.als_residuals.size()},
             {"als_min_residual", y.als_min_residual}};
  } else if (name == "nonuniqueness") {
    const std::size_t samples = count ? count : 10000;
    const Vector v = basis_vector(3, 0), w = basis_vector(3, 1);
    const Tensor base = explicit_form(v, w, 1, 3);
    const std::vector<Vector> x{v, w, w};
    csv << "a,base_value,max_abs_P\n";
    json rows = json::array();
    for (const double a : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
      const auto fam = non_uniqueness_family(base, x, a);
      Rng rng(sub_seed(o.seed, 0x6e75ULL));
      double worst = 0.0;
      for (std::size_t s = 0; s < samples; ++s) {
        const Vector y = random_unit_vector(rng, Field::real, 3);
        worst = std::max(worst, std::abs(poly_eval(fam.tensor, y)));
      }
      csv << detail::format_double(a) << ',' << detail::format_double(fam.base_value.real()) << ','
          << detail::format_double(worst) << '\n';
      rows.push_back(json{{"a", a}, {"base_value", fam.base_value.real()}, {"max_abs_P", worst}});
    }
    r = json{{"samples", samples}, {"rows", std::move(rows)}};
  } else if (name == "improvement") {
    const std::size_t pairs = count ? count : 20;
    const NormKind kind = parse_norm_kind(o.norm.value_or("hs"));
    csv << "pair,before,after,improvement\n";
    Rng rng(sub_seed(o.seed, 0x696d70ULL));
    double min_improvement = 0.0;
    for (std::size_t i = 0; i < pairs; ++i) {
      const Tensor z = random_symmetric_tensor(rng, Field::real, 3, 3);
      const Tensor y = random_tensor(rng, Field::real, {3, 3, 3});
      const auto a = symmetrize_approximation(z, y, kind, solver_config(o), o.r_max);
      if (i == 0 || a.improvement < min_improvement) min_improvement = a.improvement;
      csv << i << ',' << detail::format_double(a.before) << ',' << detail::format_double(a.after) << ','
          << detail::format_double(a.improvement) << '\n';
    }
    r = json{{"pairs", pairs}, {"norm", to_string(kind)}, {"min_improvement", min_improvement}};
    if (min_improvement < -o.tol) throw ContractViolation("improvement.nonnegative", "negative improvement");
  } else {
    throw PreconditionError("unknown demo \"" + name + "\" (expected border-rank, nonuniqueness or improvement)");
  }
  out.csv = csv.str();
  out.report = detail::envelope("demo", json::object(), std::move(r), o);
  out.report["demo"] = name;
  return out;
}

}  // namespace symtensor::cli
