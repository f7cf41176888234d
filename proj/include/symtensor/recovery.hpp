#pragma once

// Recovering a real symmetric tensor on span{x_1..x_d} from a non-symmetric
// best rank-1 approximation x_1 (x) .. (x) x_d.
//
// Rotations act inside a plane given by an orthonormal pair (q1, q2); the
// orthogonal complement is left untouched.

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "symtensor/decomposition.hpp"
#include "symtensor/linalg.hpp"
#include "symtensor/tensor.hpp"

namespace symtensor {

/// Real multilinear form evaluated on a full argument list.
using FormEval = std::function<double(std::span<const Vector>)>;

inline FormEval form_of(const Tensor& z) {
  if (z.field() != Field::real) throw FieldError("form_of: recovery works over the reals");
  return [z](std::span<const Vector> args) { return multilinear_eval(z, args).real(); };
}

inline double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

struct PlaneRotation {
  enum class Direction { toward_second, away_from_second };

  Vector q1, q2;  // orthonormal
  double angle = 0.0;
  Direction direction = Direction::toward_second;

  /// Plane spanned by x and y, oriented from x toward y.
  static PlaneRotation through(const Vector& x, const Vector& y, double angle, Direction dir, double tol = 1e-12) {
    PlaneRotation r;
    r.q1 = x / x.norm();
    Vector p = y - r.q1 * r.q1.dot(y);
    if (p.norm() <= tol * std::max(1.0, y.norm())) {
      throw PreconditionError("PlaneRotation: vectors are linearly dependent");
    }
    r.q2 = p / p.norm();
    r.angle = angle;
    r.direction = dir;
    return r;
  }

  double signed_angle() const { return direction == Direction::toward_second ? angle : -angle; }

  Vector apply(const Vector& v) const {
    const Scalar a = q1.dot(v);
    const Scalar b = q2.dot(v);
    const double c = std::cos(signed_angle());
    const double s = std::sin(signed_angle());
    return v - (a * q1 + b * q2) + ((a * c - b * s) * q1 + (a * s + b * c) * q2);
  }
};

/// Angle in [0, pi] between unit vectors.
inline double angle_between(const Vector& x, const Vector& y) {
  const double c = std::real(x.dot(y)) / (x.norm() * y.norm());
  return std::acos(std::clamp(c, -1.0, 1.0));
}

/// sum_l C(d, k_l) (-1)^l (v^k_l) v (w^(d-k_l)) with k_l = 2l (even) or 2l+1 (odd).
inline Tensor two_plane_sum(const Vector& v, const Vector& w, std::size_t d, bool odd) {
  const auto n = static_cast<std::size_t>(v.size());
  SymDecomposition s{Field::real, n, d, {}};
  for (std::size_t l = 0;; ++l) {
    const std::size_t k = 2 * l + (odd ? 1 : 0);
    if (k > d) break;
    Term t;
    t.coeff = binomial(d, k) * (l % 2 == 0 ? 1.0 : -1.0);
    for (std::size_t i = 0; i < k; ++i) t.vectors.push_back(v);
    for (std::size_t i = k; i < d; ++i) t.vectors.push_back(w);
    s.terms.push_back(std::move(t));
  }
  return s.densify();
}

/// The symmetric tensor z on span{v, w} having (v^(x)j) (x) (w^(x)(d-j)) as a
/// best rank-1 approximation with <x, z> = 1:
///   j even: (-1)^(j/2)     sum_l C(d,2l)   (-1)^l (v^2l) v (w^(d-2l))
///   j odd:  (-1)^((j-1)/2) sum_l C(d,2l+1) (-1)^l (v^(2l+1)) v (w^(d-2l-1))
inline Tensor explicit_form(const Vector& v, const Vector& w, std::size_t j, std::size_t d, double tol = 1e-10) {
  if (d < 2 || j < 1 || j > d - 1) throw PreconditionError("explicit_form: need 1 <= j <= d-1");
  if (v.size() != w.size()) throw ShapeError("explicit_form: v and w differ in length");
  require_field(Field::real, v);
  require_field(Field::real, w);
  if (std::abs(v.norm() - 1.0) > tol || std::abs(w.norm() - 1.0) > tol || std::abs(v.dot(w)) > tol) {
    throw PreconditionError("explicit_form: v and w must be orthonormal");
  }
  const bool odd = j % 2 == 1;
  const std::size_t half = odd ? (j - 1) / 2 : j / 2;
  const double sign = half % 2 == 0 ? 1.0 : -1.0;
  return Scalar{sign} * two_plane_sum(v, w, d, odd);
}

/// (x + y)/|x + y| and (x - y)/|x - y| for a symmetric bilinear form B of
/// norm one with B(x, y) = 1; B(f1, f1) = 1 and B(f2, f2) = -1.
inline std::pair<Vector, Vector> principal_axes(const FormEval& bilinear, const Vector& x, const Vector& y,
                                                double tol) {
  const Vector xy[2] = {x, y};
  if (span_dimension(std::span<const Vector>(xy, 2), 1e-10) < 2) {
    throw PreconditionError("principal_axes: x and y are linearly dependent");
  }
  const double bxy = bilinear(std::span<const Vector>(xy, 2));
  if (std::abs(bxy - 1.0) > tol) {
    throw PreconditionError("principal_axes: B(x, y) = " + std::to_string(bxy) + ", expected 1");
  }
  const Vector f1 = (x + y) / (x + y).norm();
  const Vector f2 = (x - y) / (x - y).norm();
  const Vector a[2] = {f1, f1};
  const Vector b[2] = {f2, f2};
  const double v1 = bilinear(std::span<const Vector>(a, 2));
  const double v2 = bilinear(std::span<const Vector>(b, 2));
  if (std::abs(f1.dot(f2)) > tol || std::abs(v1 - 1.0) > tol || std::abs(v2 + 1.0) > tol) {
    throw ContractViolation("principal_axes", "B(f1,f1) = " + std::to_string(v1) + ", B(f2,f2) = " +
                                                  std::to_string(v2));
  }
  return {f1, f2};
}

/// Overload for a symmetric order-2 tensor; also checks that its form has norm one.
inline std::pair<Vector, Vector> principal_axes(const Tensor& l, const Vector& x, const Vector& y, double tol) {
  if (l.order() != 2 || !is_symmetric(l, tol)) throw PreconditionError("principal_axes: need a symmetric matrix");
  if (std::abs(spectral_norm(unfold(l, 0)) - 1.0) > tol) throw PreconditionError("principal_axes: form norm is not 1");
  return principal_axes(form_of(l), x, y, tol);
}

/// One recorded value of the tracked form.
struct RotationRecord {
  std::string stage;
  std::vector<Vector> args;
  double value = 0.0;
};

struct RotatedPair {
  Vector x, y;
  double value = 0.0;
  PlaneRotation::Direction direction = PlaneRotation::Direction::toward_second;
};

/// Rotates x by alpha in span{x, y} and y by alpha the opposite way. The
/// pairing that rotates x toward y is tried first, then the reverse; the
/// bilinear value must stay 1 within tol.
inline RotatedPair counter_rotate(const FormEval& bilinear, const Vector& x, const Vector& y, double alpha,
                                  double tol) {
  const Vector xy[2] = {x, y};
  const double before = bilinear(std::span<const Vector>(xy, 2));
  if (std::abs(before - 1.0) > tol) {
    throw PreconditionError("counter_rotate: B(x, y) = " + std::to_string(before) + ", expected 1");
  }
  if (alpha == 0.0) return {x, y, before, PlaneRotation::Direction::toward_second};
  RotatedPair best;
  double best_err = -1.0;
  for (auto dir : {PlaneRotation::Direction::toward_second, PlaneRotation::Direction::away_from_second}) {
    const auto rx = PlaneRotation::through(x, y, alpha, dir);
    auto ry = rx;
    ry.direction = dir == PlaneRotation::Direction::toward_second ? PlaneRotation::Direction::away_from_second
                                                                  : PlaneRotation::Direction::toward_second;
    RotatedPair p{rx.apply(x), ry.apply(y), 0.0, dir};
    const Vector args[2] = {p.x, p.y};
    p.value = bilinear(std::span<const Vector>(args, 2));
    const double err = std::abs(p.value - 1.0);
    if (err <= tol) return p;
    if (best_err < 0.0 || err < best_err) {
      best = p;
      best_err = err;
    }
  }
  throw ContractViolation("counter_rotate.value", "bilinear value drifted to " + std::to_string(best.value));
}

/// For L(x^k, y^l) = 1: rotates x by l*alpha toward y and y by k*alpha the
/// opposite way, through k*l single counter rotations of one x copy and one
/// y copy. The value is checked after every elementary rotation.
inline std::pair<Vector, Vector> multi_counter_rotate(const FormEval& form, const Vector& x, const Vector& y,
                                                      std::size_t k, std::size_t l, double alpha, double tol,
                                                      std::vector<RotationRecord>* log = nullptr,
                                                      const std::string& stage = "rotate") {
  if (k < 1 || l < 1) throw PreconditionError("multi_counter_rotate: k and l must be positive");
  const double theta = angle_between(x, y);
  const double m = static_cast<double>(k + l);
  const double slack = 1e-12;
  if (alpha < (theta - std::numbers::pi) / m - slack || alpha > theta / m + slack) {
    throw PreconditionError("multi_counter_rotate: alpha outside [(theta - pi)/(k+l), theta/(k+l)]");
  }
  std::vector<Vector> args;
  for (std::size_t i = 0; i < k; ++i) args.push_back(x);
  for (std::size_t i = 0; i < l; ++i) args.push_back(y);
  const double v0 = form(args);
  if (std::abs(v0 - 1.0) > tol) {
    throw PreconditionError("multi_counter_rotate: L(x^k, y^l) = " + std::to_string(v0) + ", expected 1");
  }
  if (log) log->push_back({stage, args, v0});
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = k; j < k + l; ++j) {
      const double gap = angle_between(args[i], args[j]);
      if (gap <= 1e-12 || gap >= std::numbers::pi - 1e-12) {
        throw PreconditionError("multi_counter_rotate: rotated copies became collinear");
      }
      FormEval pair = [&, i, j](std::span<const Vector> xy) {
        auto a = args;
        a[i] = xy[0];
        a[j] = xy[1];
        return form(a);
      };
      const auto r = counter_rotate(pair, args[i], args[j], alpha, tol);
      if (r.direction != PlaneRotation::Direction::toward_second) {
        throw ContractViolation("multi_counter_rotate.direction", "only the reversed pairing preserved the value");
      }
      args[i] = r.x;
      args[j] = r.y;
      const double v = form(args);
      if (log) log->push_back({stage, args, v});
      if (std::abs(v - 1.0) > tol) {
        throw ContractViolation("multi_counter_rotate.value", "value drifted to " + std::to_string(v));
      }
    }
  }
  return {args[0], args[k]};
}

struct RecoveryReport {
  enum class Parity { even_j, odd_j };

  Vector v, w;
  int sign = 1;  // L(v^2, w^(d-2)) / lambda
  Parity parity = Parity::even_j;
  Scalar lambda{};
  Tensor reconstructed{Field::real, {1}};
  std::vector<RotationRecord> steps;
  double max_value_drift = 0.0;  // max |value - 1| over all recorded steps
  double check_error = 0.0;      // max deviation of P on sampled directions of span{v, w}
  std::optional<double> hs_error_on_span;
  std::optional<double> hs_error_global;
  bool degenerate = false;  // all x_i collinear: reconstructed is lambda x_1^(x)d
};

inline const char* to_string(RecoveryReport::Parity p) {
  return p == RecoveryReport::Parity::even_j ? "even_j" : "odd_j";
}

/// Projection of z onto (x)^d span{v, w}.
inline Tensor project_to_plane(const Tensor& z, const Vector& v, const Vector& w) {
  Matrix q(v.size(), 2);
  q.col(0) = v;
  q.col(1) = w;
  const Matrix p = q * q.adjoint();
  Tensor t = z;
  for (std::size_t k = 0; k < z.order(); ++k) t = apply_along(t, k, p);
  return cleaned(t);
}

/// Three-step recovery: returns orthonormal (v, w) in span{x_i} and the
/// tensor agreeing with L_z on that plane. `eval` evaluates L_z; `z_hint`,
/// when given, is used to report the reconstruction error.
inline RecoveryReport recover_from_rank1(const std::optional<Tensor>& z_hint, std::vector<Vector> x,
                                         const FormEval& eval, double tol = 1e-8) {
  const std::size_t d = x.size();
  if (d < 2) throw PreconditionError("recover_from_rank1: need at least two vectors");
  for (const auto& xi : x) {
    require_field(Field::real, xi);
    if (xi.size() != x[0].size()) throw ShapeError("recover_from_rank1: vectors differ in length");
    if (xi.norm() == 0.0) throw PreconditionError("recover_from_rank1: zero vector");
  }
  for (auto& xi : x) xi /= xi.norm();
  const auto n = static_cast<std::size_t>(x[0].size());
  const double lambda = eval(x);
  if (std::abs(lambda) <= 1e-14) throw PreconditionError("recover_from_rank1: L_z vanishes at the given point");

  RecoveryReport rep;
  rep.lambda = lambda;
  const std::size_t dim = span_dimension(x, 1e-8);
  if (dim >= 3) throw PreconditionError("recover_from_rank1: vectors span dimension >= 3, not a best rank-1 point");
  if (dim == 1) {
    rep.degenerate = true;
    rep.v = x[0];
    rep.w = Vector::Zero(x[0].size());
    rep.reconstructed = Scalar{lambda} * elementary(Field::real, std::vector<Vector>(d, x[0]));
    if (z_hint) {
      rep.hs_error_on_span = hs_norm(rep.reconstructed - project_to_plane(*z_hint, x[0], rep.w));
    }
    return rep;
  }

  FormEval form = [&](std::span<const Vector> a) { return eval(a) / lambda; };
  auto record = [&](const std::string& stage, const std::vector<Vector>& args) {
    const double v = form(args);
    rep.steps.push_back({stage, args, v});
  };

  // Step I: x_1, x_2 linearly independent.
  {
    std::size_t a = 0, b = 1;
    bool found = false;
    for (a = 0; a < d && !found; ++a) {
      for (b = a + 1; b < d; ++b) {
        const Vector pair[2] = {x[a], x[b]};
        if (span_dimension(std::span<const Vector>(pair, 2), 1e-8) == 2) {
          found = true;
          break;
        }
      }
      if (found) break;
    }
    std::swap(x[0], x[a]);
    std::swap(x[1], x[b]);
    record("step1", x);
  }

  // Step II: merge x_d, x_(d-1), .., x_3 into one vector y.
  Vector y = x[d - 1];
  for (std::size_t m = 1; m + 2 < d; ++m) {
    const std::size_t slot = d - 1 - m;  // the lone vector being merged
    const Vector& xs = x[slot];
    const double c = xs.dot(y).real();
    if (std::abs(std::abs(c) - 1.0) <= 1e-12) {
      if (c < 0.0) x[0] = -x[0];
      x[slot] = y;
    } else {
      FormEval sub = [&, slot, m](std::span<const Vector> a) {
        std::vector<Vector> full(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(slot));
        full.insert(full.end(), a.begin(), a.end());
        return form(full);
      };
      const double theta = angle_between(xs, y);
      const std::size_t first = rep.steps.size();
      const auto r = multi_counter_rotate(sub, xs, y, 1, m, theta / static_cast<double>(m + 1), tol, &rep.steps,
                                          "step2");
      for (std::size_t i = first; i < rep.steps.size(); ++i) {
        rep.steps[i].args.insert(rep.steps[i].args.begin(), x.begin(), x.begin() + static_cast<std::ptrdiff_t>(slot));
      }
      y = (r.first + r.second) / 2.0;
      y /= y.norm();
    }
    for (std::size_t k = slot; k < d; ++k) x[k] = y;
    record("step2", x);
  }
  if (d == 2) y = x[1];

  // Step III: orthonormal (v, w) with L(v^2, w^(d-2)) = +-1.
  Vector v, w;
  int s = 1;
  if (d == 2) {
    FormEval bil = [&](std::span<const Vector> a) { return form(a); };
    const auto [f1, f2] = principal_axes(bil, x[0], x[1], tol);
    v = f1;
    w = f2;
    s = 1;
  } else {
    FormEval bil = [&](std::span<const Vector> a) {
      std::vector<Vector> full(a.begin(), a.end());
      for (std::size_t k = 2; k < d; ++k) full.push_back(y);
      return form(full);
    };
    const auto [f1, f2] = principal_axes(bil, x[0], x[1], tol);
    std::vector<Vector> args{f1, f1};
    for (std::size_t k = 2; k < d; ++k) args.push_back(y);
    record("step3", args);
    if (std::abs(std::abs(f1.dot(y).real()) - 1.0) <= 1e-10) {
      v = f2;
      w = y;
      s = -1;
    } else {
      const double theta = angle_between(f1, y);
      const double alpha = (theta - std::numbers::pi / 2.0) / static_cast<double>(d);
      const auto r = multi_counter_rotate(form, f1, y, 2, d - 2, alpha, tol, &rep.steps, "step3");
      v = r.first;
      w = r.second;
      s = 1;
    }
    std::vector<Vector> fin{v, v};
    for (std::size_t k = 2; k < d; ++k) fin.push_back(w);
    const double val = form(fin);
    rep.steps.push_back({"final", fin, val * s});
    if (std::abs(val - s) > tol) {
      throw ContractViolation("recover_from_rank1.final_value",
                              "L(v^2, w^(d-2)) = " + std::to_string(val) + ", expected " + std::to_string(s));
    }
  }
  if (std::abs(v.dot(w)) > 1e-10) throw ContractViolation("recover_from_rank1.orthonormal", "v and w not orthogonal");

  rep.v = v;
  rep.w = w;
  rep.sign = s;
  rep.parity = RecoveryReport::Parity::even_j;
  rep.reconstructed = cleaned(Scalar{-lambda * s} * two_plane_sum(v, w, d, false));
  for (const auto& st : rep.steps) rep.max_value_drift = std::max(rep.max_value_drift, std::abs(st.value - 1.0));

  // The polynomial on span{v, w} determines the symmetric form there.
  for (std::size_t i = 0; i <= d; ++i) {
    const double t = std::numbers::pi * static_cast<double>(i) / static_cast<double>(d + 1);
    const Vector dir = std::cos(t) * v + std::sin(t) * w;
    const std::vector<Vector> diag(d, dir);
    const double want = eval(diag);
    const double got = multilinear_eval(rep.reconstructed, diag).real();
    rep.check_error = std::max(rep.check_error, std::abs(want - got));
  }
  if (rep.check_error > tol * std::max(1.0, std::abs(lambda))) {
    throw ContractViolation("recover_from_rank1.reconstruction",
                            "reconstructed form differs on span{v, w} by " + std::to_string(rep.check_error));
  }
  if (z_hint) {
    rep.hs_error_on_span = hs_norm(rep.reconstructed - project_to_plane(*z_hint, v, w));
    if (n == 2) rep.hs_error_global = hs_norm(rep.reconstructed - *z_hint);
  }
  return rep;
}

inline RecoveryReport recover_from_rank1(const Tensor& z, std::vector<Vector> x, double tol = 1e-8) {
  return recover_from_rank1(std::optional<Tensor>(z), std::move(x), form_of(z), tol);
}

}  // namespace symtensor
