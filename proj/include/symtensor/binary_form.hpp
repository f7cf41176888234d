#pragma once

// Homogeneous polynomials on C^2 ("binary forms") and linear forms.
//
// A degree-d form is stored by its coefficients in a basis B = {b1, b2}:
//   P(y) = sum_{k=0}^{d} coeffs[k] * t1^(d-k) * t2^k,   y = t1 b1 + t2 b2.

#include <vector>

#include <Eigen/Dense>

#include "symtensor/tensor.hpp"

namespace symtensor {

using Matrix2 = Eigen::Matrix2cd;
using Vector2 = Eigen::Vector2cd;

/// phi(y) = p * y1 + q * y2 in canonical coordinates.
struct LinearForm {
  Scalar p{};
  Scalar q{};

  Scalar operator()(const Vector2& y) const { return p * y[0] + q * y[1]; }
};

namespace detail {

inline Scalar ipow(Scalar x, std::size_t k) {
  Scalar r{1.0};
  for (std::size_t i = 0; i < k; ++i) r *= x;
  return r;
}

using Coeffs = std::vector<Scalar>;

inline Coeffs multiply_forms(const Coeffs& a, const Coeffs& b) {
  Coeffs c(a.size() + b.size() - 1, Scalar{});
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

// Coefficients in u of Q(R u), where Q has coefficients `c` in t and t = R u.
inline Coeffs substitute(const Coeffs& c, const Matrix2& r) {
  const std::size_t d = c.size() - 1;
  const Coeffs l1{r(0, 0), r(0, 1)};
  const Coeffs l2{r(1, 0), r(1, 1)};
  std::vector<Coeffs> pow1{{Scalar{1.0}}}, pow2{{Scalar{1.0}}};
  for (std::size_t k = 1; k <= d; ++k) {
    pow1.push_back(multiply_forms(pow1.back(), l1));
    pow2.push_back(multiply_forms(pow2.back(), l2));
  }
  Coeffs out(d + 1, Scalar{});
  for (std::size_t k = 0; k <= d; ++k) {
    if (c[k] == Scalar{}) continue;
    const Coeffs term = multiply_forms(pow1[d - k], pow2[k]);
    for (std::size_t i = 0; i <= d; ++i) out[i] += c[k] * term[i];
  }
  return out;
}

}  // namespace detail

struct BinaryForm {
  std::size_t degree = 0;
  std::vector<Scalar> coeffs{Scalar{}};
  Matrix2 basis = Matrix2::Identity();

  BinaryForm() = default;

  BinaryForm(std::vector<Scalar> c, Matrix2 b = Matrix2::Identity())
      : degree(c.empty() ? 0 : c.size() - 1), coeffs(std::move(c)), basis(std::move(b)) {
    validate();
  }

  void validate() const {
    if (coeffs.size() != degree + 1) throw ShapeError("binary form needs degree + 1 coefficients");
    if (std::abs(basis.determinant()) < 1e-14) throw PreconditionError("binary form basis is singular");
  }

  /// Coordinates of y in the stored basis.
  Vector2 coordinates(const Vector2& y) const { return basis.fullPivLu().solve(y); }

  Scalar operator()(const Vector2& y) const {
    const Vector2 t = coordinates(y);
    Scalar s{};
    for (std::size_t k = 0; k <= degree; ++k) {
      s += coeffs[k] * detail::ipow(t[0], degree - k) * detail::ipow(t[1], k);
    }
    return s;
  }

  /// Same polynomial, coefficients expressed in the canonical basis.
  BinaryForm canonical() const {
    return BinaryForm(detail::substitute(coeffs, basis.inverse()), Matrix2::Identity());
  }

  /// Same polynomial, coefficients expressed in the basis with columns of `m`.
  BinaryForm in_basis(const Matrix2& m) const {
    // y = m s  and  t = B^{-1} y = (B^{-1} m) s.
    return BinaryForm(detail::substitute(coeffs, basis.inverse() * m), m);
  }

  bool is_zero(double tol = 0.0) const {
    for (const auto& c : coeffs) {
      if (std::abs(c) > tol) return false;
    }
    return true;
  }
};

}  // namespace symtensor
