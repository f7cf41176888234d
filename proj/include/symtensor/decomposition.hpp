#pragma once

// Sums of elementary and of decomposable symmetric tensors.

#include <vector>

#include "symtensor/tensor.hpp"

namespace symtensor {

/// coeff * (vectors[0] op .. op vectors[d-1]) with op = (x) or v.
struct Term {
  Scalar coeff{1.0};
  std::vector<Vector> vectors;

  /// coeff times the product of the factor norms.
  double norm_product() const {
    double p = std::abs(coeff);
    for (const auto& v : vectors) p *= v.norm();
    return p;
  }
};

namespace detail {

inline void check_term(const Term& t, Field field, const Shape& shape) {
  if (t.vectors.size() != shape.size()) throw ShapeError("term has the wrong number of vectors");
  for (std::size_t k = 0; k < shape.size(); ++k) {
    if (static_cast<std::size_t>(t.vectors[k].size()) != shape[k]) {
      throw ShapeError("term vector length does not match the shape");
    }
    require_field(field, t.vectors[k]);
  }
  if (field == Field::real && t.coeff.imag() != 0.0) throw FieldError("complex coefficient in a real term");
}

}  // namespace detail

/// z = sum_i coeff_i z_1^i (x) .. (x) z_d^i.
struct CpDecomposition {
  Field field = Field::real;
  Shape shape;
  std::vector<Term> terms;

  void validate() const {
    for (const auto& t : terms) detail::check_term(t, field, shape);
  }

  Tensor densify() const {
    validate();
    Tensor z(field, shape);
    for (const auto& t : terms) z += t.coeff * elementary(field, t.vectors);
    return z;
  }

  /// sum_i |coeff_i| prod_k ||z_k^i||, an upper bound for the projective norm of densify().
  double nuclear_sum() const {
    double s = 0.0;
    for (const auto& t : terms) s += t.norm_product();
    return s;
  }
};

/// z = sum_i coeff_i z_1^i v .. v z_d^i, a symmetric tensor in (x)^d K^n.
struct SymDecomposition {
  Field field = Field::real;
  std::size_t n = 1;
  std::size_t d = 1;
  std::vector<Term> terms;

  void validate() const {
    const Shape shape = cubical_shape(n, d);
    for (const auto& t : terms) detail::check_term(t, field, shape);
  }

  Tensor densify() const {
    validate();
    Tensor z(field, cubical_shape(n, d));
    for (const auto& t : terms) z += t.coeff * sym_decomposable(field, t.vectors);
    return z;
  }
};

/// sigma applied termwise: sigma(sum_i y_1^i (x) .. y_d^i) = sum_i y_1^i v .. v y_d^i.
/// The result never has more terms than the input.
inline SymDecomposition symmetrize_terms(const CpDecomposition& y) {
  if (y.shape.empty()) throw ShapeError("symmetrize_terms: empty shape");
  for (auto n : y.shape) {
    if (n != y.shape[0]) throw ShapeError("symmetrize_terms: shape must be cubical");
  }
  y.validate();
  return SymDecomposition{y.field, y.shape[0], y.shape.size(), y.terms};
}

}  // namespace symtensor
