#pragma once

// Dense tensors over R or C, row-major, and the basic multilinear algebra on
// them: elementary tensors, symmetrization, the Hilbert-Schmidt inner product
// and the multilinear-form / polynomial evaluations L_z and P_z.
//
// Convention: <x, y> = y^* x, i.e. the SECOND argument is conjugated, for
// vectors and tensors alike. With it, L_z(y_1, .., y_d) = <y_1 (x) .. (x) y_d, z>.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "symtensor/error.hpp"

namespace symtensor {

using Scalar = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Shape = std::vector<std::size_t>;

enum class Field { real, complex };

inline const char* to_string(Field f) { return f == Field::real ? "real" : "complex"; }

/// Largest order accepted by operations that enumerate slot permutations.
inline constexpr std::size_t kMaxOrder = 8;

/// Default absolute tolerance for equality checks on unit-scale data.
inline constexpr double kDefaultTol = 1e-10;

namespace detail {

inline std::size_t shape_product(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

inline std::string shape_string(const Shape& shape) {
  std::string s = "[";
  for (std::size_t k = 0; k < shape.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(shape[k]);
  }
  return s + "]";
}

// Advances a row-major multi-index; returns false after the last index.
inline bool next_index(std::vector<std::size_t>& idx, const Shape& shape) {
  for (std::size_t k = shape.size(); k-- > 0;) {
    if (++idx[k] < shape[k]) return true;
    idx[k] = 0;
  }
  return false;
}

}  // namespace detail

/// Order-d dense array over R or C. Entries are stored as complex numbers;
/// real tensors keep every imaginary part at exactly zero.
class Tensor {
public:
  Tensor() : Tensor(Field::real, Shape{1}) {}

  Tensor(Field field, Shape shape) : field_(field), shape_(std::move(shape)) {
    validate_shape();
    data_.assign(detail::shape_product(shape_), Scalar{});
  }

  Tensor(Field field, Shape shape, std::vector<Scalar> data)
      : field_(field), shape_(std::move(shape)), data_(std::move(data)) {
    validate_shape();
    if (data_.size() != detail::shape_product(shape_)) {
      throw ShapeError("data length " + std::to_string(data_.size()) + " does not match shape " +
                       detail::shape_string(shape_));
    }
    if (field_ == Field::real) {
      for (const auto& v : data_) {
        if (v.imag() != 0.0) throw FieldError("real tensor with non-zero imaginary entry");
      }
    }
  }

  Field field() const noexcept { return field_; }
  const Shape& shape() const noexcept { return shape_; }
  std::size_t order() const noexcept { return shape_.size(); }
  std::size_t dim(std::size_t mode) const { return shape_.at(mode); }
  std::size_t size() const noexcept { return data_.size(); }

  bool is_cubical() const {
    return std::all_of(shape_.begin(), shape_.end(), [&](std::size_t n) { return n == shape_[0]; });
  }

  std::span<const Scalar> data() const noexcept { return data_; }
  std::span<Scalar> data() noexcept { return data_; }

  Scalar& operator[](std::size_t flat) { return data_[flat]; }
  const Scalar& operator[](std::size_t flat) const { return data_[flat]; }

  std::size_t flat_index(std::span<const std::size_t> idx) const {
    std::size_t flat = 0;
    for (std::size_t k = 0; k < shape_.size(); ++k) flat = flat * shape_[k] + idx[k];
    return flat;
  }

  Scalar& at(std::span<const std::size_t> idx) { return data_[flat_index(idx)]; }
  const Scalar& at(std::span<const std::size_t> idx) const { return data_[flat_index(idx)]; }

  Tensor& operator+=(const Tensor& other) {
    require_compatible(other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
  }

  Tensor& operator-=(const Tensor& other) {
    require_compatible(other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
  }

  Tensor& operator*=(Scalar s) {
    if (field_ == Field::real && s.imag() != 0.0) throw FieldError("complex scale of a real tensor");
    for (auto& v : data_) v *= s;
    return *this;
  }

  void require_compatible(const Tensor& other) const {
    if (field_ != other.field_) throw FieldError("mixing real and complex tensors");
    if (shape_ != other.shape_) {
      throw ShapeError("shape mismatch " + detail::shape_string(shape_) + " vs " +
                       detail::shape_string(other.shape_));
    }
  }

private:
  void validate_shape() const {
    if (shape_.empty()) throw ShapeError("tensor order must be at least 1");
    for (auto n : shape_) {
      if (n == 0) throw ShapeError("tensor dimensions must be positive");
    }
  }

  Field field_;
  Shape shape_;
  std::vector<Scalar> data_;
};

inline Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
inline Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
inline Tensor operator*(Scalar s, Tensor a) { return a *= s; }
inline Tensor operator*(Tensor a, Scalar s) { return a *= s; }

/// Throws FieldError when a real-field computation receives a complex vector.
inline void require_field(Field field, const Vector& v) {
  if (field == Field::real && v.imag().cwiseAbs().maxCoeff() != 0.0) {
    throw FieldError("complex vector passed to a real-field operation");
  }
}

/// Cubical shape n^d.
inline Shape cubical_shape(std::size_t n, std::size_t d) { return Shape(d, n); }

/// x_1 (x) .. (x) x_d; entry (i_1..i_d) is prod_k x_k[i_k].
inline Tensor elementary(Field field, std::span<const Vector> vectors) {
  if (vectors.empty()) throw PreconditionError("elementary: empty vector list");
  Shape shape;
  for (const auto& v : vectors) {
    require_field(field, v);
    if (v.size() == 0) throw ShapeError("elementary: zero-length vector");
    shape.push_back(static_cast<std::size_t>(v.size()));
  }
  Tensor t(field, shape);
  std::vector<std::size_t> idx(shape.size(), 0);
  std::size_t flat = 0;
  do {
    Scalar p{1.0};
    for (std::size_t k = 0; k < shape.size(); ++k) p *= vectors[k][static_cast<Eigen::Index>(idx[k])];
    t[flat++] = p;
  } while (detail::next_index(idx, shape));
  return t;
}

inline Tensor elementary(Field field, std::initializer_list<Vector> vectors) {
  std::vector<Vector> v(vectors);
  return elementary(field, std::span<const Vector>(v));
}

/// <x, y> = sum_i x[i] conj(y[i]).
inline Scalar inner_product(const Tensor& x, const Tensor& y) {
  x.require_compatible(y);
  Scalar s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
  return s;
}

inline double hs_norm(const Tensor& x) {
  double s = 0.0;
  for (const auto& v : x.data()) s += std::norm(v);
  return std::sqrt(s);
}

/// Largest entry modulus.
inline double max_abs(const Tensor& x) {
  double m = 0.0;
  for (const auto& v : x.data()) m = std::max(m, std::abs(v));
  return m;
}

/// Entrywise l1 norm; an upper bound for the projective norm (one term per entry).
inline double l1_norm(const Tensor& x) {
  double s = 0.0;
  for (const auto& v : x.data()) s += std::abs(v);
  return s;
}

/// Orthogonal projection onto symmetric tensors:
/// sigma(x)[i_1..i_d] = (1/d!) sum_{eta in S_d} x[i_eta(1)..i_eta(d)].
///
/// Every rearrangement of a multi-index is hit by the same number of
/// permutations, so the permutation average equals the plain average of x over
/// the orbit of the index. The orbit sums are accumulated in one pass.
inline Tensor symmetrize(const Tensor& x) {
  if (!x.is_cubical()) throw ShapeError("symmetrize: shape must be cubical n^d");
  const std::size_t d = x.order();
  if (d > kMaxOrder) throw PreconditionError("symmetrize: order above " + std::to_string(kMaxOrder));
  const std::size_t n = x.dim(0);

  // Orbit representative of a multi-index is its sorted version, encoded row-major.
  auto encode_sorted = [&](std::vector<std::size_t> idx) {
    std::sort(idx.begin(), idx.end());
    std::size_t code = 0;
    for (auto i : idx) code = code * n + i;
    return code;
  };

  std::vector<Scalar> orbit_sum(x.size(), Scalar{});
  std::vector<std::size_t> orbit_count(x.size(), 0);
  std::vector<std::size_t> idx(d, 0);
  std::vector<std::size_t> rep(x.size());
  std::size_t flat = 0;
  do {
    const std::size_t code = encode_sorted(idx);
    rep[flat] = code;
    orbit_sum[code] += x[flat];
    ++orbit_count[code];
    ++flat;
  } while (detail::next_index(idx, x.shape()));

  Tensor out(x.field(), x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = orbit_sum[rep[i]] / static_cast<double>(orbit_count[rep[i]]);
  }
  return out;
}

/// x_1 v .. v x_d = sigma(x_1 (x) .. (x) x_d).
inline Tensor sym_decomposable(Field field, std::span<const Vector> vectors) {
  if (vectors.empty()) throw PreconditionError("sym_decomposable: empty vector list");
  for (const auto& v : vectors) {
    if (v.size() != vectors[0].size()) throw ShapeError("sym_decomposable: vectors of different length");
  }
  return symmetrize(elementary(field, vectors));
}

inline Tensor sym_decomposable(Field field, std::initializer_list<Vector> vectors) {
  std::vector<Vector> v(vectors);
  return sym_decomposable(field, std::span<const Vector>(v));
}

/// True iff the tensor is cubical and every entry moves by at most `tol`
/// under every transposition of two slots.
inline bool is_symmetric(const Tensor& x, double tol = kDefaultTol) {
  if (!x.is_cubical()) return false;
  const std::size_t d = x.order();
  std::vector<std::size_t> idx(d, 0);
  std::size_t flat = 0;
  do {
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = a + 1; b < d; ++b) {
        if (idx[a] == idx[b]) continue;
        auto swapped = idx;
        std::swap(swapped[a], swapped[b]);
        if (std::abs(x[flat] - x.at(swapped)) > tol) return false;
      }
    }
    ++flat;
  } while (detail::next_index(idx, x.shape()));
  return true;
}

/// c[j] = sum over multi-indices with i_skip = j of z[i] * prod_{k != skip} w_k[i_k].
/// `w` holds one vector per slot; w[skip] is ignored.
inline Vector contract_all_but(const Tensor& z, std::span<const Vector> w, std::size_t skip) {
  const auto& shape = z.shape();
  Vector c = Vector::Zero(static_cast<Eigen::Index>(shape[skip]));
  std::vector<std::size_t> idx(shape.size(), 0);
  std::size_t flat = 0;
  do {
    Scalar p = z[flat++];
    for (std::size_t k = 0; k < shape.size(); ++k) {
      if (k != skip) p *= w[k][static_cast<Eigen::Index>(idx[k])];
    }
    c[static_cast<Eigen::Index>(idx[skip])] += p;
  } while (detail::next_index(idx, shape));
  return c;
}

/// Checks that `args` has one vector per slot with matching lengths.
inline void require_args(const Tensor& z, std::span<const Vector> args) {
  if (args.size() != z.order()) {
    throw ShapeError("expected " + std::to_string(z.order()) + " arguments, got " +
                     std::to_string(args.size()));
  }
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (static_cast<std::size_t>(args[k].size()) != z.dim(k)) {
      throw ShapeError("argument " + std::to_string(k) + " has length " +
                       std::to_string(args[k].size()) + ", slot dimension is " +
                       std::to_string(z.dim(k)));
    }
    require_field(z.field(), args[k]);
  }
}

/// L_z(y_1, .., y_d) = <y_1 (x) .. (x) y_d, z> = sum_i conj(z[i]) prod_k y_k[i_k].
inline Scalar multilinear_eval(const Tensor& z, std::span<const Vector> args) {
  require_args(z, args);
  const auto& shape = z.shape();
  std::vector<std::size_t> idx(shape.size(), 0);
  Scalar s{};
  std::size_t flat = 0;
  do {
    Scalar p = std::conj(z[flat++]);
    for (std::size_t k = 0; k < shape.size(); ++k) p *= args[k][static_cast<Eigen::Index>(idx[k])];
    s += p;
  } while (detail::next_index(idx, shape));
  return s;
}

inline Scalar multilinear_eval(const Tensor& z, std::initializer_list<Vector> args) {
  std::vector<Vector> v(args);
  return multilinear_eval(z, std::span<const Vector>(v));
}

/// P_u(y) = L_u(y, .., y) for symmetric u.
inline Scalar poly_eval(const Tensor& u, const Vector& y, double tol = kDefaultTol) {
  if (!is_symmetric(u, tol)) throw PreconditionError("poly_eval: tensor is not symmetric");
  std::vector<Vector> args(u.order(), y);
  return multilinear_eval(u, std::span<const Vector>(args));
}

/// Mode-k matricization: rows indexed by slot k, columns by the remaining
/// slots in row-major order.
inline Matrix unfold(const Tensor& z, std::size_t mode) {
  const auto& shape = z.shape();
  const auto rows = static_cast<Eigen::Index>(shape.at(mode));
  const auto cols = static_cast<Eigen::Index>(z.size() / shape[mode]);
  Matrix m(rows, cols);
  std::vector<std::size_t> idx(shape.size(), 0);
  std::size_t flat = 0;
  do {
    std::size_t col = 0;
    for (std::size_t k = 0; k < shape.size(); ++k) {
      if (k != mode) col = col * shape[k] + idx[k];
    }
    m(static_cast<Eigen::Index>(idx[mode]), static_cast<Eigen::Index>(col)) = z[flat++];
  } while (detail::next_index(idx, shape));
  return m;
}

/// Inverse of `unfold`.
inline Tensor fold(const Matrix& m, Field field, const Shape& shape, std::size_t mode) {
  Tensor z(field, shape);
  std::vector<std::size_t> idx(shape.size(), 0);
  std::size_t flat = 0;
  do {
    std::size_t col = 0;
    for (std::size_t k = 0; k < shape.size(); ++k) {
      if (k != mode) col = col * shape[k] + idx[k];
    }
    Scalar v = m(static_cast<Eigen::Index>(idx[mode]), static_cast<Eigen::Index>(col));
    if (field == Field::real) v = Scalar(v.real(), 0.0);
    z[flat++] = v;
  } while (detail::next_index(idx, shape));
  return z;
}

/// Applies the matrix `a` along slot `mode`: result = a acting on that index.
inline Tensor apply_along(const Tensor& z, std::size_t mode, const Matrix& a) {
  if (static_cast<std::size_t>(a.cols()) != z.dim(mode)) throw ShapeError("apply_along: size mismatch");
  Shape shape = z.shape();
  shape[mode] = static_cast<std::size_t>(a.rows());
  return fold(a * unfold(z, mode), z.field(), shape, mode);
}

/// Entries with modulus below `eps` are set to zero; imaginary parts of real
/// tensors are dropped.
inline Tensor cleaned(Tensor z, double eps = 0.0) {
  for (auto& v : z.data()) {
    if (z.field() == Field::real) v = Scalar(v.real(), 0.0);
    if (std::abs(v) < eps) v = Scalar{};
  }
  return z;
}

/// e_k in K^n (0-based k).
inline Vector basis_vector(std::size_t n, std::size_t k) {
  Vector e = Vector::Zero(static_cast<Eigen::Index>(n));
  e[static_cast<Eigen::Index>(k)] = 1.0;
  return e;
}

/// Real vector from a list of doubles.
inline Vector real_vector(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

}  // namespace symtensor
