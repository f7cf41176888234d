#include <gtest/gtest.h>

#include "symtensor/rank1.hpp"
#include "symtensor/recovery.hpp"

using namespace symtensor;

namespace {

SolverConfig cfg_with(std::uint64_t seed) {
  SolverConfig c;
  c.seed = seed;
  return c;
}

// HS(z - lambda x_1 (x) .. (x) x_d) computed entry by entry.
double residual_by_loops(const Tensor& z, Scalar lambda, const std::vector<Vector>& x) {
  std::vector<std::size_t> idx(z.order(), 0);
  double s = 0.0;
  std::size_t flat = 0;
  do {
    Scalar p = lambda;
    for (std::size_t k = 0; k < x.size(); ++k) p *= x[k][static_cast<Eigen::Index>(idx[k])];
    s += std::norm(z[flat++] - p);
  } while (detail::next_index(idx, z.shape()));
  return std::sqrt(s);
}

}  // namespace

TEST(BestRank1, CertificateIdentities) {
  Rng rng(21);
  for (int i = 0; i < 10; ++i) {
    const Field f = i % 2 ? Field::complex : Field::real;
    const Shape shape = i % 3 == 0 ? Shape{3, 3} : (i % 3 == 1 ? Shape{2, 3, 4} : Shape{2, 2, 2, 2});
    const Tensor z = random_tensor(rng, f, shape);
    const auto c = best_rank1(z, cfg_with(static_cast<std::uint64_t>(i)));
    const double res = residual_by_loops(z, c.lambda, c.vectors);
    EXPECT_NEAR(res, c.residual_hs, 1e-10);
    EXPECT_NEAR(res * res + std::norm(c.lambda), std::pow(hs_norm(z), 2), 1e-8);
    for (const auto& v : c.vectors) EXPECT_NEAR(v.norm(), 1.0, 1e-12);
    EXPECT_LE(c.lambda_gap, 1e-10);
  }
}

TEST(BestRank1, ElementaryTensorIsRecoveredExactly) {
  const Vector a = real_vector({1, -2}), b = real_vector({2, 0, 1});
  const Tensor z = Scalar{3.0} * elementary(Field::real, {a / a.norm(), b / b.norm()});
  const auto c = best_rank1(z, {});
  EXPECT_NEAR(std::abs(c.lambda), 3.0, 1e-12);
  EXPECT_LT(c.residual_hs, 1e-10);
  EXPECT_TRUE(c.oracle_verified);
}

TEST(BestRank1, NonSymmetricOptimumOfComplexIdentity) {
  const Tensor z = elementary(Field::complex, {basis_vector(2, 0), basis_vector(2, 0)}) +
                   elementary(Field::complex, {basis_vector(2, 1), basis_vector(2, 1)});
  const auto c = best_rank1(z, {});
  EXPECT_NEAR(std::abs(c.lambda), 1.0, 1e-8);
  const double r = 1.0 / std::sqrt(2.0);
  Vector x(2), y(2);
  x << r, Scalar(0, r);
  y << r, Scalar(0, -r);
  const Scalar lambda = inner_product(z, elementary(Field::complex, {x, y}));
  EXPECT_NEAR(std::abs(lambda), c.eps_lower, 1e-8);
  EXPECT_NEAR(std::pow(residual_by_loops(z, lambda, {x, y}), 2) + std::norm(lambda), 2.0, 1e-12);
  EXPECT_EQ(span_dimension(std::vector<Vector>{x, y}, 1e-8), 2u);
}

TEST(Structure, RealSymmetricOptimaSpanAtMostAPlane) {
  Rng rng(22);
  for (int i = 0; i < 6; ++i) {
    const Tensor z = random_symmetric_tensor(rng, Field::real, i < 3 ? 3 : 2, i < 3 ? 3 : 4);
    const auto c = best_rank1(z, cfg_with(static_cast<std::uint64_t>(i)));
    ASSERT_TRUE(c.oracle_verified);
    EXPECT_NE(rank1_structure_check(z, c, 1e-6), Rank1Structure::violation);
  }
}

TEST(Structure, ComplexSymmetricOptimaAreCollinear) {
  Rng rng(23);
  for (int i = 0; i < 4; ++i) {
    const Tensor z = random_symmetric_tensor(rng, Field::complex, i < 2 ? 3 : 2, i < 2 ? 3 : 4);
    const auto c = best_rank1(z, cfg_with(static_cast<std::uint64_t>(i)));
    ASSERT_TRUE(c.oracle_verified);
    EXPECT_EQ(rank1_structure_check(z, c, 1e-6), Rank1Structure::collinear);
  }
}

TEST(Structure, RejectsNonSymmetricInput) {
  Rng rng(24);
  const Tensor z = random_tensor(rng, Field::real, {2, 2, 2});
  EXPECT_THROW(rank1_structure_check(z, best_rank1(z, {}), 1e-6), PreconditionError);
}

TEST(SymRank1, ExactOnDecomposableSymmetricTensors) {
  const Tensor z = sym_decomposable(Field::real, {basis_vector(2, 0), basis_vector(2, 1)});
  EXPECT_LT(best_sym_rank1(z, {}).residual_hs, 1e-10);
  Rng rng(25);
  for (int i = 0; i < 3; ++i) {
    std::vector<Vector> v;
    for (int k = 0; k < 3; ++k) v.push_back(random_vector(rng, Field::complex, 3));
    const Tensor t = sym_decomposable(Field::complex, v);
    const auto c = best_sym_rank1(t, cfg_with(static_cast<std::uint64_t>(i)));
    EXPECT_LT(c.residual_hs, 1e-8 * std::max(1.0, hs_norm(t)));
  }
}

TEST(SymRank1, RatioDominatesSampledDirections) {
  Rng rng(26);
  const Tensor z = random_symmetric_tensor(rng, Field::real, 3, 3);
  const auto c = best_sym_rank1(z, {});
  EXPECT_NEAR(c.residual_hs * c.residual_hs, std::pow(hs_norm(z), 2) - c.ratio * c.ratio, 1e-8);
  for (int i = 0; i < 500; ++i) {
    std::vector<Vector> v;
    for (int k = 0; k < 3; ++k) v.push_back(random_unit_vector(rng, Field::real, 3));
    const Tensor s = sym_decomposable(Field::real, v);
    EXPECT_LE(std::abs(inner_product(z, s)) / hs_norm(s), c.ratio + 1e-9);
  }
}

TEST(NonUniqueness, FamilyKeepsValueAndNormBound) {
  const Vector v = basis_vector(3, 0), w = basis_vector(3, 1);
  const Tensor base = explicit_form(v, w, 1, 3);
  const std::vector<Vector> x{v, w, w};
  ASSERT_NEAR(std::abs(multilinear_eval(base, x)), 1.0, 1e-12);
  Rng rng(27);
  for (double a : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    const auto fam = non_uniqueness_family(base, x, a);
    EXPECT_NEAR(std::abs(fam.base_value - multilinear_eval(base, x)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(fam.w.dot(v)) + std::abs(fam.w.dot(w)), 0.0, 1e-12);
    for (int s = 0; s < 2000; ++s) {
      const Vector y = random_unit_vector(rng, Field::real, 3);
      EXPECT_LE(std::abs(poly_eval(fam.tensor, y)), 1.0 + 1e-12);
    }
  }
}

TEST(NonUniqueness, RejectsBadParameters) {
  const Vector v = basis_vector(3, 0), w = basis_vector(3, 1);
  const Tensor base = explicit_form(v, w, 1, 3);
  const std::vector<Vector> x{v, w, w};
  EXPECT_THROW(non_uniqueness_family(base, x, 1.5), PreconditionError);
  const Tensor small = explicit_form(basis_vector(2, 0), basis_vector(2, 1), 1, 3);
  EXPECT_THROW(non_uniqueness_family(small, std::vector<Vector>{basis_vector(2, 0), basis_vector(2, 1), basis_vector(2, 1)}, 0.5),
               PreconditionError);
}
