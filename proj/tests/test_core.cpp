#include <gtest/gtest.h>

#include <algorithm>
#include <array>

#include "symtensor/io.hpp"
#include "symtensor/linalg.hpp"
#include "symtensor/random.hpp"
#include "symtensor/decomposition.hpp"

using namespace symtensor;

namespace {

// Independent 3-slot helpers on raw nested loops.
Scalar entry3(const Tensor& t, std::size_t a, std::size_t b, std::size_t c) {
  const std::array<std::size_t, 3> idx{a, b, c};
  return t.at(idx);
}

Tensor outer3(Field f, const Vector& x, const Vector& y, const Vector& z) {
  Tensor t(f, {static_cast<std::size_t>(x.size()), static_cast<std::size_t>(y.size()), static_cast<std::size_t>(z.size())});
  std::size_t flat = 0;
  for (Eigen::Index a = 0; a < x.size(); ++a)
    for (Eigen::Index b = 0; b < y.size(); ++b)
      for (Eigen::Index c = 0; c < z.size(); ++c) t[flat++] = x[a] * y[b] * z[c];
  return t;
}

// Average over the six permutations of three slots, written out.
Tensor s3_average(const Tensor& x) {
  const std::size_t n = x.dim(0);
  Tensor out(x.field(), x.shape());
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        const Scalar s = entry3(x, a, b, c) + entry3(x, a, c, b) + entry3(x, b, a, c) + entry3(x, b, c, a) +
                         entry3(x, c, a, b) + entry3(x, c, b, a);
        const std::array<std::size_t, 3> idx{a, b, c};
        out.at(idx) = s / 6.0;
      }
  return out;
}

double max_diff(const Tensor& a, const Tensor& b) { return max_abs(a - b); }

}  // namespace

TEST(Tensor, ElementaryMatchesNestedLoops) {
  Rng rng(1);
  for (Field f : {Field::real, Field::complex}) {
    const Vector x = random_vector(rng, f, 2), y = random_vector(rng, f, 3), z = random_vector(rng, f, 4);
    EXPECT_LT(max_diff(elementary(f, {x, y, z}), outer3(f, x, y, z)), 1e-14);
  }
}

TEST(Tensor, RejectsMismatchedData) {
  EXPECT_THROW(Tensor(Field::real, {2, 2}, std::vector<Scalar>(3)), ShapeError);
  EXPECT_THROW(Tensor(Field::real, {2}, {Scalar(0, 1), Scalar(1, 0)}), FieldError);
  Tensor a(Field::real, {2, 2}), b(Field::real, {2, 3});
  EXPECT_THROW(a += b, ShapeError);
}

TEST(Tensor, InnerProductConjugatesSecondArgument) {
  Tensor x(Field::complex, {2}, {Scalar(0, 1), Scalar(1, 0)});
  Tensor y(Field::complex, {2}, {Scalar(0, 1), Scalar(2, 0)});
  // i * conj(i) + 1 * 2 = 1 + 2
  EXPECT_NEAR(std::abs(inner_product(x, y) - Scalar(3, 0)), 0.0, 1e-15);
  EXPECT_NEAR(hs_norm(x), std::sqrt(2.0), 1e-15);
}

TEST(Tensor, SymmetrizeMatchesPermutationAverage) {
  Rng rng(2);
  for (Field f : {Field::real, Field::complex}) {
    const Tensor x = random_tensor(rng, f, {3, 3, 3});
    const Tensor s = symmetrize(x);
    EXPECT_LT(max_diff(s, s3_average(x)), 1e-14);
    EXPECT_TRUE(is_symmetric(s));
    EXPECT_FALSE(is_symmetric(x));
    EXPECT_LT(max_diff(symmetrize(s), s), 1e-14);
  }
}

TEST(Tensor, SymmetrizeIsSelfAdjoint) {
  Rng rng(3);
  const Tensor x = random_tensor(rng, Field::complex, {2, 2, 2, 2});
  const Tensor y = random_tensor(rng, Field::complex, {2, 2, 2, 2});
  EXPECT_LT(std::abs(inner_product(symmetrize(x), y) - inner_product(x, symmetrize(y))), 1e-13);
}

TEST(Tensor, SymmetricInnerProductIdentity) {
  // <z_1 v .. v z_d, x_1 v .. v x_d> = <z_1 (x) .. (x) z_d, x_1 v .. v x_d>
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Field f = trial % 2 ? Field::complex : Field::real;
    std::vector<Vector> z, x;
    for (int k = 0; k < 3; ++k) {
      z.push_back(random_vector(rng, f, 3));
      x.push_back(random_vector(rng, f, 3));
    }
    const Scalar lhs = inner_product(sym_decomposable(f, z), sym_decomposable(f, x));
    const Scalar rhs = inner_product(outer3(f, z[0], z[1], z[2]), s3_average(outer3(f, x[0], x[1], x[2])));
    EXPECT_LT(std::abs(lhs - rhs), 1e-12);
  }
}

TEST(Tensor, ContractAllButMatchesLoops) {
  Rng rng(5);
  const Tensor z = random_tensor(rng, Field::complex, {2, 3, 4});
  const Vector u = random_vector(rng, Field::complex, 2), v = random_vector(rng, Field::complex, 3),
               w = random_vector(rng, Field::complex, 4);
  const std::vector<Vector> args{u, v, w};
  const Vector got = contract_all_but(z, args, 1);
  for (std::size_t b = 0; b < 3; ++b) {
    Scalar s{};
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t c = 0; c < 4; ++c) s += entry3(z, a, b, c) * u[static_cast<Eigen::Index>(a)] * w[static_cast<Eigen::Index>(c)];
    EXPECT_LT(std::abs(got[static_cast<Eigen::Index>(b)] - s), 1e-13);
  }
  // L_z(u, v, w) = sum conj(z[a,b,c]) u_a v_b w_c
  Scalar full{};
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      for (std::size_t c = 0; c < 4; ++c)
        full += std::conj(entry3(z, a, b, c)) * u[static_cast<Eigen::Index>(a)] * v[static_cast<Eigen::Index>(b)] *
                w[static_cast<Eigen::Index>(c)];
  EXPECT_LT(std::abs(multilinear_eval(z, {u, v, w}) - full), 1e-13);
}

TEST(Tensor, UnfoldFoldRoundTrip) {
  Rng rng(6);
  const Tensor z = random_tensor(rng, Field::complex, {2, 3, 4});
  for (std::size_t m = 0; m < 3; ++m) {
    const Matrix u = unfold(z, m);
    EXPECT_EQ(static_cast<std::size_t>(u.rows()), z.dim(m));
    EXPECT_LT(max_diff(fold(u, z.field(), z.shape(), m), z), 1e-15);
  }
  const Matrix a = Matrix::Random(3, 3);
  const Tensor t = apply_along(z, 1, a);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 4; ++k) {
        Scalar s{};
        for (std::size_t b = 0; b < 3; ++b) s += a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(b)) * entry3(z, i, b, k);
        EXPECT_LT(std::abs(entry3(t, i, j, k) - s), 1e-13);
      }
}

TEST(Tensor, SymmetricWedgeHasMatrixRankTwo) {
  // v v w is one decomposable symmetric term but needs two elementary terms.
  const Vector v = real_vector({1, 2, 0}), w = real_vector({0, 1, -1});
  const Tensor s = sym_decomposable(Field::real, {v, w});
  EXPECT_EQ(numerical_rank(unfold(s, 0), 1e-10), 2u);
  EXPECT_EQ(numerical_rank(unfold(elementary(Field::real, {v, w}), 0), 1e-10), 1u);
}

TEST(Decomposition, DensifyAndNuclearSum) {
  CpDecomposition d{Field::real, {2, 2}, {Term{2.0, {real_vector({1, 0}), real_vector({0, 3})}},
                                          Term{-1.0, {real_vector({1, 1}), real_vector({1, 0})}}}};
  const Tensor t = d.densify();
  EXPECT_NEAR(t[1].real(), 6.0, 1e-15);
  EXPECT_NEAR(t[2].real(), -1.0, 1e-15);
  EXPECT_NEAR(d.nuclear_sum(), 2.0 * 3.0 + std::sqrt(2.0), 1e-14);
  const auto s = symmetrize_terms(d);
  EXPECT_LT(max_diff(s.densify(), symmetrize(t)), 1e-14);
}

TEST(Linalg, FlatteningBoundsDominateElementaryValues) {
  Rng rng(7);
  const Tensor z = random_tensor(rng, Field::real, {3, 3, 3});
  const double up = flattening_upper(z);
  EXPECT_LE(up, flattening_mean_upper(z) + 1e-12);
  for (int i = 0; i < 200; ++i) {
    const Vector a = random_unit_vector(rng, Field::real, 3), b = random_unit_vector(rng, Field::real, 3),
                 c = random_unit_vector(rng, Field::real, 3);
    EXPECT_LE(std::abs(inner_product(z, outer3(Field::real, a, b, c))), up + 1e-12);
  }
  EXPECT_LE(up, hs_norm(z) + 1e-12);
}

TEST(Random, SubSeedsAreDeterministicAndDistinct) {
  EXPECT_EQ(sub_seed(42, 3), sub_seed(42, 3));
  EXPECT_NE(sub_seed(42, 3), sub_seed(42, 4));
  Rng a(sub_seed(9, 1)), b(sub_seed(9, 1));
  EXPECT_EQ(random_vector(a, Field::complex, 4), random_vector(b, Field::complex, 4));
}

TEST(Io, TensorJsonRoundTrip) {
  Rng rng(8);
  const Tensor z = random_tensor(rng, Field::complex, {2, 3});
  const Tensor back = io::tensor_from_json(io::parse_json_text(io::to_json(z).dump()));
  EXPECT_EQ(back.shape(), z.shape());
  EXPECT_LT(max_diff(back, z), 1e-15);
}

TEST(Io, TensorJsonErrorsNameTheProblem) {
  try {
    io::tensor_from_json(io::parse_json_text(R"({"field":"real","shape":[2],"data":[1,[0,1]]})"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("data[1]"), std::string::npos);
  }
  try {
    io::parse_json_text("{\n  \"field\": \"real\",\n  oops\n}", "bad.json");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_THROW(io::tensor_from_json(io::parse_json_text(R"({"field":"quaternion","shape":[1],"data":[1]})")),
               ParseError);
}

TEST(Io, BinaryFormTextRoundTrip) {
  const std::string text = "# y1^2 + i y1 y2\n2\n1 0\n0 1\n0 0\n";
  const BinaryForm f = io::parse_binary_form(text);
  EXPECT_EQ(f.degree, 2u);
  Vector2 y(Scalar(0.3, 0.1), Scalar(-0.2, 0.7));
  const Scalar expected = y[0] * y[0] + Scalar(0, 1) * y[0] * y[1];
  EXPECT_LT(std::abs(f(y) - expected), 1e-15);
  const BinaryForm g = io::parse_binary_form(io::format_binary_form(f));
  EXPECT_LT(std::abs(g(y) - expected), 1e-15);
  try {
    io::parse_binary_form("2\n1 0\nx 1\n0 0\n", "f.txt");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("f.txt: line 3"), std::string::npos);
  }
}

TEST(Io, BinaryFormBasisBlock) {
  // Basis {(1,1), (1,-1)}; P = t1 t2 with t the coordinates in that basis.
  const BinaryForm f = io::parse_binary_form("1 0 1 0\n1 0 -1 0\n2\n0 0\n1 0\n0 0\n");
  const Vector2 y(Scalar(2.0), Scalar(0.5));
  // y = t1 (1,1) + t2 (1,-1): t1 = 1.25, t2 = 0.75
  EXPECT_LT(std::abs(f(y) - Scalar(1.25 * 0.75)), 1e-14);
}

TEST(Io, DigestIsStable) {
  EXPECT_EQ(io::digest(""), "cbf29ce484222325");
  EXPECT_EQ(io::digest("abc"), io::digest("abc"));
  EXPECT_NE(io::digest("abc"), io::digest("abd"));
}
