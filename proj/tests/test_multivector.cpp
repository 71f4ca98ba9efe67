#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "clifangle/errors.hpp"
#include "clifangle/multivector.hpp"
#include "support/test_support.hpp"

using clifangle::Multivector;
namespace t = clifangle::testing;

namespace {

constexpr unsigned e1 = 0b001, e2 = 0b010, e3 = 0b100;

Multivector basis(int n, unsigned bits, double c = 1.0) { return Multivector::basis(n, bits, c); }

void expect_mv_near(const Multivector& got, const Multivector& want, double tol = 1e-12) {
  ASSERT_EQ(got.dim(), want.dim());
  for (unsigned k = 0; k < got.size(); ++k) EXPECT_NEAR(got[k], want[k], tol) << "blade " << k;
}

}  // namespace

TEST(Multivector, ConstructionValidates) {
  EXPECT_THROW(Multivector(0), clifangle::Error);
  EXPECT_THROW(Multivector(17), clifangle::Error);
  EXPECT_THROW(Multivector(2, {1.0, 2.0}), clifangle::Error);
  EXPECT_THROW(Multivector(1, {1.0, std::nan("")}), clifangle::Error);
  EXPECT_EQ(Multivector(3).size(), 8u);
  EXPECT_EQ(clifangle::grade_dimension(6, 3), 20u);
  EXPECT_EQ(clifangle::grade_dimension(4, 0), 1u);
}

TEST(Multivector, DimensionMismatchThrows) {
  try {
    (void)(Multivector(2) * Multivector(3));
    FAIL();
  } catch (const clifangle::Error& e) {
    EXPECT_EQ(e.kind(), clifangle::ErrorKind::DimensionMismatch);
  }
  EXPECT_THROW(clifangle::outer_product(Multivector(2), Multivector(3)), clifangle::Error);
  EXPECT_THROW(clifangle::left_contraction(Multivector(2), Multivector(3)), clifangle::Error);
  EXPECT_THROW(clifangle::scalar_product(Multivector(2), Multivector(3)), clifangle::Error);
}

TEST(GeometricProduct, BasisExamples) {
  expect_mv_near(basis(2, e1) * basis(2, e1), Multivector::scalar(2, 1.0));
  expect_mv_near(basis(2, e1) * basis(2, e2), basis(2, e1 | e2));
  // (e1 + e2) e1 = 1 - e1e2
  const Multivector lhs = basis(2, e1) + basis(2, e2);
  const Multivector want = Multivector::scalar(2, 1.0) - basis(2, e1 | e2);
  expect_mv_near(lhs * basis(2, e1), want);
  expect_mv_near(t::oracle_geometric(lhs, basis(2, e1)), want);
}

TEST(GeometricProduct, AllBasisPairsMatchSignTable) {
  for (int n = 1; n <= 5; ++n)
    for (unsigned i = 0; i < (1u << n); ++i)
      for (unsigned j = 0; j < (1u << n); ++j) {
        const auto term = t::brute_force_basis_product(i, j, n);
        expect_mv_near(basis(n, i) * basis(n, j), basis(n, term.bits, term.sign), 0.0);
      }
}

TEST(GeometricProduct, VectorsSplitIntoDotAndWedge) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const Multivector a = t::random_grade(rng, 5, 1);
    const Multivector b = t::random_grade(rng, 5, 1);
    double dot = 0.0;
    for (unsigned k = 0; k < 5; ++k) dot += a[1u << k] * b[1u << k];
    expect_mv_near(a * b, Multivector::scalar(5, dot) + clifangle::outer_product(a, b), 1e-12);
  }
}

TEST(GeometricProduct, MatchesOracleOnRandomMultivectors) {
  std::mt19937_64 rng(2);
  for (int n = 1; n <= 7; ++n) {
    const Multivector a = t::random_multivector(rng, n);
    const Multivector b = t::random_multivector(rng, n);
    EXPECT_LT(t::relative_diff(a * b, t::oracle_geometric(a, b)), 1e-12);
    EXPECT_LT(t::relative_diff(clifangle::outer_product(a, b), t::oracle_outer(a, b)), 1e-12);
    EXPECT_LT(t::relative_diff(clifangle::left_contraction(a, b), t::oracle_left_contraction(a, b)), 1e-12);
  }
}

TEST(GeometricProduct, Associativity) {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 6; ++n)
    for (int trial = 0; trial < 10; ++trial) {
      const Multivector a = t::random_multivector(rng, n);
      const Multivector b = t::random_multivector(rng, n);
      const Multivector c = t::random_multivector(rng, n);
      EXPECT_LT(t::relative_diff((a * b) * c, a * (b * c)), 1e-12);
    }
}

TEST(GeometricProduct, Anticommutation) {
  const int n = 6;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Multivector ei = basis(n, 1u << i), ej = basis(n, 1u << j);
      if (i == j) {
        expect_mv_near(ei * ej, Multivector::scalar(n, 1.0), 0.0);
      } else {
        expect_mv_near(ei * ej, -(ej * ei), 0.0);
      }
    }
}

TEST(OuterProduct, Examples) {
  EXPECT_TRUE(clifangle::outer_product(basis(2, e1), basis(2, e1)).is_zero());
  expect_mv_near(clifangle::outer_product(basis(2, e1), basis(2, e2)), basis(2, e1 | e2));
  const Multivector a = 2.0 * basis(2, e1);
  const Multivector b = 3.0 * basis(2, e2) + basis(2, e1);
  expect_mv_near(clifangle::outer_product(a, b), basis(2, e1 | e2, 6.0));
  expect_mv_near(clifangle::outer_product(a, b), clifangle::grade_projection(a * b, 2));
}

TEST(OuterProduct, AntisymmetricOnVectors) {
  std::mt19937_64 rng(4);
  const Multivector a = t::random_grade(rng, 5, 1);
  const Multivector b = t::random_grade(rng, 5, 1);
  expect_mv_near(clifangle::outer_product(a, b), -clifangle::outer_product(b, a));
  EXPECT_LT(clifangle::outer_product(a, a).max_abs(), 1e-15);
}

TEST(LeftContraction, Examples) {
  expect_mv_near(clifangle::left_contraction(basis(3, e1), basis(3, e1 | e2)), basis(3, e2));
  expect_mv_near(clifangle::left_contraction(basis(3, e1 | e2), basis(3, e1 | e2)), Multivector::scalar(3, -1.0));
  EXPECT_TRUE(clifangle::left_contraction(basis(3, e1 | e2), basis(3, e3)).is_zero());
}

TEST(GradeSelection, ConsistentWithGeometricProduct) {
  std::mt19937_64 rng(5);
  const int n = 6;
  for (int r = 0; r <= n; ++r)
    for (int s = 0; s <= n; ++s) {
      const Multivector a = t::random_grade(rng, n, r);
      const Multivector b = t::random_grade(rng, n, s);
      const Multivector ab = a * b;
      const Multivector outer = r + s <= n ? clifangle::grade_projection(ab, r + s) : Multivector(n);
      EXPECT_LT(t::relative_diff(clifangle::outer_product(a, b), outer), 1e-12) << r << " " << s;
      const Multivector inner = r <= s ? clifangle::grade_projection(ab, s - r) : Multivector(n);
      EXPECT_LT(t::relative_diff(clifangle::left_contraction(a, b), inner), 1e-12) << r << " " << s;
    }
}

TEST(GradeProjection, Examples) {
  const Multivector m = Multivector::scalar(3, 1.0) + basis(3, e1) + basis(3, e1 | e2);
  expect_mv_near(clifangle::grade_projection(m, 1), basis(3, e1));
  EXPECT_TRUE(clifangle::grade_projection(basis(3, e1 | e2 | e3), 2).is_zero());
  EXPECT_THROW(clifangle::grade_projection(m, 4), clifangle::Error);
  EXPECT_THROW(clifangle::grade_projection(m, -1), clifangle::Error);

  std::mt19937_64 rng(6);
  const Multivector x = t::random_multivector(rng, 5);
  Multivector sum(5);
  for (int k = 0; k <= 5; ++k) {
    const Multivector part = clifangle::grade_projection(x, k);
    EXPECT_EQ(clifangle::grade_projection(part, k), part);
    sum += part;
  }
  EXPECT_EQ(sum, x);
}

TEST(Reverse, Examples) {
  expect_mv_near(clifangle::reverse(basis(3, e1 | e2)), -basis(3, e1 | e2));
  const Multivector sv = Multivector::scalar(3, 2.0) + basis(3, e2, -1.5);
  EXPECT_EQ(clifangle::reverse(sv), sv);
  expect_mv_near(clifangle::reverse(basis(3, e1 | e2 | e3)), -basis(3, e1 | e2 | e3));
  // explicit factor reversal: e3 e2 e1
  expect_mv_near(basis(3, e3) * basis(3, e2) * basis(3, e1), -basis(3, e1 | e2 | e3));
}

TEST(Reverse, InvolutionAndAntiAutomorphism) {
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 6; ++n) {
    const Multivector a = t::random_multivector(rng, n);
    const Multivector b = t::random_multivector(rng, n);
    EXPECT_EQ(clifangle::reverse(clifangle::reverse(a)), a);
    EXPECT_LT(t::relative_diff(clifangle::reverse(a * b), clifangle::reverse(b) * clifangle::reverse(a)), 1e-12);
  }
}

TEST(ScalarProduct, Examples) {
  EXPECT_DOUBLE_EQ(clifangle::scalar_product(basis(3, e1 | e2), clifangle::reverse(basis(3, e1 | e2))), 1.0);
  EXPECT_DOUBLE_EQ(clifangle::scalar_product(basis(3, e1), basis(3, e2)), 0.0);
  std::mt19937_64 rng(8);
  for (int n = 1; n <= 6; ++n) {
    const Multivector m = t::random_multivector(rng, n);
    double sum = 0.0;
    for (double c : m.coeffs()) sum += c * c;
    EXPECT_NEAR(clifangle::scalar_product(m, clifangle::reverse(m)), sum, 1e-12 * sum);
    const Multivector other = t::random_multivector(rng, n);
    EXPECT_NEAR(clifangle::scalar_product(m, other), clifangle::scalar_product(other, m), 1e-12 * sum);
    EXPECT_NEAR(clifangle::scalar_product(m, other), (m * other).scalar_part(), 1e-12 * sum);
  }
}

TEST(Modulus, Examples) {
  EXPECT_EQ(clifangle::modulus(Multivector(3)), 0.0);
  EXPECT_DOUBLE_EQ(clifangle::modulus(basis(3, e1 | e2 | e3, 3.0)), 3.0);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Multivector a = t::wedge_all(t::random_span(rng, 6, 3));
    const Multivector b = t::wedge_all(t::random_span(rng, 6, 3));
    const double want = clifangle::modulus(a) * clifangle::modulus(b);
    EXPECT_NEAR(clifangle::modulus(a * clifangle::reverse(b)), want, 1e-12 * want);
  }
}

TEST(Modulus, GradeNorms) {
  const Multivector m = Multivector::scalar(3, 3.0) + basis(3, e1, 4.0) + basis(3, e1 | e3, 2.0);
  const auto norms = clifangle::grade_norms(m);
  ASSERT_EQ(norms.size(), 4u);
  EXPECT_DOUBLE_EQ(norms[0], 3.0);
  EXPECT_DOUBLE_EQ(norms[1], 4.0);
  EXPECT_DOUBLE_EQ(norms[2], 2.0);
  EXPECT_DOUBLE_EQ(norms[3], 0.0);
}

TEST(Dual, SignConvention) {
  const Multivector i3 = Multivector::pseudoscalar(3);
  // i3 i3 = -1 in Cl(3), so the inverse is -i3
  expect_mv_near(i3 * i3, Multivector::scalar(3, -1.0));
  expect_mv_near(clifangle::dual(Multivector::scalar(3, 1.0)), -i3);
  // e1e2 (-e1e2e3) computed by the sign table
  const Multivector want = t::oracle_geometric(basis(3, e1 | e2), -i3);
  expect_mv_near(want, basis(3, e3));
  expect_mv_near(clifangle::dual(basis(3, e1 | e2)), want);
}

TEST(Dual, DoubleDualSign) {
  std::mt19937_64 rng(10);
  for (int n = 1; n <= 8; ++n) {
    const double sign = clifangle::double_dual_sign(n);
    EXPECT_EQ(sign, ((n * (n - 1) / 2) % 2 == 0) ? 1.0 : -1.0);
    const Multivector m = t::random_multivector(rng, n);
    expect_mv_near(clifangle::dual(clifangle::dual(m)), sign * m, 1e-12);
    const Multivector i = Multivector::pseudoscalar(n);
    expect_mv_near(clifangle::dual(m) * i, m, 1e-12);
  }
}

TEST(Reflect, Examples) {
  expect_mv_near(clifangle::reflect(basis(3, e1), basis(3, e1)), -basis(3, e1));
  expect_mv_near(clifangle::reflect(basis(3, e2), basis(3, e1)), basis(3, e2));
  expect_mv_near(clifangle::reflect(basis(3, e1) + basis(3, e2), basis(3, e1)), -basis(3, e1) + basis(3, e2));
  EXPECT_THROW(clifangle::reflect(basis(3, e1), Multivector(3)), clifangle::Error);
  EXPECT_THROW(clifangle::reflect(basis(3, e1 | e2), basis(3, e1)), clifangle::Error);
}

TEST(Reflect, PreservesModulus) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Multivector x = t::random_grade(rng, 6, 1);
    const Multivector a = t::random_grade(rng, 6, 1);
    const Multivector y = clifangle::reflect(x, a);
    EXPECT_NEAR(clifangle::modulus(y), clifangle::modulus(x), 1e-12 * clifangle::modulus(x));
    EXPECT_EQ(clifangle::grade_projection(y, 1), y);
  }
}

TEST(RotorApply, Examples) {
  expect_mv_near(clifangle::rotor_apply(basis(3, e1 | e2), basis(3, e1)), -basis(3, e1));
  std::mt19937_64 rng(12);
  const Multivector x = t::random_multivector(rng, 3);
  expect_mv_near(clifangle::rotor_apply(Multivector::scalar(3, 1.0), x), x);

  const double theta = std::numbers::pi / 2;
  const Multivector r = Multivector::scalar(3, std::cos(theta / 2)) + basis(3, e1 | e2, std::sin(theta / 2));
  expect_mv_near(clifangle::rotor_apply(r, basis(3, e1)), basis(3, e2), 1e-15);
  const double phi = 0.7;
  const Multivector r2 = Multivector::scalar(3, std::cos(phi / 2)) + basis(3, e1 | e2, std::sin(phi / 2));
  expect_mv_near(clifangle::rotor_apply(r2, basis(3, e1)), basis(3, e1, std::cos(phi)) + basis(3, e2, std::sin(phi)),
                 1e-15);
  EXPECT_THROW(clifangle::rotor_apply(Multivector(3), basis(3, e1)), clifangle::Error);
}

TEST(RotorApply, PreservesModulusAndGrade) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const Multivector r = t::random_rotor(rng, 5);
    for (int k = 0; k <= 5; ++k) {
      const Multivector x = t::random_grade(rng, 5, k);
      const Multivector y = clifangle::rotor_apply(r, x);
      EXPECT_NEAR(clifangle::modulus(y), clifangle::modulus(x), 1e-12 * clifangle::modulus(x));
      EXPECT_NEAR(clifangle::grade_norms(y)[k], clifangle::modulus(y), 1e-12 * clifangle::modulus(x));
    }
  }
}

TEST(VersorInverse, InvertsRotors) {
  std::mt19937_64 rng(14);
  const Multivector r = 2.5 * t::random_rotor(rng, 4);
  expect_mv_near(r * clifangle::versor_inverse(r), Multivector::scalar(4, 1.0), 1e-12);
  EXPECT_THROW(clifangle::versor_inverse(Multivector(4)), clifangle::Error);
}

TEST(Multivector, ToString) {
  const Multivector m = Multivector::scalar(3, 1.0) + basis(3, e1, 2.0) - basis(3, e1 | e3, 0.5);
  EXPECT_EQ(clifangle::to_string(m), "1 + 2*e1 - 0.5*e1e3");
  EXPECT_EQ(clifangle::to_string(Multivector(2)), "0");
}
