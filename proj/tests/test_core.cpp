// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/SVD>
#include <gtest/gtest.h>

#include "prcond/core.hpp"
#include "prcond/errors.hpp"
#include "prcond/matrix_io.hpp"
#include "prcond/parallel.hpp"
#include "prcond/rng.hpp"

namespace prcond {
namespace {

constexpr double kPi = std::numbers::pi;

FieldVector random_vector(Field f, Index d, Rng& rng) {
  Eigen::VectorXcd x(d);
  for (Index k = 0; k < d; ++k) x[k] = f == Field::Real ? Complex(rng.normal()) : rng.complex_normal();
  return FieldVector(f, x);
}

// Nuclear norm of the full d x d matrix x x* - y y*, by SVD.
double nuclear_norm_oracle(const FieldVector& x, const FieldVector& y) {
  const Eigen::MatrixXcd m = x.values() * x.values().adjoint() - y.values() * y.values().adjoint();
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues().sum();
}

TEST(HarmonicFrame, ThreeRows) {
  const SensingMatrix e = harmonic_frame(3);
  ASSERT_EQ(e.m(), 3);
  ASSERT_EQ(e.d(), 2);
  EXPECT_NEAR(e(0, 0).real(), 1.0, 1e-15);
  EXPECT_NEAR(e(0, 1).real(), 0.0, 1e-15);
  EXPECT_NEAR(e(1, 0).real(), 0.5, 1e-15);
  EXPECT_NEAR(e(1, 1).real(), std::sqrt(3.0) / 2, 1e-15);
  EXPECT_NEAR(e(2, 0).real(), -0.5, 1e-15);
  EXPECT_NEAR(e(2, 1).real(), std::sqrt(3.0) / 2, 1e-15);
}

TEST(HarmonicFrame, SecondRowOfFour) {
  const SensingMatrix e = harmonic_frame(4);
  EXPECT_NEAR(e(1, 0).real(), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(e(1, 1).real(), std::sqrt(0.5), 1e-15);
}

TEST(HarmonicFrame, GramIsScaledIdentity) {
  for (int m = 3; m <= 64; ++m) {
    const SensingMatrix e = harmonic_frame(m);
    const Eigen::MatrixXcd gram = e.rows().adjoint() * e.rows();
    EXPECT_LE((gram - Eigen::MatrixXcd::Identity(2, 2) * (m / 2.0)).norm(), 1e-12) << m;
  }
}

TEST(HarmonicFrame, RejectsSmallM) {
  EXPECT_THROW(harmonic_frame(2), DomainError);
  EXPECT_THROW(harmonic_frame(0), DomainError);
}

TEST(SensingMatrix, RealRejectsImaginaryParts) {
  SensingMatrix::Storage rows(1, 2);
  rows << Complex(1, 1), 0;
  EXPECT_THROW(SensingMatrix(Field::Real, rows), FieldMismatchError);
}

TEST(SensingMatrix, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(SensingMatrix(Field::Real, SensingMatrix::Storage(0, 2)), DimensionError);
  SensingMatrix::Storage rows(1, 2);
  rows << std::nan(""), 0;
  EXPECT_THROW(SensingMatrix(Field::Real, rows), DomainError);
}

TEST(Gaussian, RealVariance) {
  const SensingMatrix a = sample_gaussian(Field::Real, 250000, 4, {11, 0});
  const double var = a.frobenius_squared() / 1e6;
  EXPECT_GE(var, 0.99);
  EXPECT_LE(var, 1.01);
  EXPECT_EQ(a.rows().imag().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Gaussian, ComplexSecondMoment) {
  const SensingMatrix a = sample_gaussian(Field::Complex, 250000, 4, {12, 0});
  const double e2 = a.frobenius_squared() / 1e6;
  EXPECT_GE(e2, 0.99);
  EXPECT_LE(e2, 1.01);
  // Real and imaginary parts each carry half the variance.
  const double re = a.rows().real().squaredNorm() / 1e6;
  EXPECT_NEAR(re, 0.5, 0.01);
}

TEST(Gaussian, Deterministic) {
  EXPECT_EQ(sample_gaussian(Field::Real, 20, 3, {7, 0}), sample_gaussian(Field::Real, 20, 3, {7, 0}));
  EXPECT_FALSE(sample_gaussian(Field::Real, 20, 3, {7, 0}) == sample_gaussian(Field::Real, 20, 3, {7, 1}));
}

TEST(Rng, ChildStreamsDiffer) {
  const RngSpec root{5, 0};
  EXPECT_FALSE(root.child(0) == root.child(1));
  EXPECT_EQ(root.child(3), root.child(3));
  Rng a(root.child(0));
  Rng b(root.child(1));
  EXPECT_NE(a.next_u64(), b.next_u64());
}

TEST(Rng, UniformRange) {
  Rng rng({1, 2});
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(RandomUnitVector, UnitNormAndField) {
  Rng rng({3, 0});
  for (Field f : {Field::Real, Field::Complex}) {
    for (int i = 0; i < 100; ++i) {
      const FieldVector x = random_unit_vector(f, 5, rng);
      EXPECT_NEAR(x.norm(), 1.0, 1e-14);
      EXPECT_EQ(x.field(), f);
    }
  }
}

TEST(PsiMap, Identity) {
  const SensingMatrix id = SensingMatrix::real(Eigen::Matrix2d::Identity());
  const Eigen::VectorXd y = psi_map(id, FieldVector::real(Eigen::Vector2d(3, 4)));
  EXPECT_NEAR(y[0], 9.0, 1e-14);
  EXPECT_NEAR(y[1], 16.0, 1e-14);
}

TEST(PsiMap, HarmonicThree) {
  const Eigen::VectorXd y = psi_map(harmonic_frame(3), FieldVector::real(Eigen::Vector2d(1, 0)));
  EXPECT_NEAR(y[0], 1.0, 1e-15);
  EXPECT_NEAR(y[1], 0.25, 1e-15);
  EXPECT_NEAR(y[2], 0.25, 1e-15);
}

TEST(PsiMap, FieldAndSizeChecked) {
  const SensingMatrix e = harmonic_frame(3);
  EXPECT_THROW(psi_map(e, FieldVector::complex(Eigen::Vector2cd(1, 0))), FieldMismatchError);
  EXPECT_THROW(psi_map(e, FieldVector::real(Eigen::Vector3d(1, 0, 0))), DimensionError);
}

TEST(PsiMap, PhaseInvariance) {
  Rng rng({21, 0});
  for (int i = 0; i < 1000; ++i) {
    const Field f = i % 2 ? Field::Complex : Field::Real;
    const Index d = 2 + i % 4;
    const SensingMatrix a = sample_gaussian(f, 3 + i % 7, d, {21, static_cast<std::uint64_t>(i + 1)});
    const FieldVector x = random_vector(f, d, rng);
    const Complex c = f == Field::Real ? Complex(i % 4 < 2 ? -1.0 : 1.0) : std::polar(1.0, 2 * kPi * rng.uniform());
    EXPECT_LE((psi_map(a, x.scaled(c)) - psi_map(a, x)).cwiseAbs().maxCoeff(), 1e-12 * (1 + psi_map(a, x).maxCoeff()));
  }
}

TEST(DistH, Examples) {
  const auto e1 = FieldVector::real(Eigen::Vector2d(1, 0));
  const auto e2 = FieldVector::real(Eigen::Vector2d(0, 1));
  const auto diag = FieldVector::real(Eigen::Vector2d(1, 1) / std::sqrt(2.0));
  EXPECT_NEAR(dist_h(e1, e2), 2.0, 1e-14);
  EXPECT_NEAR(dist_h(diag, diag), 0.0, 1e-7);
  EXPECT_NEAR(dist_h(e1, diag), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(nuclear_norm_oracle(e1, diag), std::sqrt(2.0), 1e-12);
}

TEST(DistH, PhaseClassesCollapse) {
  const auto x = FieldVector::complex(Eigen::Vector2cd(Complex(1, 2), Complex(-0.5, 0.3)));
  EXPECT_NEAR(dist_h(x, x.scaled(std::polar(1.0, 1.234))), 0.0, 1e-6);
}

TEST(DistH, ProductMatchesEigenAndSvd) {
  Rng rng({31, 0});
  for (int i = 0; i < 10000; ++i) {
    const Field f = i % 2 ? Field::Complex : Field::Real;
    const Index d = 2 + i % 5;
    const FieldVector x = random_vector(f, d, rng);
    const FieldVector y = random_vector(f, d, rng);
    const double scale = x.squared_norm() + y.squared_norm();
    const double product = dist_h_product(x, y);
    ASSERT_LE(std::abs(product - dist_h_eigen(x, y)), 1e-10 * scale);
    if (i % 20 == 0) {
      ASSERT_LE(std::abs(product - nuclear_norm_oracle(x, y)), 1e-10 * scale);
    }
  }
}

TEST(Polar, Examples) {
  SensingMatrix::Storage rows(2, 2);
  rows << 1, 0, 0, 2;
  const auto real = to_polar(SensingMatrix(Field::Real, rows));
  EXPECT_NEAR(real[0].t, 1.0, 1e-15);
  EXPECT_NEAR(real[0].phi, 0.0, 1e-15);
  EXPECT_NEAR(real[1].t, 2.0, 1e-15);
  EXPECT_NEAR(real[1].phi, kPi / 2, 1e-15);
  EXPECT_EQ(real[1].alpha, 0.0);
  EXPECT_EQ(real[1].beta, 0.0);

  SensingMatrix::Storage c(1, 2);
  c << Complex(0, 1), 0;
  const auto cp = to_polar(SensingMatrix(Field::Complex, c));
  EXPECT_NEAR(cp[0].t, 1.0, 1e-15);
  EXPECT_NEAR(cp[0].phi, 0.0, 1e-15);
  EXPECT_NEAR(cp[0].alpha, kPi / 2, 1e-15);
  EXPECT_EQ(cp[0].beta, 0.0);
}

TEST(Polar, RoundTrip) {
  for (int i = 0; i < 1000; ++i) {
    const Field f = i % 2 ? Field::Complex : Field::Real;
    const SensingMatrix a = sample_gaussian(f, 1 + i % 9, 2, {41, static_cast<std::uint64_t>(i)});
    const auto polar = to_polar(a);
    for (Index j = 0; j < a.m(); ++j) {
      const Eigen::RowVector2cd back = from_polar(polar[static_cast<std::size_t>(j)], f);
      const Eigen::RowVector2cd row = a.rows().row(j);
      const double err = f == Field::Real ? std::min((back - row).norm(), (back + row).norm()) : (back - row).norm();
      ASSERT_LE(err, 1e-12 * (1 + row.norm())) << i << ' ' << j;
    }
  }
}

TEST(UnitPair, ValidatesConstraint) {
  const auto e1 = FieldVector::real(Eigen::Vector2d(1, 0));
  const auto e2 = FieldVector::real(Eigen::Vector2d(0, 1));
  const auto diag = FieldVector::real(Eigen::Vector2d(1, 1) / std::sqrt(2.0));
  EXPECT_NO_THROW(UnitPair(e1, e2, Constraint::Orthogonal));
  EXPECT_THROW(UnitPair(e1, diag, Constraint::Orthogonal), DomainError);
  EXPECT_THROW(UnitPair(e1, diag.scaled(2.0), Constraint::RealInner), DomainError);
  const auto c1 = FieldVector::complex(Eigen::Vector2cd(1, 0));
  const auto ci = FieldVector::complex(Eigen::Vector2cd(Complex(0, 1), 0));
  EXPECT_THROW(UnitPair(c1, ci, Constraint::RealInner), DomainError);
  EXPECT_NO_THROW(UnitPair(c1, ci, Constraint::Free));
}

TEST(MatrixIo, JsonRoundTrip) {
  for (Field f : {Field::Real, Field::Complex}) {
    const SensingMatrix a = sample_gaussian(f, 7, 3, {51, 0});
    std::stringstream buf;
    write_matrix_json(buf, a);
    EXPECT_EQ(read_matrix_json(buf), a);
  }
}

TEST(MatrixIo, CsvRoundTrip) {
  for (Field f : {Field::Real, Field::Complex}) {
    const SensingMatrix a = sample_gaussian(f, 7, 3, {52, 0});
    std::stringstream buf;
    write_matrix_csv(buf, a);
    EXPECT_EQ(read_matrix_csv(buf), a);
  }
}

TEST(MatrixIo, CsvSkipsComments) {
  std::istringstream in("# m=2\nre_1,re_2\n1,0\n# note\n0,1\n");
  const SensingMatrix a = read_matrix_csv(in);
  EXPECT_EQ(a, SensingMatrix::real(Eigen::Matrix2d::Identity()));
}

TEST(MatrixIo, MalformedInputThrows) {
  std::istringstream bad_json("{\"field\": \"real\", \"rows\": [[1, 0], [1]]}");
  EXPECT_THROW(read_matrix_json(bad_json), ParseError);
  std::istringstream not_json("not json");
  EXPECT_THROW(read_matrix_json(not_json), ParseError);
  std::istringstream bad_csv("re_1,re_2\n1,x\n");
  EXPECT_THROW(read_matrix_csv(bad_csv), ParseError);
}

TEST(Parallel, CoversEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; }, 4);
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(Parallel, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(
                   100, [](std::size_t i) { if (i == 37) throw DomainError("boom"); }, 4),
               DomainError);
}

}  // namespace
}  // namespace prcond
