// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "prcond/closedform.hpp"
#include "prcond/errors.hpp"
#include "prcond/lipschitz.hpp"
#include "prcond/rng.hpp"

namespace prcond {
namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt3 = std::sqrt(3.0);

OptimizerConfig no_grid() {
  OptimizerConfig cfg;
  cfg.use_grid_oracle = false;
  return cfg;
}

FieldVector unit(double t) { return FieldVector::real(Eigen::Vector2d(std::cos(t), std::sin(t))); }

// Brute force over (theta_u, theta_v) for a real d = 2 matrix: a coarse sweep
// followed by repeated local zooms around the incumbent.
double brute_lower_real(const SensingMatrix& a, int p) {
  constexpr int n = 720;
  double best = 1e300;
  double bu = 0.0;
  double bv = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double tu = kPi * i / n;
      const double tv = kPi * j / n;
      const double f = lower_objective(a, p, unit(tu), unit(tv));
      if (f < best) {
        best = f;
        bu = tu;
        bv = tv;
      }
    }
  }
  double h = kPi / n;
  for (int round = 0; round < 12; ++round) {
    const double cu = bu;
    const double cv = bv;
    for (int i = -20; i <= 20; ++i) {
      for (int j = -20; j <= 20; ++j) {
        const double tu = cu + h * i / 10;
        const double tv = cv + h * j / 10;
        const double f = lower_objective(a, p, unit(tu), unit(tv));
        if (f < best) {
          best = f;
          bu = tu;
          bv = tv;
        }
      }
    }
    h /= 5;
  }
  return best;
}

double brute_upper_real(const SensingMatrix& a, int p) {
  constexpr int n = 20000;
  double best = 0.0;
  double bt = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = kPi * i / n;
    const double f = upper_objective(a, p, unit(t));
    if (f > best) {
      best = f;
      bt = t;
    }
  }
  double h = kPi / n;
  for (int round = 0; round < 10; ++round) {
    const double c = bt;
    for (int i = -20; i <= 20; ++i) {
      const double f = upper_objective(a, p, unit(c + h * i / 10));
      if (f > best) {
        best = f;
        bt = c + h * i / 10;
      }
    }
    h /= 5;
  }
  return best;
}

TEST(Upper, Examples) {
  for (int m = 3; m <= 12; ++m) {
    EXPECT_NEAR(upper_lipschitz(harmonic_frame(m), 2).value, std::sqrt(3.0 * m / 8), 1e-9) << m;
  }
  EXPECT_NEAR(upper_lipschitz(harmonic_frame(4), 2).value, 1.2247448714, 1e-9);
  const SensingMatrix id = SensingMatrix::real(Eigen::Matrix2d::Identity());
  const auto u = upper_lipschitz(id, 1);
  EXPECT_NEAR(u.value, 1.0, 1e-12);
  EXPECT_EQ(u.method, Method::ClosedForm);
  EXPECT_NEAR(upper_lipschitz(harmonic_frame(6), 1).value, 3.0, 1e-12);
}

TEST(Upper, WitnessReproducesValue) {
  for (Field f : {Field::Real, Field::Complex}) {
    for (int p : {1, 2}) {
      const SensingMatrix a = sample_gaussian(f, 12, 3, {61, static_cast<std::uint64_t>(p)});
      const auto est = upper_lipschitz(a, p);
      EXPECT_NEAR(est.vector().norm(), 1.0, 1e-12);
      EXPECT_NEAR(upper_objective(a, p, est.vector()), est.value, 1e-10 * est.value);
    }
  }
}

TEST(Lower, HarmonicExamples) {
  for (int m = 3; m <= 12; ++m) {
    EXPECT_NEAR(lower_lipschitz(harmonic_frame(m), 2, no_grid()).value, std::sqrt(m / 8.0), 1e-9) << m;
  }
  EXPECT_NEAR(lower_lipschitz(harmonic_frame(4), 2).value, 0.7071067812, 1e-9);
  EXPECT_NEAR(lower_lipschitz(harmonic_frame(3), 1, no_grid()).value, 0.75, 1e-9);
  EXPECT_NEAR(lower_lipschitz(harmonic_frame(4), 1, no_grid()).value, 1.0, 1e-9);
}

TEST(Lower, ZeroColumn) {
  Eigen::MatrixXd rows(4, 2);
  rows << 1, 0, 2, 0, -0.5, 0, 3, 0;
  const auto est = lower_lipschitz(SensingMatrix::real(rows), 2);
  EXPECT_NEAR(est.value, 0.0, 1e-10);
}

TEST(Orthogonal, Examples) {
  EXPECT_NEAR(orthogonal_lower_bound(harmonic_frame(3), 1, no_grid()).value, kSqrt3 / 2, 1e-9);
  EXPECT_NEAR(orthogonal_lower_bound(harmonic_frame(6), 1, no_grid()).value, kSqrt3, 1e-9);
  for (int m = 3; m <= 9; ++m) {
    const SensingMatrix e = harmonic_frame(m);
    EXPECT_NEAR(orthogonal_lower_bound(e, 2).value, lower_lipschitz(e, 2).value, 1e-8) << m;
  }
  EXPECT_THROW(orthogonal_lower_bound(SensingMatrix::real(Eigen::MatrixXd::Ones(3, 1)), 2), DimensionError);
}

TEST(Lower, MatchesRealBruteForce) {
  for (int i = 0; i < 6; ++i) {
    const int p = 1 + i % 2;
    const SensingMatrix a = sample_gaussian(Field::Real, 3 + i, 2, {71, static_cast<std::uint64_t>(i)});
    const double brute = brute_lower_real(a, p);
    const double opt = lower_lipschitz(a, p, no_grid()).value;
    EXPECT_NEAR(opt, brute, 1e-7 * a.frobenius_squared()) << i;
    EXPECT_NEAR(upper_lipschitz(a, p, no_grid()).value, brute_upper_real(a, p), 1e-9 * a.frobenius_squared());
  }
}

TEST(Lower, WitnessFeasibility) {
  for (Field f : {Field::Real, Field::Complex}) {
    for (int p : {1, 2}) {
      for (int d : {2, 3}) {
        const SensingMatrix a = sample_gaussian(f, 4 * d, d, {81, static_cast<std::uint64_t>(10 * p + d)});
        for (Constraint c : {Constraint::RealInner, Constraint::Orthogonal}) {
          const auto est = c == Constraint::RealInner ? lower_lipschitz(a, p) : orthogonal_lower_bound(a, p);
          const UnitPair& w = est.pair();
          EXPECT_EQ(w.constraint(), c);
          EXPECT_NEAR(w.u().norm(), 1.0, 1e-10);
          EXPECT_NEAR(w.v().norm(), 1.0, 1e-10);
          const Complex ip = inner(w.u(), w.v());
          EXPECT_LE(std::abs(ip.imag()), 1e-10);
          if (c == Constraint::Orthogonal) {
            EXPECT_LE(std::abs(ip), 1e-10);
          }
          EXPECT_NEAR(lower_objective(a, p, w.u(), w.v()), est.value, 1e-10 * a.frobenius_squared());
        }
      }
    }
  }
}

TEST(Condition, HarmonicL2) {
  for (int m = 3; m <= 12; ++m) {
    const auto rep = condition_number(harmonic_frame(m), 2);
    EXPECT_NEAR(rep.beta, kSqrt3, 1e-6) << m;
    EXPECT_FALSE(rep.no_phase_retrieval_suspected);
  }
}

TEST(Condition, HarmonicL1) {
  const auto rep = condition_number(harmonic_frame(3), 1);
  EXPECT_NEAR(rep.beta, 2.0, 1e-8);
  EXPECT_NEAR(rep.theoretical_lower_bound, kSqrt3, 1e-12);
}

TEST(Condition, IdentityFlagged) {
  const auto rep = condition_number(SensingMatrix::real(Eigen::Matrix2d::Identity()), 2);
  EXPECT_TRUE(rep.no_phase_retrieval_suspected);
  EXPECT_TRUE(std::isinf(rep.beta));
}

TEST(Condition, OneDimensional) {
  const auto rep = condition_number(SensingMatrix::real(Eigen::MatrixXd::Constant(3, 1, 2.0)), 2);
  EXPECT_NEAR(rep.beta, 1.0, 1e-12);
  EXPECT_EQ(rep.theoretical_lower_bound, 1.0);
}

TEST(Condition, RejectsBadConfig) {
  const SensingMatrix e = harmonic_frame(3);
  EXPECT_THROW(condition_number(e, 3), DomainError);
  OptimizerConfig cfg;
  cfg.starts = 0;
  EXPECT_THROW(condition_number(e, 2, cfg), DomainError);
  cfg = {};
  cfg.grid.resolution = 4;
  EXPECT_THROW(condition_number(e, 2, cfg), DomainError);
  EXPECT_THROW(condition_number(SensingMatrix::real(Eigen::MatrixXd::Zero(3, 2)), 2), DomainError);
}

TEST(Condition, Sandwich) {
  for (Field f : {Field::Real, Field::Complex}) {
    for (int p : {1, 2}) {
      for (int d : {2, 3}) {
        const SensingMatrix a = sample_gaussian(f, 3 * d, d, {91, static_cast<std::uint64_t>(10 * p + d)});
        const auto rep = condition_number(a, p);
        const double m_a = orthogonal_lower_bound(a, p).value;
        EXPECT_LE(rep.L, m_a * (1 + 1e-8));
        EXPECT_LE(rep.L, rep.U);
      }
    }
  }
}

TEST(Condition, ScalingCovariance) {
  for (Field f : {Field::Real, Field::Complex}) {
    for (int p : {1, 2}) {
      const SensingMatrix a = sample_gaussian(f, 8, 3, {101, static_cast<std::uint64_t>(p)});
      const auto base = condition_number(a, p);
      for (double c : {0.5, 3.0}) {
        const auto scaled = condition_number(a.scaled(c), p);
        EXPECT_NEAR(scaled.L, c * c * base.L, 1e-8 * c * c * base.L);
        EXPECT_NEAR(scaled.U, c * c * base.U, 1e-8 * c * c * base.U);
        EXPECT_NEAR(scaled.beta, base.beta, 1e-8 * base.beta);
      }
    }
  }
}

TEST(Condition, UniversalBounds) {
  for (Field f : {Field::Real, Field::Complex}) {
    for (int p : {1, 2}) {
      for (int i = 0; i < 24; ++i) {
        const int d = 2 + i % 2;
        const int m = 2 * d - 1 + i % (8 * d + 2);
        const SensingMatrix a = sample_gaussian(f, m, d, {111, static_cast<std::uint64_t>(100 * p + i)});
        const auto rep = condition_number(a, p);
        if (rep.no_phase_retrieval_suspected) continue;
        EXPECT_GE(rep.beta, rep.theoretical_lower_bound - 1e-4) << to_string(f) << " p=" << p << " m=" << m;
      }
    }
  }
}

TEST(Condition, ColumnSubsetMonotone) {
  OptimizerConfig cfg;
  cfg.starts = 32;
  for (int i = 0; i < 100; ++i) {
    const SensingMatrix a = sample_gaussian(Field::Real, 6 + i % 10, 3, {121, static_cast<std::uint64_t>(i)});
    const SensingMatrix b = a.leading_columns(2);
    const int p = 1 + i % 2;
    EXPECT_GE(condition_number(a, p, cfg).beta, condition_number(b, p, cfg).beta - 1e-6) << i;
  }
}

TEST(Condition, OptimizerInsideBand) {
  for (Field f : {Field::Real, Field::Complex}) {
    for (int p : {1, 2}) {
      for (int i = 0; i < 4; ++i) {
        const SensingMatrix a = sample_gaussian(f, 3 + 2 * i, 2, {131, static_cast<std::uint64_t>(10 * p + i)});
        const auto rep = condition_number(a, p);
        ASSERT_TRUE(rep.lower.certified_band && rep.upper.certified_band);
        const auto [llo, lhi] = *rep.lower.certified_band;
        const auto [ulo, uhi] = *rep.upper.certified_band;
        const double tol = 1e-9 * a.frobenius_squared();
        EXPECT_GE(rep.L, llo - tol);
        EXPECT_LE(rep.L, lhi + tol);
        EXPECT_GE(rep.U, ulo - tol);
        EXPECT_LE(rep.U, uhi + tol);
      }
    }
  }
}

TEST(Condition, DeterministicAcrossThreads) {
  const SensingMatrix a = sample_gaussian(Field::Complex, 9, 3, {141, 0});
  OptimizerConfig one;
  one.threads = 1;
  OptimizerConfig many;
  many.threads = 4;
  const auto r1 = condition_number(a, 1, one);
  const auto r4 = condition_number(a, 1, many);
  EXPECT_EQ(r1.L, r4.L);
  EXPECT_EQ(r1.U, r4.U);
}

TEST(TightFrame, Harmonic) {
  for (int m = 3; m <= 12; ++m) {
    const auto check = is_tight_4_frame(harmonic_frame(m), 500, 1e-9);
    EXPECT_TRUE(check.tight) << m;
    EXPECT_NEAR(check.mean, 3.0 * m / 8, 1e-9);
  }
  EXPECT_NEAR(is_tight_4_frame(harmonic_frame(4), 500, 1e-9).mean, 1.5, 1e-12);
}

TEST(TightFrame, IdentityIsNot) {
  const auto check = is_tight_4_frame(SensingMatrix::real(Eigen::Matrix2d::Identity()), 500, 1e-6);
  EXPECT_FALSE(check.tight);
  EXPECT_NEAR(check.min, 0.5, 1e-6);
  EXPECT_NEAR(check.max, 1.0, 1e-12);
}

TEST(TightFrame, EvenInX) {
  Rng rng({151, 0});
  const SensingMatrix a = sample_gaussian(Field::Real, 7, 3, {151, 1});
  for (int i = 0; i < 100; ++i) {
    const FieldVector x = random_unit_vector(Field::Real, 3, rng);
    EXPECT_EQ(psi_map(a, x).squaredNorm(), psi_map(a, x.scaled(-1.0)).squaredNorm());
  }
}

}  // namespace
}  // namespace prcond
