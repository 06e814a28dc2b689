// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "prcond/cli.hpp"
#include "prcond/closedform.hpp"
#include "prcond/oracle.hpp"
#include "prcond/rng.hpp"

namespace prcond::cli {

namespace {

constexpr double kPi = std::numbers::pi;

SuiteResult finish(std::string name, long cases, double residual, double threshold) {
  return {std::move(name), cases, residual, threshold, residual <= threshold, ""};
}

SuiteResult lagrange_suite(Rng& rng) {
  double worst = 0.0;
  constexpr long kCases = 1000;
  for (long i = 0; i < kCases; ++i) {
    const int m = 1 + static_cast<int>(rng.uniform() * 64);
    const double theta = 0.01 + rng.uniform() * (2 * kPi - 0.02);
    worst = std::max(worst, check_lagrange_identities(m, theta));
  }
  return finish("lagrange", kCases, worst, 1e-10);
}

SuiteResult gk_suite() {
  double worst = 0.0;
  long cases = 0;
  for (int m = 3; m <= 16; ++m) {
    for (int a = 0; a < 32; ++a) {
      for (int b = 0; b < 32; ++b) {
        const double theta = kPi / m * a / 31.0;
        const double phi = kPi / m * b / 31.0;
        for (int k = 0; k <= gk_k_hat(m, phi); ++k) {
          worst = std::max(worst, check_gk_closed_form(m, k, theta, phi));
          ++cases;
        }
      }
    }
  }
  return finish("gk_closed_form", cases, worst, 1e-10);
}

Eigen::Matrix2d rotation(double a) {
  Eigen::Matrix2d q;
  q << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return q;
}

// Tight 4-frames: rotated harmonic frames, unions of two of them, and the
// three mutually unbiased bases of C^2 under a random unitary.
SensingMatrix tight_frame_instance(int i, Rng& rng) {
  const int m = 3 + i % 10;
  switch (i % 4) {
    case 0:
      return harmonic_frame(m).times(rotation(2 * kPi * rng.uniform()));
    case 1: {
      const auto a = harmonic_frame(m).times(rotation(2 * kPi * rng.uniform()));
      const auto b = harmonic_frame(3 + (i / 4) % 7).times(rotation(2 * kPi * rng.uniform()));
      SensingMatrix::Storage rows(a.m() + b.m(), 2);
      rows << a.rows(), b.rows();
      return SensingMatrix(Field::Real, rows);
    }
    case 2:
      return harmonic_frame(m).scaled(0.5 + rng.uniform());
    default: {
      const double s = std::numbers::sqrt2 / 2;
      const Complex j(0, 1);
      SensingMatrix::Storage rows(6, 2);
      rows << 1, 0, 0, 1, s, s, s, -s, s, j * s, s, -j * s;
      Eigen::Matrix2cd g;
      g << rng.complex_normal(), rng.complex_normal(), rng.complex_normal(), rng.complex_normal();
      const Eigen::Matrix2cd q = Eigen::HouseholderQR<Eigen::Matrix2cd>(g).householderQ();
      return SensingMatrix(Field::Complex, rows * q);
    }
  }
}

std::pair<FieldVector, FieldVector> orthonormal_pair(Field field, Rng& rng) {
  const FieldVector x = random_unit_vector(field, 2, rng);
  // (-conj(x2), conj(x1)) is orthogonal to x in both fields.
  Eigen::Vector2cd y(-std::conj(x[1]), std::conj(x[0]));
  return {x, FieldVector(field, y)};
}

std::vector<SuiteResult> g_suites(Rng& rng) {
  std::vector<double> t_grid;
  for (int i = 0; i <= 50; ++i) t_grid.push_back(0.1 * i);
  long failures = 0;
  double worst_derivative = 0.0;
  constexpr long kCases = 100;
  for (int i = 0; i < kCases; ++i) {
    const SensingMatrix a = tight_frame_instance(i, rng);
    const auto [x, y] = orthonormal_pair(a.field(), rng);
    if (!check_g_min_at_one(a, x, y, t_grid)) ++failures;
    worst_derivative = std::max(worst_derivative, std::abs(g_prime_at_one(a, x, y)));
  }
  SuiteResult grid = finish("g_min_at_one", kCases, static_cast<double>(failures), 0.0);
  grid.detail = "instances where g(1) exceeds a grid value";
  return {grid, finish("g_prime_at_one", kCases, worst_derivative, 1e-8)};
}

SuiteResult sub_tan_suite(Rng& rng, const GridSpec& grid) {
  constexpr long kCases = 10000;
  long failures = 0;
  double tightest = std::numeric_limits<double>::infinity();
  for (long i = 0; i < kCases; ++i) {
    const int m = 2 + static_cast<int>(rng.uniform() * 31);
    std::vector<double> phis(static_cast<std::size_t>(m));
    std::vector<double> ts(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
      phis[k] = kPi * rng.uniform();
      ts[k] = rng.uniform();
    }
    std::sort(phis.begin(), phis.end());
    GridSpec g = grid;
    g.resolution = std::min(grid.resolution, 256);
    const SubTanResult r = check_sub_tan(phis, ts, g);
    if (!r.holds) ++failures;
    tightest = std::min(tightest, r.bound - r.min_value);
  }
  SuiteResult out = finish("sub_tan", kCases, static_cast<double>(failures), 0.0);
  out.detail = "violations; smallest bound - min = " + std::to_string(tightest);
  return out;
}

SuiteResult metric_suite(Rng& rng) {
  constexpr long kCases = 10000;
  double worst = 0.0;
  for (long i = 0; i < kCases; ++i) {
    const Field f = i % 2 == 0 ? Field::Real : Field::Complex;
    const Index d = 2 + i % 5;
    Eigen::VectorXcd x(d);
    Eigen::VectorXcd y(d);
    for (Index k = 0; k < d; ++k) {
      x[k] = f == Field::Real ? Complex(rng.normal()) : rng.complex_normal();
      y[k] = f == Field::Real ? Complex(rng.normal()) : rng.complex_normal();
    }
    const FieldVector fx(f, x);
    const FieldVector fy(f, y);
    const double scale = fx.squared_norm() + fy.squared_norm();
    worst = std::max(worst, std::abs(dist_h_product(fx, fy) - dist_h_eigen(fx, fy)) / scale);
  }
  return finish("metric_identity", kCases, worst, 1e-10);
}

SuiteResult expectation_suite(std::uint64_t seed) {
  constexpr long kSamples = 1'000'000;
  double worst = 0.0;
  long cases = 0;
  for (Field f : {Field::Real, Field::Complex}) {
    for (int k = 0; k <= 4; ++k) {
      const double theta = k * kPi / 8;
      const McEstimate mc = mc_expectation(f, theta, kSamples, RngSpec{seed, static_cast<std::uint64_t>(10 * (f == Field::Complex) + k)});
      worst = std::max(worst, std::abs(mc.estimate - gaussian_abs_expectation(f, theta)) / mc.stderr_);
      ++cases;
    }
  }
  SuiteResult out = finish("expectation_mc", cases, worst, 3.0);
  out.detail = "residual in standard errors";
  return out;
}

SuiteResult grid_suite(const GridSpec& grid) {
  long cases = 0;
  double worst = 0.0;
  for (int m = 3; m <= 8; ++m) {
    const SensingMatrix e = harmonic_frame(m);
    for (int p : {1, 2}) {
      const HarmonicConstants h = harmonic_constants(m, p);
      const auto check = [&](const LipschitzEstimate& est, double truth) {
        const auto [lo, hi] = *est.certified_band;
        const double miss = std::max({0.0, lo - truth, truth - hi});
        worst = std::max(worst, miss);
        ++cases;
      };
      check(grid_lower_l(e, p, Constraint::RealInner, grid), h.L);
      check(grid_lower_l(e, p, Constraint::Orthogonal, grid), h.L_orth);
      check(grid_upper_u(e, p, grid), h.U);
    }
  }
  SuiteResult out = finish("grid_oracle_harmonic", cases, worst, 1e-9);
  out.detail = "distance of the closed form outside the certified band";
  return out;
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed; });
}

VerifyReport run_verify(const VerifyOptions& options) {
  options.grid.validate();
  Rng rng(RngSpec{options.seed, 0});
  VerifyReport report;
  report.suites.push_back(lagrange_suite(rng));
  report.suites.push_back(gk_suite());
  for (auto& s : g_suites(rng)) report.suites.push_back(std::move(s));
  report.suites.push_back(sub_tan_suite(rng, options.grid));
  report.suites.push_back(metric_suite(rng));
  report.suites.push_back(expectation_suite(options.seed));
  report.suites.push_back(grid_suite(options.grid));
  if (options.inject_fault) {
    SuiteResult& s = report.suites.front();
    s.max_residual += 1.0;
    s.passed = s.max_residual <= s.threshold;
    s.detail = "fault injected";
  }
  return report;
}

}  // namespace prcond::cli
