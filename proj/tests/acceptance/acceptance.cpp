// SPDX-License-Identifier: Apache-2.0
//
// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prcond/cli.hpp"
#include "prcond/closedform.hpp"
#include "prcond/experiment.hpp"
#include "prcond/oracle.hpp"
#include "prcond/parallel.hpp"

namespace {

using namespace prcond;
using nlohmann::json;

constexpr double kPi = std::numbers::pi;
const double kSqrt3 = std::sqrt(3.0);

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Outcome harmonic_l2() {
  const auto dir = std::filesystem::temp_directory_path() / "prcond_acceptance";
  std::filesystem::create_directories(dir);
  double worst = 0.0;
  for (int m = 3; m <= 12; ++m) {
    const std::string file = (dir / ("e" + std::to_string(m) + ".json")).string();
    std::ostringstream out;
    std::ostringstream err;
    if (cli::run({"frame", "--m", std::to_string(m), "--out", file}, out, err) != cli::kOk) return {false, err.str()};
    if (cli::run({"beta", "--matrix", file, "--p", "2"}, out, err) != cli::kOk) return {false, err.str()};
    const json rep = json::parse(out.str());
    worst = std::max({worst, std::abs(rep.at("beta").get<double>() - kSqrt3),
                      std::abs(rep.at("L").get<double>() - std::sqrt(m / 8.0)),
                      std::abs(rep.at("U").get<double>() - std::sqrt(3.0 * m / 8.0))});
  }
  std::filesystem::remove_all(dir);
  return {worst <= 1e-6, "max |error| over beta, L, U = " + fmt("%.2e", worst)};
}

Outcome harmonic_l1() {
  double worst = 0.0;
  for (int m = 3; m <= 12; ++m) {
    const SensingMatrix e = harmonic_frame(m);
    const double a = kPi / (2.0 * m);
    const double beta = m % 2 ? m * std::tan(a) / std::cos(a) : (m / 2.0) * std::tan(kPi / m);
    const double l_orth = m % 2 ? 1.0 / (2.0 * std::tan(a)) : 1.0 / std::tan(kPi / m);
    const double l = m % 2 ? std::cos(a) / (2.0 * std::tan(a)) : 1.0 / std::tan(kPi / m);
    const ConditionReport rep = condition_number(e, 1);
    worst = std::max({worst, std::abs(rep.beta - beta), std::abs(rep.L - l),
                      std::abs(orthogonal_lower_bound(e, 1).value - l_orth)});
  }
  return {worst <= 1e-5, "max |error| over beta, L, L_orth = " + fmt("%.2e", worst)};
}

Outcome universal_bounds() {
  constexpr int kPerField = 200;
  struct Row {
    double slack2 = 0.0;
    double slack1 = 0.0;
  };
  std::vector<Row> rows(2 * kPerField);
  parallel_for(rows.size(), [&](std::size_t i) {
    const Field f = i < kPerField ? Field::Real : Field::Complex;
    const int k = static_cast<int>(i % kPerField);
    const int d = 2 + k % 2;
    const int lo = 2 * d - 1;
    const int m = lo + (k / 2) % (10 * d - lo + 1);
    const SensingMatrix a = sample_gaussian(f, m, d, {2024, i});
    OptimizerConfig cfg;
    cfg.threads = 1;
    cfg.rng = {2024, 1000 + i};
    const double b2 = universal_lower_bound(f, 2).value;
    const double b1 = f == Field::Real ? universal_lower_bound(f, 1, m).value : 2.0;
    rows[i].slack2 = condition_number(a, 2, cfg).beta - b2;
    rows[i].slack1 = condition_number(a, 1, cfg).beta - b1;
  });
  double worst = 1e300;
  int violations = 0;
  for (const Row& r : rows) {
    worst = std::min({worst, r.slack2, r.slack1});
    violations += (r.slack2 < -1e-4) + (r.slack1 < -1e-4);
  }
  return {violations == 0,
          std::to_string(violations) + " violations, smallest beta - bound = " + fmt("%.3e", worst)};
}

Outcome concentration() {
  struct Sweep {
    Field field;
    int p;
    int m;
    int trials;
  };
  bool ok = true;
  std::string detail;
  for (const Sweep& s : {Sweep{Field::Real, 1, 2000, 50}, Sweep{Field::Real, 2, 4000, 50},
                         Sweep{Field::Complex, 1, 4000, 30}}) {
    ExperimentConfig cfg;
    cfg.field = s.field;
    cfg.p = s.p;
    cfg.m = s.m;
    cfg.d = 4;
    cfg.trials = s.trials;
    cfg.rng = {4, static_cast<std::uint64_t>(s.p + 10 * (s.field == Field::Complex))};
    const SweepResult r = run_gaussian_sweep(cfg);
    const double gap = r.summary.gap_to_asymptote;
    const bool pass = r.summary.failed == 0 && gap >= 0.0 && gap <= 0.25;
    ok = ok && pass;
    detail += std::string(to_string(s.field)) + " p=" + std::to_string(s.p) + " gap " + fmt("%.4f", gap) +
              (pass ? "" : " (out of [0, 0.25])") + "; ";
  }
  const ConvergenceTable t = convergence_table(Field::Real, 2, 3, {50, 200, 800, 3200}, 20, {44, 0});
  bool decreasing = true;
  for (std::size_t i = 1; i < t.rows.size(); ++i) decreasing = decreasing && t.rows[i].mean_beta < t.rows[i - 1].mean_beta;
  ok = ok && decreasing && t.spearman < 0.0;
  detail += "table means";
  for (const auto& row : t.rows) detail += " " + fmt("%.4f", row.mean_beta);
  detail += ", spearman " + fmt("%.2f", t.spearman);
  return {ok, detail};
}

Outcome identity_suite() {
  const cli::VerifyReport report = cli::run_verify({});
  bool ok = true;
  std::string detail;
  for (const auto& s : report.suites) {
    if (s.name == "lagrange" || s.name == "gk_closed_form" || s.name == "g_min_at_one" ||
        s.name == "g_prime_at_one" || s.name == "sub_tan") {
      ok = ok && s.passed;
      detail += s.name + " " + fmt("%.2e", s.max_residual) + (s.passed ? "" : " FAIL") + "; ";
    }
  }
  return {ok, detail};
}

Outcome expectation_curves() {
  double worst = 0.0;
  for (Field f : {Field::Real, Field::Complex}) {
    for (int k = 0; k <= 4; ++k) {
      const double theta = k * kPi / 8;
      const double truth = f == Field::Real
                               ? (2 / kPi) * (std::sin(theta) + (kPi / 2 - theta) * std::cos(theta))
                               : (3 + std::cos(2 * theta)) / 4;
      const McEstimate mc = mc_expectation(f, theta, 1'000'000, {6, static_cast<std::uint64_t>(k + 10 * (f == Field::Complex))});
      worst = std::max(worst, std::abs(mc.estimate - truth) / mc.stderr_);
      if (std::abs(gaussian_abs_expectation(f, theta) - truth) > 1e-14) return {false, "closed form mismatch"};
    }
  }
  const bool minima = std::abs(gaussian_abs_expectation(Field::Real, kPi / 2) - 2 / kPi) < 1e-15 &&
                      std::abs(gaussian_abs_expectation(Field::Complex, kPi / 2) - 0.5) < 1e-15;
  return {worst <= 3.0 && minima, "max |MC - curve| = " + fmt("%.2f", worst) + " stderr"};
}

Outcome oracle_equivalence() {
  constexpr int kPerConfig = 50;
  int outside = 0;
  double worst = 0.0;
  for (Field f : {Field::Real, Field::Complex}) {
    for (int p : {1, 2}) {
      std::vector<double> miss(kPerConfig);
      parallel_for(kPerConfig, [&](std::size_t i) {
        const SensingMatrix a = sample_gaussian(f, 3 + static_cast<int>(i % 8), 2,
                                                {7, i + 100 * static_cast<std::uint64_t>(p + 2 * (f == Field::Complex))});
        OptimizerConfig cfg;
        cfg.use_grid_oracle = false;
        cfg.threads = 1;
        const double l = lower_lipschitz(a, p, cfg).value;
        const double u = upper_lipschitz(a, p, cfg).value;
        const auto lb = *grid_lower_l(a, p, Constraint::RealInner).certified_band;
        const auto ub = *grid_upper_u(a, p).certified_band;
        const double scale = a.frobenius_squared();
        miss[i] = std::max({0.0, lb.first - l, l - lb.second, ub.first - u, u - ub.second}) / scale;
      });
      for (double x : miss) {
        worst = std::max(worst, x);
        outside += x > 1e-12;
      }
    }
  }
  return {outside == 0, std::to_string(outside) + " of 200 outside, worst relative miss " + fmt("%.2e", worst)};
}

Outcome metric_identity() {
  Rng rng({8, 0});
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Field f = i % 2 ? Field::Complex : Field::Real;
    const Index d = 2 + i % 5;
    Eigen::VectorXcd x(d);
    Eigen::VectorXcd y(d);
    for (Index k = 0; k < d; ++k) {
      x[k] = f == Field::Real ? Complex(rng.normal()) : rng.complex_normal();
      y[k] = f == Field::Real ? Complex(rng.normal()) : rng.complex_normal();
    }
    const FieldVector fx(f, x);
    const FieldVector fy(f, y);
    worst = std::max(worst, std::abs(dist_h_product(fx, fy) - dist_h_eigen(fx, fy)) /
                                (fx.squared_norm() + fy.squared_norm()));
  }
  return {worst <= 1e-10, "max relative difference " + fmt("%.2e", worst)};
}

Outcome tail_bound() {
  const TailCheck c = tail_check_two_to_four(200, 4, 3.0, 1000, {9, 0});
  return {c.within, std::to_string(c.exceedances) + "/1000 exceed, rate " + fmt("%.4f", c.rate) + " vs ceiling " +
                        fmt("%.4f", c.ceiling) + " + 3*" + fmt("%.4f", c.stderr_)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "harmonic l2 beta, L, U", 5, harmonic_l2},
      {2, "harmonic l1 beta, L, L_orth", 30, harmonic_l1},
      {3, "universal lower bounds", 300, universal_bounds},
      {4, "gaussian concentration", 900, concentration},
      {5, "identity suite", 120, identity_suite},
      {6, "expectation curves", 60, expectation_curves},
      {7, "oracle equivalence", 300, oracle_equivalence},
      {8, "metric identity", 10, metric_identity},
      {9, "two-to-four tail bound", 60, tail_bound},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.passed && in_time;
    failures += !pass;
    std::cout << (pass ? "PASS" : "FAIL") << "  " << c.id << "  " << c.name << "  (" << fmt("%.1f", secs) << " s / "
              << c.budget_s << " s" << (in_time ? "" : ", over budget") << ")  " << o.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
