// SPDX-License-Identifier: Apache-2.0
#include "prcond/closedform.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace prcond {

namespace {
constexpr double kPi = std::numbers::pi;
}

void require_p(int p) {
  if (p != 1 && p != 2) throw DomainError("p must be 1 or 2");
}

BoundSpec universal_lower_bound(Field field, int p, std::optional<int> m) {
  require_p(p);
  BoundSpec b{field, p, m, 0.0, ""};
  if (field == Field::Complex) {
    b.value = 2.0;
    b.source = p == 2 ? "complex l2 bound" : "complex l1 bound";
  } else if (p == 2) {
    b.value = std::numbers::sqrt3;
    b.source = "real l2 bound";
  } else if (m) {
    if (*m < 3) throw DomainError("real l1 bound m tan(pi/2m) needs m >= 3");
    b.value = *m * std::tan(kPi / (2.0 * *m));
    b.source = "real l1 bound m tan(pi/2m)";
  } else {
    b.value = kPi / 2.0;
    b.source = "real l1 asymptotic bound pi/2";
  }
  return b;
}

HarmonicConstants harmonic_constants(int m, int p) {
  require_p(p);
  if (m < 3) throw DomainError("harmonic_constants requires m >= 3");
  HarmonicConstants h;
  if (p == 2) {
    h.L = h.L_orth = std::sqrt(m / 8.0);
    h.U = std::sqrt(3.0 * m / 8.0);
  } else {
    h.U = m / 2.0;
    if (m % 2 == 1) {
      const double a = kPi / (2.0 * m);
      h.L_orth = 1.0 / (2.0 * std::tan(a));
      h.L = std::cos(a) * h.L_orth;
    } else {
      h.L = h.L_orth = 1.0 / std::tan(kPi / m);
    }
  }
  h.beta = h.U / h.L;
  return h;
}

double gaussian_abs_expectation(Field field, double theta) {
  if (!(theta >= 0.0 && theta <= kPi / 2.0)) throw DomainError("theta must lie in [0, pi/2]");
  if (field == Field::Real) {
    return (2.0 / kPi) * (std::sin(theta) + (kPi / 2.0 - theta) * std::cos(theta));
  }
  return (3.0 + std::cos(2.0 * theta)) / 4.0;
}

double two_to_four_norm_bound(int m, int d, double t) {
  if (m < 1 || d < 1) throw DimensionError("two_to_four_norm_bound needs m, d >= 1");
  if (t < 0.0) throw DomainError("t must be nonnegative");
  return std::pow(3.0 * m, 0.25) + std::sqrt(static_cast<double>(d)) + t;
}

double fourth_moment_floor(const FieldVector& u, const FieldVector& v) {
  if (u.field() != Field::Real || v.field() != Field::Real) {
    throw FieldMismatchError("fourth_moment_floor is defined for real vectors");
  }
  const double uv = std::abs(inner(u, v));
  return u.squared_norm() * v.squared_norm() + 2.0 * uv * uv;
}

double sub_tan_bound(std::span<const double> t_squares) {
  if (t_squares.empty()) throw DomainError("sub_tan_bound needs a nonempty list");
  const auto m = static_cast<double>(t_squares.size());
  if (t_squares.size() == 1) return 0.0;
  const double sum = std::accumulate(t_squares.begin(), t_squares.end(), 0.0);
  return sum / (m * std::tan(kPi / (2.0 * m)));
}

}  // namespace prcond
