// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>

#include "prcond/core.hpp"

namespace prcond {

/// A universal lower bound on the condition number for (field, p[, m]).
struct BoundSpec {
  Field field = Field::Real;
  int p = 2;
  std::optional<int> m;
  double value = 0.0;
  std::string source;
};

/// Real p=2: sqrt(3). Complex: 2. Real p=1: m tan(pi/2m), or pi/2 without m.
BoundSpec universal_lower_bound(Field field, int p, std::optional<int> m = std::nullopt);

struct HarmonicConstants {
  double L = 0.0;
  double L_orth = 0.0;
  double U = 0.0;
  double beta = 0.0;
};

/// Lipschitz constants of the harmonic frame E_m (m >= 3).
HarmonicConstants harmonic_constants(int m, int p);

/// E|Re(u* a a* v)| for a standard Gaussian a and unit u, v with
/// <u, v> = cos(theta), theta in [0, pi/2].
double gaussian_abs_expectation(Field field, double theta);

/// (3m)^{1/4} + sqrt(d) + t.
double two_to_four_norm_bound(int m, int d, double t);

/// |u|^2 |v|^2 + 2 |u^T v|^2 for real u, v.
double fourth_moment_floor(const FieldVector& u, const FieldVector& v);

/// (1 / (m tan(pi/2m))) sum t_i^2 with m = t_squares.size(); 0 for m = 1.
double sub_tan_bound(std::span<const double> t_squares);

void require_p(int p);

}  // namespace prcond
