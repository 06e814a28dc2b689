// SPDX-License-Identifier: Apache-2.0
//
// Brute-force verifiers: certified d = 2 angle-grid searches for L, M_A and
// U, and numerical checks of the trigonometric identities behind the
// harmonic-frame constants.
#pragma once

#include <span>
#include <vector>

#include "prcond/core.hpp"
#include "prcond/lipschitz.hpp"
#include "prcond/rng.hpp"

namespace prcond {

/// Certified minimum of the lower objective over a d = 2 angle grid.
/// RealInner covers every pair with Im<u,v> = 0; Orthogonal sweeps the
/// orthogonal family u = (cos t e^{i g}, sin t), v = (sin t e^{i g}, -cos t).
LipschitzEstimate grid_lower_l(const SensingMatrix& a, int p, Constraint constraint,
                               const GridSpec& grid = {});

/// Certified maximum of the upper objective over the unit circle / sphere.
LipschitzEstimate grid_upper_u(const SensingMatrix& a, int p, const GridSpec& grid = {});

/// Largest residual of the Lagrange identities
///   sum_{j=1}^m cos(j t) = sin((m+1/2) t) / (2 sin(t/2)) - 1/2
///   sum_{j=1}^m sin(j t) = cos(t/2) / (2 sin(t/2)) - cos((m+1/2) t) / (2 sin(t/2))
/// at t = theta, and (for m >= 3) of sum_j cos(2j pi/m - 2 theta) = 0 and
/// sum_j cos(4j pi/m - 4 theta) = 0. Throws DomainError at poles.
double check_lagrange_identities(int m, double theta);

/// G_k(theta, phi) = sum_{j=0}^{m-1} |cos(j pi/m - theta) sin(j pi/m - phi - k pi/m)|.
double gk_direct(int m, int k, double theta, double phi);
/// Closed form of G_k valid for theta, phi in [0, pi/m] and 0 <= k <= k_hat.
double gk_closed_form(int m, int k, double theta, double phi);
/// Largest admissible k for (m, phi).
int gk_k_hat(int m, double phi);
/// |gk_direct - gk_closed_form|; throws DomainError outside the regime.
double check_gk_closed_form(int m, int k, double theta, double phi);

/// g(t) = sum_j (alpha_j t - gamma_j)^2 / (t + 1)^2 with alpha_j = |a_j* x|^2,
/// gamma_j = |a_j* y|^2.
double g_of_t(const SensingMatrix& a, const FieldVector& x, const FieldVector& y, double t);
/// Central finite difference of g at t = 1.
double g_prime_at_one(const SensingMatrix& a, const FieldVector& x, const FieldVector& y,
                      double h = 1e-5);
/// True iff g(1) <= g(t) + 1e-12 on the grid. Throws PreconditionError when
/// A is not a tight 4-frame or (x, y) is not an orthonormal pair.
bool check_g_min_at_one(const SensingMatrix& a, const FieldVector& x, const FieldVector& y,
                        std::span<const double> t_grid);

struct SubTanResult {
  double min_value = 0.0;
  double bound = 0.0;
  bool holds = false;
};

/// min over theta in [0, pi] of sum_i t_i^2 |sin(theta - phi_i)| against
/// sub_tan_bound(t_squares).
SubTanResult check_sub_tan(std::span<const double> phis, std::span<const double> t_squares,
                           const GridSpec& grid = {});

struct McEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
};

/// Monte-Carlo mean of |Re(u* a a* v)| with u = e1, v = cos(theta) e1 + sin(theta) e2.
McEstimate mc_expectation(Field field, double theta, long samples, RngSpec rng);

}  // namespace prcond
