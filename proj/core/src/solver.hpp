// SPDX-License-Identifier: Apache-2.0
//
// Realified optimization machinery. A complex vector z in C^d is handled as
// (Re z, Im z) in R^{2d}; a row r becomes the 2 x 2d block
// [[Re r, -Im r], [Im r, Re r]] so that it maps z_R to (Re(r.z), Im(r.z)).
#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "prcond/core.hpp"
#include "prcond/lipschitz.hpp"

namespace prcond::detail {

struct Lifted {
  Field field = Field::Real;
  Index m = 0;
  Index d = 0;
  Index n = 0;  // real dimension of one vector
  int k = 1;    // real rows per measurement
  // blocks[l].row(j) is real row l of measurement j.
  std::vector<Eigen::MatrixXd> blocks;
  // Unit-norm bilinear constraints u^T C v = 0 of the lower problem.
  std::vector<Eigen::MatrixXd> couplings;
  double mass = 0.0;  // sum_j |a_j|^2

  Lifted(const SensingMatrix& a, Constraint constraint);

  Eigen::VectorXd lift(const FieldVector& x) const;
  FieldVector unlift(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd mult_i() const;  // J: multiplication by i
};

/// Smoothed scalar penalty applied to each r_j.
struct Penalty {
  int p = 2;
  double eps = 0.0;  // p = 1 smoothing width
  double value(double r) const;
  double d1(double r) const;
  double d2(double r) const;
};

/// A smooth objective on a product of spheres with quadratic equality
/// constraints c_i(z) = z^T S_i z / 2 - b_i.
struct SmoothProblem {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&, Eigen::MatrixXd&)> derivatives;
  std::vector<Eigen::MatrixXd> constraint_hessians;  // S_i
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> retract;
};

struct NewtonResult {
  int iterations = 0;
  bool converged = false;
};

/// Constrained Newton with multiplier estimates, reduced Hessian and an
/// absolute-eigenvalue (saddle-free) step, plus backtracking on the retraction.
NewtonResult newton_polish(const SmoothProblem& problem, Eigen::VectorXd& z, int max_iters,
                           double gradient_tolerance, const StepPolicy& policy);

/// Orthonormal basis of the null space of the rows of `a` (r x N).
Eigen::MatrixXd null_basis(const Eigen::MatrixXd& a);

// Lower problem on z = (u, v).
struct LowerTerms {
  std::vector<Eigen::VectorXd> pu;  // B_l u
  std::vector<Eigen::VectorXd> qv;  // B_l v
  Eigen::VectorXd r;
};

LowerTerms lower_terms(const Lifted& lifted, const Eigen::VectorXd& u, const Eigen::VectorXd& v);
double lower_true_value(const Lifted& lifted, int p, const Eigen::VectorXd& z);
Eigen::VectorXd lower_retract(const Lifted& lifted, const Eigen::VectorXd& z);
SmoothProblem lower_problem(const Lifted& lifted, const Penalty& penalty);

struct StartOutcome {
  double value = 0.0;
  Eigen::VectorXd z;
  long iterations = 0;
};

StartOutcome solve_lower_start(const Lifted& lifted, int p, const OptimizerConfig& cfg, RngSpec spec);
StartOutcome solve_upper_start(const Lifted& lifted, int p, const OptimizerConfig& cfg, RngSpec spec);
double upper_true_value(const Lifted& lifted, int p, const Eigen::VectorXd& u);

}  // namespace prcond::detail
