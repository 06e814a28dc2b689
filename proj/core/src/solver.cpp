// SPDX-License-Identifier: Apache-2.0
#include "solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "prcond/rng.hpp"

namespace prcond::detail {

// --------------------------------------------------------------------- Lifted

Lifted::Lifted(const SensingMatrix& a, Constraint constraint)
    : field(a.field()), m(a.m()), d(a.d()) {
  const auto& rows = a.rows();
  mass = a.frobenius_squared();
  if (field == Field::Real) {
    n = d;
    k = 1;
    blocks.emplace_back(rows.real());
  } else {
    n = 2 * d;
    k = 2;
    Eigen::MatrixXd re = rows.real();
    Eigen::MatrixXd im = rows.imag();
    Eigen::MatrixXd b0(m, n);
    Eigen::MatrixXd b1(m, n);
    b0 << re, -im;
    b1 << im, re;
    blocks.push_back(std::move(b0));
    blocks.push_back(std::move(b1));
  }
  if (constraint == Constraint::Orthogonal) couplings.push_back(Eigen::MatrixXd::Identity(n, n));
  if (field == Field::Complex && constraint != Constraint::Free) {
    couplings.push_back(mult_i().transpose());
  }
}

Eigen::MatrixXd Lifted::mult_i() const {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  if (field == Field::Complex) {
    j.block(0, d, d, d) = -Eigen::MatrixXd::Identity(d, d);
    j.block(d, 0, d, d) = Eigen::MatrixXd::Identity(d, d);
  }
  return j;
}

Eigen::VectorXd Lifted::lift(const FieldVector& x) const {
  if (field == Field::Real) return x.values().real();
  Eigen::VectorXd out(n);
  out << x.values().real(), x.values().imag();
  return out;
}

FieldVector Lifted::unlift(const Eigen::VectorXd& x) const {
  if (field == Field::Real) return FieldVector::real(x);
  Eigen::VectorXcd z(d);
  for (Index i = 0; i < d; ++i) z[i] = Complex(x[i], x[d + i]);
  return FieldVector::complex(z);
}

// -------------------------------------------------------------------- Penalty

double Penalty::value(double r) const {
  if (p == 1) return std::sqrt(r * r + eps * eps);
  if (p == 2) return r * r;
  return std::pow(std::abs(r), p);
}

double Penalty::d1(double r) const {
  if (p == 1) return r / std::sqrt(r * r + eps * eps);
  if (p == 2) return 2.0 * r;
  return p * std::pow(std::abs(r), p - 1) * (r < 0 ? -1.0 : 1.0);
}

double Penalty::d2(double r) const {
  if (p == 1) {
    const double s = std::sqrt(r * r + eps * eps);
    return eps * eps / (s * s * s);
  }
  if (p == 2) return 2.0;
  return p * (p - 1) * std::pow(std::abs(r), p - 2);
}

// --------------------------------------------------------------- linear algebra

Eigen::MatrixXd null_basis(const Eigen::MatrixXd& a) {
  const Index big_n = a.cols();
  if (a.rows() == 0) return Eigen::MatrixXd::Identity(big_n, big_n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a.transpose());
  Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(big_n - a.rows());
}

NewtonResult newton_polish(const SmoothProblem& problem, Eigen::VectorXd& z, int max_iters,
                           double gradient_tolerance, const StepPolicy& policy) {
  NewtonResult result;
  const Index big_n = z.size();
  const auto nc = static_cast<Index>(problem.constraint_hessians.size());
  Eigen::VectorXd g(big_n);
  Eigen::MatrixXd h(big_n, big_n);
  double f = problem.value(z);
  for (int it = 0; it < max_iters; ++it) {
    problem.derivatives(z, g, h);
    Eigen::MatrixXd jac(nc, big_n);
    for (Index i = 0; i < nc; ++i) jac.row(i) = (problem.constraint_hessians[i] * z).transpose();
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(nc);
    if (nc > 0) lambda = jac.transpose().colPivHouseholderQr().solve(g);
    for (Index i = 0; i < nc; ++i) h -= lambda[i] * problem.constraint_hessians[i];
    const Eigen::MatrixXd zb = null_basis(jac);
    const Eigen::VectorXd gr = zb.transpose() * g;
    result.iterations = it + 1;
    if (gr.norm() <= gradient_tolerance) {
      result.converged = true;
      break;
    }
    const Eigen::MatrixXd hr = zb.transpose() * h * zb;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hr);
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double top = ev.cwiseAbs().maxCoeff();
    const double floor = std::max(1e-9 * top, 1e-300);
    const Eigen::VectorXd coeff = es.eigenvectors().transpose() * gr;
    Eigen::VectorXd step = Eigen::VectorXd::Zero(gr.size());
    for (Index i = 0; i < gr.size(); ++i) {
      step -= coeff[i] / std::max(std::abs(ev[i]), floor) * es.eigenvectors().col(i);
    }
    const double max_step = 0.5;
    if (step.norm() > max_step) step *= max_step / step.norm();
    const double slope = gr.dot(step);
    if (!(slope < 0.0)) break;
    const Eigen::VectorXd dir = zb * step;
    double alpha = 1.0;
    bool accepted = false;
    for (int b = 0; b < policy.max_backtracks; ++b) {
      Eigen::VectorXd trial = problem.retract(z + alpha * dir);
      const double ft = problem.value(trial);
      if (ft <= f + policy.armijo * alpha * slope) {
        z = std::move(trial);
        f = ft;
        accepted = true;
        break;
      }
      alpha *= policy.shrink;
    }
    if (!accepted) break;
  }
  return result;
}

// ------------------------------------------------------------- lower problem

LowerTerms lower_terms(const Lifted& lifted, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  LowerTerms t;
  t.r = Eigen::VectorXd::Zero(lifted.m);
  for (const auto& b : lifted.blocks) {
    t.pu.push_back(b * u);
    t.qv.push_back(b * v);
    t.r.array() += t.pu.back().array() * t.qv.back().array();
  }
  return t;
}

namespace {

double lp_norm(const Eigen::VectorXd& r, int p) {
  if (p == 1) return r.cwiseAbs().sum();
  if (p == 2) return r.norm();
  return std::pow(r.cwiseAbs().array().pow(p).sum(), 1.0 / p);
}

// Rows of the Jacobian of r with respect to the vector whose partner terms
// are `partner`: sum_l diag(partner_l) B_l.
Eigen::MatrixXd partner_jacobian(const Lifted& lifted, const std::vector<Eigen::VectorXd>& partner) {
  Eigen::MatrixXd g = partner[0].asDiagonal() * lifted.blocks[0];
  for (std::size_t l = 1; l < lifted.blocks.size(); ++l) g += partner[l].asDiagonal() * lifted.blocks[l];
  return g;
}

}  // namespace

double lower_true_value(const Lifted& lifted, int p, const Eigen::VectorXd& z) {
  const auto t = lower_terms(lifted, z.head(lifted.n), z.tail(lifted.n));
  return lp_norm(t.r, p);
}

Eigen::VectorXd lower_retract(const Lifted& lifted, const Eigen::VectorXd& z) {
  const Index n = lifted.n;
  Eigen::VectorXd u = z.head(n);
  Eigen::VectorXd v = z.tail(n);
  u.normalize();
  for (const auto& c : lifted.couplings) {
    Eigen::VectorXd w = c.transpose() * u;  // constraint reads w . v = 0, |w| = 1
    w.normalize();
    v -= w.dot(v) * w;
  }
  const double nv = v.norm();
  if (nv < 1e-300) {
    // Degenerate: pick any feasible direction.
    Eigen::MatrixXd cons(static_cast<Index>(lifted.couplings.size()), n);
    for (std::size_t i = 0; i < lifted.couplings.size(); ++i) {
      cons.row(static_cast<Index>(i)) = (lifted.couplings[i].transpose() * u).transpose();
    }
    v = null_basis(cons).col(0);
  } else {
    v /= nv;
  }
  Eigen::VectorXd out(2 * n);
  out << u, v;
  return out;
}

SmoothProblem lower_problem(const Lifted& lifted, const Penalty& penalty) {
  const Index n = lifted.n;
  SmoothProblem prob;
  prob.value = [&lifted, penalty, n](const Eigen::VectorXd& z) {
    const auto t = lower_terms(lifted, z.head(n), z.tail(n));
    double s = 0.0;
    for (Index j = 0; j < t.r.size(); ++j) s += penalty.value(t.r[j]);
    return s;
  };
  prob.derivatives = [&lifted, penalty, n](const Eigen::VectorXd& z, Eigen::VectorXd& g,
                                           Eigen::MatrixXd& h) {
    const auto t = lower_terms(lifted, z.head(n), z.tail(n));
    const Index m = t.r.size();
    Eigen::VectorXd d1(m);
    Eigen::VectorXd d2(m);
    for (Index j = 0; j < m; ++j) {
      d1[j] = penalty.d1(t.r[j]);
      d2[j] = penalty.d2(t.r[j]);
    }
    const Eigen::MatrixXd gu = partner_jacobian(lifted, t.qv);  // dr/du
    const Eigen::MatrixXd gv = partner_jacobian(lifted, t.pu);  // dr/dv
    g.resize(2 * n);
    g.head(n) = gu.transpose() * d1;
    g.tail(n) = gv.transpose() * d1;
    h.resize(2 * n, 2 * n);
    const Eigen::MatrixXd wu = d2.asDiagonal() * gu;
    const Eigen::MatrixXd wv = d2.asDiagonal() * gv;
    h.topLeftCorner(n, n) = gu.transpose() * wu;
    h.bottomRightCorner(n, n) = gv.transpose() * wv;
    Eigen::MatrixXd cross = gu.transpose() * wv;
    for (const auto& b : lifted.blocks) cross += b.transpose() * (d1.asDiagonal() * b);
    h.topRightCorner(n, n) = cross;
    h.bottomLeftCorner(n, n) = cross.transpose();
  };
  Eigen::MatrixXd su = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  su.topLeftCorner(n, n) = 2.0 * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd sv = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  sv.bottomRightCorner(n, n) = 2.0 * Eigen::MatrixXd::Identity(n, n);
  prob.constraint_hessians = {su, sv};
  for (const auto& c : lifted.couplings) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    s.topRightCorner(n, n) = c;
    s.bottomLeftCorner(n, n) = c.transpose();
    prob.constraint_hessians.push_back(std::move(s));
  }
  prob.retract = [&lifted](const Eigen::VectorXd& z) { return lower_retract(lifted, z); };
  return prob;
}

namespace {

// Minimizes x^T M x over unit x orthogonal to the columns of `cons`.
Eigen::VectorXd constrained_min_eigvec(const Eigen::MatrixXd& mat, const Eigen::MatrixXd& cons) {
  const Eigen::MatrixXd basis = null_basis(cons.transpose());
  const Eigen::MatrixXd reduced = basis.transpose() * mat * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(reduced);
  return basis * es.eigenvectors().col(0);
}

Eigen::MatrixXd coupling_vectors(const Lifted& lifted, const Eigen::VectorXd& other, bool transpose) {
  Eigen::MatrixXd cons(lifted.n, static_cast<Index>(lifted.couplings.size()));
  for (std::size_t i = 0; i < lifted.couplings.size(); ++i) {
    cons.col(static_cast<Index>(i)) =
        transpose ? Eigen::VectorXd(lifted.couplings[i].transpose() * other)
                  : Eigen::VectorXd(lifted.couplings[i] * other);
  }
  return cons;
}

// One alternating pass: v given u, then u given v, each minimizing the
// weighted quadratic sum_j w_j r_j^2 exactly.
void block_pass(const Lifted& lifted, const Eigen::VectorXd& weights, Eigen::VectorXd& z) {
  const Index n = lifted.n;
  Eigen::VectorXd u = z.head(n);
  Eigen::VectorXd v = z.tail(n);
  {
    const auto t = lower_terms(lifted, u, v);
    const Eigen::MatrixXd gv = partner_jacobian(lifted, t.pu);
    v = constrained_min_eigvec(gv.transpose() * weights.asDiagonal() * gv,
                               coupling_vectors(lifted, u, true));
  }
  {
    const auto t = lower_terms(lifted, u, v);
    const Eigen::MatrixXd gu = partner_jacobian(lifted, t.qv);
    u = constrained_min_eigvec(gu.transpose() * weights.asDiagonal() * gu,
                               coupling_vectors(lifted, v, false));
  }
  z << u, v;
  z = lower_retract(lifted, z);
}

// p = 1 minima sit on kinks where several r_j vanish. Pins the cluster of
// near-zero residuals as equality constraints and runs Newton on the linear
// remainder sum_j sign(r_j) r_j.
void vertex_polish(const Lifted& lifted, const OptimizerConfig& cfg, StartOutcome& best) {
  const Index n = lifted.n;
  const Index big_n = 2 * n;
  const double scale = std::max(lifted.mass, 1e-300);
  const auto base = lower_problem(lifted, Penalty{1, 0.0});
  const Index dof = big_n - static_cast<Index>(base.constraint_hessians.size()) -
                    (lifted.field == Field::Complex ? 1 : 0);
  const Eigen::VectorXd r = lower_terms(lifted, best.z.head(n), best.z.tail(n)).r;
  const Index m = r.size();
  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return std::abs(r[a]) < std::abs(r[b]); });
  Index k = 0;
  double gap = 10.0;
  for (Index i = 1; i <= std::min(dof, m - 1); ++i) {
    const double ratio = std::abs(r[order[i]]) / std::max(std::abs(r[order[i - 1]]), 1e-300);
    if (ratio > gap) {
      gap = ratio;
      k = i;
    }
  }
  if (k == 0) return;

  Eigen::VectorXd sign = r.unaryExpr([](double x) { return x < 0 ? -1.0 : 1.0; });
  std::vector<Eigen::MatrixXd> pinned;
  for (Index i = 0; i < k; ++i) {
    const Index j = order[static_cast<std::size_t>(i)];
    sign[j] = 0.0;
    Eigen::MatrixXd mj = Eigen::MatrixXd::Zero(n, n);
    for (const auto& b : lifted.blocks) mj += b.row(j).transpose() * b.row(j);
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(big_n, big_n);
    s.topRightCorner(n, n) = mj;
    s.bottomLeftCorner(n, n) = mj.transpose();
    pinned.push_back(std::move(s));
  }

  SmoothProblem prob;
  prob.value = [&lifted](const Eigen::VectorXd& z) { return lower_true_value(lifted, 1, z); };
  prob.derivatives = [&lifted, sign, n](const Eigen::VectorXd& z, Eigen::VectorXd& g, Eigen::MatrixXd& h) {
    const auto t = lower_terms(lifted, z.head(n), z.tail(n));
    g.resize(2 * n);
    g.head(n) = partner_jacobian(lifted, t.qv).transpose() * sign;
    g.tail(n) = partner_jacobian(lifted, t.pu).transpose() * sign;
    Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(n, n);
    for (const auto& b : lifted.blocks) cross += b.transpose() * (sign.asDiagonal() * b);
    h = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    h.topRightCorner(n, n) = cross;
    h.bottomLeftCorner(n, n) = cross.transpose();
  };
  prob.constraint_hessians = base.constraint_hessians;
  prob.constraint_hessians.insert(prob.constraint_hessians.end(), pinned.begin(), pinned.end());
  const auto& sphere = base.constraint_hessians;
  prob.retract = [&lifted, &pinned, &sphere, scale, big_n](const Eigen::VectorXd& y) {
    Eigen::VectorXd z = lower_retract(lifted, y);
    const auto k = static_cast<Index>(pinned.size());
    for (int it = 0; it < 30; ++it) {
      Eigen::VectorXd res(k);
      Eigen::MatrixXd jac(k, big_n);
      for (Index i = 0; i < k; ++i) {
        const Eigen::VectorXd sz = pinned[static_cast<std::size_t>(i)] * z;
        res[i] = 0.5 * z.dot(sz);
        jac.row(i) = sz.transpose();
      }
      if (res.cwiseAbs().maxCoeff() <= 1e-15 * scale) break;
      Eigen::MatrixXd cons(static_cast<Index>(sphere.size()), big_n);
      for (std::size_t i = 0; i < sphere.size(); ++i) cons.row(static_cast<Index>(i)) = (sphere[i] * z).transpose();
      const Eigen::MatrixXd tb = null_basis(cons);
      const Eigen::VectorXd step = tb * (jac * tb).completeOrthogonalDecomposition().solve(-res);
      z = lower_retract(lifted, z + step);
    }
    return z;
  };

  Eigen::VectorXd z = prob.retract(best.z);
  const auto res = newton_polish(prob, z, 30, cfg.gradient_tolerance * scale, cfg.step_policy);
  best.iterations += res.iterations;
  const double val = lower_true_value(lifted, 1, z);
  if (val < best.value) {
    best.value = val;
    best.z = z;
  }
}

Eigen::VectorXd random_point(const Lifted& lifted, Rng& rng, int copies) {
  Eigen::VectorXd z(copies * lifted.n);
  for (Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  return z;
}

}  // namespace

StartOutcome solve_lower_start(const Lifted& lifted, int p, const OptimizerConfig& cfg, RngSpec spec) {
  Rng rng(spec);
  const Index n = lifted.n;
  const double scale = std::max(lifted.mass, 1e-300);
  Eigen::VectorXd z = lower_retract(lifted, random_point(lifted, rng, 2));
  StartOutcome best{lower_true_value(lifted, p, z), z, 0};
  auto consider = [&](const Eigen::VectorXd& cand) {
    const double val = lower_true_value(lifted, p, cand);
    if (val < best.value) {
      best.value = val;
      best.z = cand;
    }
  };

  if (p == 1) {
    // Normalized projected subgradient with diminishing steps.
    const auto prob = lower_problem(lifted, Penalty{1, 0.0});
    const int iters = std::min(cfg.max_iters, 200);
    for (int k = 0; k < iters; ++k) {
      const auto t = lower_terms(lifted, z.head(n), z.tail(n));
      Eigen::VectorXd sgn = t.r.unaryExpr([](double r) { return r > 0 ? 1.0 : (r < 0 ? -1.0 : 0.0); });
      const Eigen::MatrixXd gu = partner_jacobian(lifted, t.qv);
      const Eigen::MatrixXd gv = partner_jacobian(lifted, t.pu);
      Eigen::VectorXd sub(2 * n);
      sub << gu.transpose() * sgn, gv.transpose() * sgn;
      Eigen::MatrixXd jac(static_cast<Index>(prob.constraint_hessians.size()), 2 * n);
      for (std::size_t i = 0; i < prob.constraint_hessians.size(); ++i) {
        jac.row(static_cast<Index>(i)) = (prob.constraint_hessians[i] * z).transpose();
      }
      const Eigen::MatrixXd zb = null_basis(jac);
      const Eigen::VectorXd dir = zb * (zb.transpose() * sub);
      const double dn = dir.norm();
      ++best.iterations;
      if (dn < 1e-300) break;
      z = lower_retract(lifted, z - (0.1 / std::sqrt(k + 1.0)) * dir / dn);
      consider(z);
    }
    z = best.z;
  }

  // Alternating exact block minimization (p = 2) or IRLS (p = 1).
  {
    const int iters = std::min(cfg.max_iters, 100);
    double prev = lower_true_value(lifted, p, z);
    for (int k = 0; k < iters; ++k) {
      Eigen::VectorXd w = Eigen::VectorXd::Ones(lifted.m);
      if (p == 1) {
        const auto t = lower_terms(lifted, z.head(n), z.tail(n));
        const double eps = std::max(1e-3 * t.r.cwiseAbs().mean(), 1e-12 * scale / lifted.m);
        w = (t.r.array().square() + eps * eps).sqrt().inverse();
      } else if (p > 2) {
        const auto t = lower_terms(lifted, z.head(n), z.tail(n));
        w = t.r.cwiseAbs().array().pow(p - 2) + 1e-12;
      }
      block_pass(lifted, w, z);
      ++best.iterations;
      const double cur = lower_true_value(lifted, p, z);
      consider(z);
      if (std::abs(prev - cur) <= 1e-13 * scale) break;
      prev = cur;
    }
    z = best.z;
  }

  // Newton polish on the (smoothed) objective.
  const double tol = cfg.gradient_tolerance * scale;
  if (p == 1) {
    for (double eps = 1e-2 * scale / std::max<Index>(lifted.m, 1); eps > 1e-13 * scale; eps *= 0.1) {
      const auto prob = lower_problem(lifted, Penalty{1, eps});
      const auto res = newton_polish(prob, z, 30, tol, cfg.step_policy);
      best.iterations += res.iterations;
      consider(z);
    }
    vertex_polish(lifted, cfg, best);
  } else {
    const auto prob = lower_problem(lifted, Penalty{p, 0.0});
    const auto res = newton_polish(prob, z, 100, tol * scale, cfg.step_policy);
    best.iterations += res.iterations;
    consider(z);
  }
  return best;
}

// ------------------------------------------------------------- upper problem

double upper_true_value(const Lifted& lifted, int p, const Eigen::VectorXd& u) {
  Eigen::VectorXd q = Eigen::VectorXd::Zero(lifted.m);
  for (const auto& b : lifted.blocks) q.array() += (b * u).array().square();
  return std::pow(q.array().pow(p).sum(), 1.0 / p);
}

StartOutcome solve_upper_start(const Lifted& lifted, int p, const OptimizerConfig& cfg, RngSpec spec) {
  Rng rng(spec);
  const double scale = std::max(lifted.mass, 1e-300);
  Eigen::VectorXd u = random_point(lifted, rng, 1).normalized();
  auto grad_terms = [&](const Eigen::VectorXd& x, std::vector<Eigen::VectorXd>& proj, Eigen::VectorXd& q) {
    proj.clear();
    q = Eigen::VectorXd::Zero(lifted.m);
    for (const auto& b : lifted.blocks) {
      proj.push_back(b * x);
      q.array() += proj.back().array().square();
    }
  };
  StartOutcome out{upper_true_value(lifted, p, u), u, 0};

  // Minorize-maximize: F(u) = sum q_j^p is convex, so u <- grad F / |grad F|
  // never decreases F on the sphere.
  std::vector<Eigen::VectorXd> proj;
  Eigen::VectorXd q;
  double prev = out.value;
  for (int k = 0; k < cfg.max_iters; ++k) {
    grad_terms(u, proj, q);
    const Eigen::VectorXd w = p == 1 ? Eigen::VectorXd::Ones(lifted.m)
                                     : Eigen::VectorXd(q.array().pow(p - 1));
    Eigen::VectorXd g = Eigen::VectorXd::Zero(lifted.n);
    for (std::size_t l = 0; l < lifted.blocks.size(); ++l) {
      g += lifted.blocks[l].transpose() * (w.array() * proj[l].array()).matrix();
    }
    const double gn = g.norm();
    ++out.iterations;
    if (gn < 1e-300) break;
    u = g / gn;
    const double cur = upper_true_value(lifted, p, u);
    if (cur - prev <= 1e-15 * scale) {
      prev = std::max(prev, cur);
      break;
    }
    prev = cur;
  }

  SmoothProblem prob;
  prob.value = [&](const Eigen::VectorXd& x) {
    std::vector<Eigen::VectorXd> pr;
    Eigen::VectorXd qq;
    grad_terms(x, pr, qq);
    return -qq.array().pow(p).sum();
  };
  prob.derivatives = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g, Eigen::MatrixXd& h) {
    std::vector<Eigen::VectorXd> pr;
    Eigen::VectorXd qq;
    grad_terms(x, pr, qq);
    const Eigen::VectorXd f1 = p * qq.array().pow(p - 1);
    const Eigen::VectorXd f2 = p == 1 ? Eigen::VectorXd::Zero(lifted.m)
                                      : Eigen::VectorXd(p * (p - 1) * qq.array().pow(p - 2));
    g = Eigen::VectorXd::Zero(lifted.n);
    h = Eigen::MatrixXd::Zero(lifted.n, lifted.n);
    Eigen::MatrixXd jq = Eigen::MatrixXd::Zero(lifted.m, lifted.n);  // dq/du
    for (std::size_t l = 0; l < lifted.blocks.size(); ++l) {
      const auto& b = lifted.blocks[l];
      g += 2.0 * b.transpose() * (f1.array() * pr[l].array()).matrix();
      h += 2.0 * b.transpose() * (f1.asDiagonal() * b);
      jq += 2.0 * pr[l].asDiagonal() * b;
    }
    h += jq.transpose() * (f2.asDiagonal() * jq);
    g = -g;
    h = -h;
  };
  prob.constraint_hessians = {2.0 * Eigen::MatrixXd::Identity(lifted.n, lifted.n)};
  prob.retract = [](const Eigen::VectorXd& x) { return Eigen::VectorXd(x.normalized()); };
  Eigen::VectorXd polished = u;
  const double tol = cfg.gradient_tolerance * std::pow(scale, p);
  const auto res = newton_polish(prob, polished, 50, tol, cfg.step_policy);
  out.iterations += res.iterations;
  const double pv = upper_true_value(lifted, p, polished);
  out.value = upper_true_value(lifted, p, u);
  out.z = u;
  if (pv > out.value) {
    out.value = pv;
    out.z = polished;
  }
  return out;
}

}  // namespace prcond::detail
