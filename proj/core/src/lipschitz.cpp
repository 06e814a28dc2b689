// SPDX-License-Identifier: Apache-2.0
#include "prcond/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "prcond/closedform.hpp"
#include "prcond/oracle.hpp"
#include "prcond/parallel.hpp"
#include "solver.hpp"

namespace prcond {

std::string_view to_string(EstimateKind kind) {
  switch (kind) {
    case EstimateKind::LowerL: return "LowerL";
    case EstimateKind::UpperU: return "UpperU";
    case EstimateKind::OrthogonalM: return "OrthogonalM";
  }
  return "?";
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::MultiStartLocal: return "MultiStartLocal";
    case Method::GridOracle: return "GridOracle";
    case Method::ClosedForm: return "ClosedForm";
  }
  return "?";
}

void GridSpec::validate() const {
  if (resolution < 16) throw DomainError("grid resolution must be >= 16");
  if (refine_rounds < 0) throw DomainError("refine_rounds must be >= 0");
  if (!(refine_zoom > 0.0 && refine_zoom < 1.0)) throw DomainError("refine_zoom must lie in (0, 1)");
}

void OptimizerConfig::validate() const {
  if (starts < 1) throw DomainError("starts must be >= 1");
  if (max_iters < 1) throw DomainError("max_iters must be >= 1");
  if (!(gradient_tolerance > 0.0)) throw DomainError("gradient_tolerance must be > 0");
  if (!(step_policy.armijo > 0.0 && step_policy.armijo < 1.0) ||
      !(step_policy.shrink > 0.0 && step_policy.shrink < 1.0) || step_policy.max_backtracks < 1) {
    throw DomainError("invalid step policy");
  }
  grid.validate();
}

double lower_objective(const SensingMatrix& a, int p, const FieldVector& u, const FieldVector& v) {
  require_same_field(a.field(), u.field(), "lower_objective");
  require_same_field(a.field(), v.field(), "lower_objective");
  require_size(a.d(), u.size(), "lower_objective");
  require_size(a.d(), v.size(), "lower_objective");
  const Eigen::VectorXcd au = a.rows() * u.values();
  const Eigen::VectorXcd av = a.rows() * v.values();
  double s = 0.0;
  for (Index j = 0; j < a.m(); ++j) {
    const double r = std::abs((std::conj(au[j]) * av[j]).real());
    s += p == 1 ? r : std::pow(r, p);
  }
  return p == 1 ? s : std::pow(s, 1.0 / p);
}

double upper_objective(const SensingMatrix& a, int p, const FieldVector& u) {
  require_same_field(a.field(), u.field(), "upper_objective");
  require_size(a.d(), u.size(), "upper_objective");
  const Eigen::VectorXd q = (a.rows() * u.values()).cwiseAbs2();
  return std::pow(q.array().pow(p).sum(), 1.0 / p);
}

namespace {

void validate_inputs(int p, const OptimizerConfig& cfg) {
  require_p(p);
  cfg.validate();
}

struct Best {
  double value = 0.0;
  Eigen::VectorXd z;
  long iterations = 0;
};

// Runs every start, then reduces in start order (first strict improvement wins).
template <class Solve, class Better>
Best multi_start(const OptimizerConfig& cfg, Solve&& solve, Better&& better) {
  std::vector<detail::StartOutcome> outcomes(static_cast<std::size_t>(cfg.starts));
  parallel_for(
      outcomes.size(),
      [&](std::size_t s) { outcomes[s] = solve(cfg.rng.child(s)); }, cfg.threads);
  Best best{outcomes[0].value, outcomes[0].z, 0};
  for (const auto& o : outcomes) {
    best.iterations += o.iterations;
    if (better(o.value, best.value)) {
      best.value = o.value;
      best.z = o.z;
    }
  }
  return best;
}

LipschitzEstimate lower_common(const SensingMatrix& a, int p, const OptimizerConfig& cfg,
                               Constraint constraint) {
  validate_inputs(p, cfg);
  const detail::Lifted lifted(a, constraint);
  const Best best = multi_start(
      cfg, [&](RngSpec spec) { return detail::solve_lower_start(lifted, p, cfg, spec); },
      [](double x, double y) { return x < y; });

  const Eigen::VectorXd z = detail::lower_retract(lifted, best.z);
  UnitPair pair(lifted.unlift(z.head(lifted.n)), lifted.unlift(z.tail(lifted.n)), constraint);
  const double value = lower_objective(a, p, pair.u(), pair.v());
  LipschitzEstimate est{value,
                        constraint == Constraint::Orthogonal ? EstimateKind::OrthogonalM
                                                             : EstimateKind::LowerL,
                        p,
                        std::move(pair),
                        Method::MultiStartLocal,
                        std::nullopt,
                        {cfg.starts, best.iterations, cfg.rng.seed, cfg.rng.stream}};

  if (a.d() == 2 && cfg.use_grid_oracle) {
    const LipschitzEstimate grid = grid_lower_l(a, p, constraint, cfg.grid);
    est.certified_band = grid.certified_band;
    if (grid.value < est.value) {
      est.value = grid.value;
      est.witness = grid.witness;
      est.method = Method::GridOracle;
    }
  }
  if (est.value <= 1e-12 * a.frobenius_squared()) est.value = 0.0;
  return est;
}

}  // namespace

LipschitzEstimate upper_lipschitz(const SensingMatrix& a, int p, const OptimizerConfig& cfg) {
  validate_inputs(p, cfg);
  const detail::Lifted lifted(a, Constraint::Free);
  LipschitzEstimate est;
  est.kind = EstimateKind::UpperU;
  est.p = p;
  est.stats = {cfg.starts, 0, cfg.rng.seed, cfg.rng.stream};
  if (p == 1) {
    const Eigen::MatrixXcd gram = a.rows().adjoint() * a.rows();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
    const Eigen::VectorXcd top = es.eigenvectors().col(a.d() - 1);
    FieldVector u = a.field() == Field::Real
                        ? FieldVector::real(top.real().normalized())
                        : FieldVector::complex(top.normalized());
    est.value = std::max(es.eigenvalues()[a.d() - 1], upper_objective(a, 1, u));
    est.witness = std::move(u);
    est.method = Method::ClosedForm;
    est.stats.starts = 0;
  } else {
    const Best best = multi_start(
        cfg, [&](RngSpec spec) { return detail::solve_upper_start(lifted, p, cfg, spec); },
        [](double x, double y) { return x > y; });
    FieldVector u = lifted.unlift(best.z.normalized());
    est.value = upper_objective(a, p, u);
    est.witness = std::move(u);
    est.method = Method::MultiStartLocal;
    est.stats.iterations = best.iterations;
  }
  if (a.d() == 2 && cfg.use_grid_oracle) {
    const LipschitzEstimate grid = grid_upper_u(a, p, cfg.grid);
    est.certified_band = grid.certified_band;
    if (grid.value > est.value) {
      est.value = grid.value;
      est.witness = grid.witness;
      est.method = Method::GridOracle;
    }
  }
  return est;
}

LipschitzEstimate lower_lipschitz(const SensingMatrix& a, int p, const OptimizerConfig& cfg) {
  return lower_common(a, p, cfg, Constraint::RealInner);
}

LipschitzEstimate orthogonal_lower_bound(const SensingMatrix& a, int p, const OptimizerConfig& cfg) {
  if (a.d() < 2) throw DimensionError("orthogonal pairs need d >= 2");
  return lower_common(a, p, cfg, Constraint::Orthogonal);
}

ConditionReport condition_number(const SensingMatrix& a, int p, const OptimizerConfig& cfg) {
  validate_inputs(p, cfg);
  if (a.frobenius_squared() == 0.0) throw DomainError("condition_number: sensing matrix is zero");
  ConditionReport rep;
  rep.p = p;
  rep.field = a.field();
  rep.m = a.m();
  rep.d = a.d();
  rep.config = cfg;
  rep.upper = upper_lipschitz(a, p, cfg);
  rep.lower = lower_lipschitz(a, p, cfg);
  rep.U = rep.upper.value;
  rep.L = rep.lower.value;
  if (rep.L <= kNoPhaseRetrievalThreshold * rep.U) {
    rep.beta = std::numeric_limits<double>::infinity();
    rep.no_phase_retrieval_suspected = true;
  } else {
    rep.beta = rep.U / rep.L;
  }
  if (a.d() == 1) {
    rep.theoretical_lower_bound = 1.0;
  } else if (a.field() == Field::Real && p == 1 && a.m() >= 3) {
    rep.theoretical_lower_bound = universal_lower_bound(a.field(), p, static_cast<int>(a.m())).value;
  } else {
    rep.theoretical_lower_bound = universal_lower_bound(a.field(), p).value;
  }
  return rep;
}

TightFrameCheck is_tight_4_frame(const SensingMatrix& a, int samples, double tol, RngSpec spec) {
  if (samples < 100) throw DomainError("is_tight_4_frame needs at least 100 samples");
  if (!(tol >= 0.0)) throw DomainError("tolerance must be nonnegative");
  TightFrameCheck out;
  out.min = std::numeric_limits<double>::infinity();
  out.max = -out.min;
  double sum = 0.0;
  long count = 0;
  auto add = [&](const FieldVector& x) {
    const double v = (a.rows() * x.values()).cwiseAbs2().array().square().sum();
    out.min = std::min(out.min, v);
    out.max = std::max(out.max, v);
    sum += v;
    ++count;
  };
  Rng rng(spec);
  for (int s = 0; s < samples; ++s) add(random_unit_vector(a.field(), a.d(), rng));
  if (a.field() == Field::Real && a.d() == 2) {
    constexpr int kSweep = 10000;
    for (int i = 0; i < kSweep; ++i) {
      const double t = std::numbers::pi * i / kSweep;
      add(FieldVector::real(Eigen::Vector2d(std::cos(t), std::sin(t))));
    }
  }
  out.mean = sum / static_cast<double>(count);
  out.tight = out.mean > 0.0 && (out.max - out.min) / out.mean <= tol;
  return out;
}

}  // namespace prcond
