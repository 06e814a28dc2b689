// SPDX-License-Identifier: Apache-2.0
//
// Optimal lower/upper Lipschitz constants of x -> |Ax|^2 with respect to
// dist_H and the l_p norm, via their variational forms:
//   L = inf_{|u|=|v|=1, Im<u,v>=0} (sum_j |Re(u* a_j a_j* v)|^p)^{1/p}
//   U = (sup_{|u|=1} sum_j |a_j* u|^{2p})^{1/p}
// and the orthogonal-restricted infimum M_A (same objective, <u,v> = 0).
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>

#include "prcond/core.hpp"
#include "prcond/rng.hpp"

namespace prcond {

enum class EstimateKind { LowerL, UpperU, OrthogonalM };
enum class Method { MultiStartLocal, GridOracle, ClosedForm };

std::string_view to_string(EstimateKind kind);
std::string_view to_string(Method method);

/// Backtracking line-search parameters shared by every local solver.
struct StepPolicy {
  double armijo = 1e-4;
  double shrink = 0.5;
  int max_backtracks = 40;
};

/// Oracle grid: points per angle axis, refinement rounds, and the per-round
/// cell shrink factor.
struct GridSpec {
  int resolution = 2048;
  int refine_rounds = 3;
  double refine_zoom = 0.05;

  void validate() const;
};

struct OptimizerConfig {
  int starts = 64;
  int max_iters = 500;
  double gradient_tolerance = 1e-10;
  StepPolicy step_policy;
  RngSpec rng;
  /// Worker cap for the multi-start loop (0 = worker_count()).
  unsigned threads = 0;
  /// At d = 2, also run the grid oracle and populate certified bands.
  bool use_grid_oracle = true;
  GridSpec grid;

  void validate() const;
};

struct SolverStats {
  int starts = 0;
  long iterations = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

struct LipschitzEstimate {
  double value = 0.0;
  EstimateKind kind = EstimateKind::LowerL;
  int p = 2;
  /// UnitPair for LowerL / OrthogonalM, a unit vector for UpperU.
  std::variant<FieldVector, UnitPair> witness;
  Method method = Method::MultiStartLocal;
  std::optional<std::pair<double, double>> certified_band;
  SolverStats stats;

  const UnitPair& pair() const { return std::get<UnitPair>(witness); }
  const FieldVector& vector() const { return std::get<FieldVector>(witness); }
};

enum class ReportFlag { NoPhaseRetrievalSuspected };

struct ConditionReport {
  int p = 2;
  Field field = Field::Real;
  Index m = 0;
  Index d = 0;
  double L = 0.0;
  double U = 0.0;
  double beta = 0.0;
  double theoretical_lower_bound = 0.0;
  bool no_phase_retrieval_suspected = false;
  LipschitzEstimate lower;
  LipschitzEstimate upper;
  OptimizerConfig config;
};

/// Relative threshold below which L is treated as zero.
inline constexpr double kNoPhaseRetrievalThreshold = 1e-8;

// Objectives, evaluated directly from the rows.
double lower_objective(const SensingMatrix& a, int p, const FieldVector& u, const FieldVector& v);
double upper_objective(const SensingMatrix& a, int p, const FieldVector& u);

LipschitzEstimate upper_lipschitz(const SensingMatrix& a, int p, const OptimizerConfig& cfg = {});
LipschitzEstimate lower_lipschitz(const SensingMatrix& a, int p, const OptimizerConfig& cfg = {});
LipschitzEstimate orthogonal_lower_bound(const SensingMatrix& a, int p, const OptimizerConfig& cfg = {});
ConditionReport condition_number(const SensingMatrix& a, int p, const OptimizerConfig& cfg = {});

struct TightFrameCheck {
  bool tight = false;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

/// Samples sum_j |a_j* x|^4 at random unit x (plus a 10^4-point angle sweep
/// for real d = 2) and reports whether (max - min) / mean <= tol.
TightFrameCheck is_tight_4_frame(const SensingMatrix& a, int samples, double tol,
                                 RngSpec rng = {});

}  // namespace prcond
