// SPDX-License-Identifier: Apache-2.0
//
// Monte-Carlo harness over standard Gaussian sensing matrices.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "prcond/lipschitz.hpp"

namespace prcond {

/// Optimizer budget used per trial: 16 starts, no nested parallelism.
OptimizerConfig sweep_optimizer_defaults();

struct ExperimentConfig {
  Field field = Field::Real;
  int p = 2;
  int m = 0;
  int d = 0;
  int trials = 1;
  RngSpec rng;
  OptimizerConfig optimizer = sweep_optimizer_defaults();
  /// Worker cap for the trial pool (0 = worker_count()).
  unsigned threads = 0;

  void validate() const;
};

struct ExperimentRecord {
  int trial = 0;
  std::uint64_t seed = 0;  // stream id the trial's matrix was drawn from
  int m = 0;
  int d = 0;
  Field field = Field::Real;
  int p = 2;
  double L = 0.0;
  double U = 0.0;
  double beta = 0.0;
  long runtime_ms = 0;
  bool failed = false;
  std::string error;
};

struct SweepSummary {
  int count = 0;
  int failed = 0;
  double mean = 0.0;
  double q05 = 0.0;
  double q95 = 0.0;
  double asymptote = 0.0;
  double gap_to_asymptote = 0.0;
};

struct SweepResult {
  std::vector<ExperimentRecord> records;
  SweepSummary summary;
  std::vector<std::string> warnings;
};

SweepResult run_gaussian_sweep(const ExperimentConfig& cfg);

/// Asymptotic bound the sweep gap is measured against: pi/2 (real l1),
/// sqrt(3) (real l2), 2 (complex).
double asymptotic_bound(Field field, int p);

struct ConvergenceRow {
  int m = 0;
  double mean_beta = 0.0;
  double q95_beta = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  /// Spearman correlation of mean_beta against m (0 for a single row).
  double spearman = 0.0;
};

ConvergenceTable convergence_table(Field field, int p, int d, const std::vector<int>& m_list, int trials,
                                   RngSpec rng, const OptimizerConfig& optimizer = sweep_optimizer_defaults());

double spearman_correlation(const std::vector<double>& x, const std::vector<double>& y);

/// Linear-interpolation quantile of unsorted data, q in [0, 1].
double quantile(std::vector<double> values, double q);

struct TailCheck {
  int trials = 0;
  int exceedances = 0;
  double rate = 0.0;
  double bound = 0.0;    // (3m)^{1/4} + sqrt(d) + t
  double ceiling = 0.0;  // 2 exp(-t^2/2)
  double stderr_ = 0.0;  // binomial standard error at the ceiling
  bool within = false;   // rate <= ceiling + 3 stderr
};

/// Empirical exceedance of ||A||_{2->4} = sqrt(U^{l2}) over the bound.
TailCheck tail_check_two_to_four(int m, int d, double t, int trials, RngSpec rng);

void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records);
void write_convergence_csv(std::ostream& out, const ConvergenceTable& table);
nlohmann::json summary_json(const ExperimentConfig& cfg, const SweepResult& result);

}  // namespace prcond
