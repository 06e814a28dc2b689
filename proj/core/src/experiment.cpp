// SPDX-License-Identifier: Apache-2.0
#include "prcond/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>

#include "prcond/closedform.hpp"
#include "prcond/parallel.hpp"
#include "prcond/serialize.hpp"

namespace prcond {

OptimizerConfig sweep_optimizer_defaults() {
  OptimizerConfig cfg;
  cfg.starts = 16;
  cfg.threads = 1;
  return cfg;
}

void ExperimentConfig::validate() const {
  require_p(p);
  if (m < 1 || d < 1) throw DimensionError("experiment needs m, d >= 1");
  if (trials < 1) throw DomainError("experiment needs trials >= 1");
  optimizer.validate();
}

double asymptotic_bound(Field field, int p) { return universal_lower_bound(field, p).value; }

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw DomainError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

SweepResult run_gaussian_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  SweepResult result;
  if (cfg.m < 2 * cfg.d - 1) {
    result.warnings.push_back("m < 2d - 1: no matrix of this shape does phase retrieval");
  }
  result.records.resize(static_cast<std::size_t>(cfg.trials));
  parallel_for(
      result.records.size(),
      [&](std::size_t t) {
        ExperimentRecord& rec = result.records[t];
        const RngSpec spec = cfg.rng.child(t);
        rec.trial = static_cast<int>(t);
        rec.seed = spec.stream;
        rec.m = cfg.m;
        rec.d = cfg.d;
        rec.field = cfg.field;
        rec.p = cfg.p;
        const auto start = std::chrono::steady_clock::now();
        try {
          const SensingMatrix a = sample_gaussian(cfg.field, cfg.m, cfg.d, spec);
          OptimizerConfig opt = cfg.optimizer;
          opt.rng = spec.child(0x6f7074);
          const ConditionReport rep = condition_number(a, cfg.p, opt);
          rec.L = rep.L;
          rec.U = rep.U;
          rec.beta = rep.beta;
        } catch (const std::exception& e) {
          rec.failed = true;
          rec.error = e.what();
          rec.L = rec.U = rec.beta = std::numeric_limits<double>::quiet_NaN();
        }
        rec.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
      },
      cfg.threads);

  std::vector<double> betas;
  for (const auto& r : result.records) {
    if (r.failed) {
      ++result.summary.failed;
    } else {
      betas.push_back(r.beta);
    }
  }
  result.summary.count = static_cast<int>(betas.size());
  result.summary.asymptote = asymptotic_bound(cfg.field, cfg.p);
  if (!betas.empty()) {
    result.summary.mean = std::accumulate(betas.begin(), betas.end(), 0.0) / static_cast<double>(betas.size());
    result.summary.q05 = quantile(betas, 0.05);
    result.summary.q95 = quantile(betas, 0.95);
    result.summary.gap_to_asymptote = result.summary.mean - result.summary.asymptote;
  }
  return result;
}

namespace {

std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman_correlation(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DimensionError("spearman: length mismatch");
  if (x.size() < 2) return 0.0;
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

ConvergenceTable convergence_table(Field field, int p, int d, const std::vector<int>& m_list, int trials,
                                   RngSpec rng, const OptimizerConfig& optimizer) {
  if (m_list.empty()) throw DomainError("convergence_table needs at least one m");
  for (std::size_t i = 1; i < m_list.size(); ++i) {
    if (m_list[i] <= m_list[i - 1]) throw DomainError("convergence_table: m_list must be increasing");
  }
  ConvergenceTable table;
  std::vector<double> ms;
  std::vector<double> means;
  for (std::size_t i = 0; i < m_list.size(); ++i) {
    ExperimentConfig cfg;
    cfg.field = field;
    cfg.p = p;
    cfg.m = m_list[i];
    cfg.d = d;
    cfg.trials = trials;
    cfg.rng = rng.child(static_cast<std::uint64_t>(m_list[i]));
    cfg.optimizer = optimizer;
    const SweepResult res = run_gaussian_sweep(cfg);
    std::vector<double> betas;
    for (const auto& r : res.records) {
      if (!r.failed) betas.push_back(r.beta);
    }
    table.rows.push_back({m_list[i], res.summary.mean, betas.empty() ? 0.0 : quantile(betas, 0.95)});
    ms.push_back(m_list[i]);
    means.push_back(res.summary.mean);
  }
  table.spearman = spearman_correlation(ms, means);
  return table;
}

TailCheck tail_check_two_to_four(int m, int d, double t, int trials, RngSpec rng) {
  if (trials < 100) throw DomainError("tail_check_two_to_four needs at least 100 trials");
  TailCheck out;
  out.trials = trials;
  out.bound = two_to_four_norm_bound(m, d, t);
  out.ceiling = 2.0 * std::exp(-t * t / 2.0);
  std::vector<char> exceeded(static_cast<std::size_t>(trials), 0);
  OptimizerConfig opt = sweep_optimizer_defaults();
  opt.starts = 8;
  opt.use_grid_oracle = false;
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t k) {
    const RngSpec spec = rng.child(k);
    const SensingMatrix a = sample_gaussian(Field::Real, m, d, spec);
    OptimizerConfig local = opt;
    local.rng = spec.child(1);
    const double norm24 = std::sqrt(upper_lipschitz(a, 2, local).value);
    exceeded[k] = norm24 > out.bound ? 1 : 0;
  });
  out.exceedances = static_cast<int>(std::count(exceeded.begin(), exceeded.end(), 1));
  out.rate = static_cast<double>(out.exceedances) / trials;
  const double pc = std::min(out.ceiling, 1.0);
  out.stderr_ = std::sqrt(pc * (1.0 - pc) / trials);
  out.within = out.rate <= out.ceiling + 3.0 * out.stderr_;
  return out;
}

void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  out << "trial,seed,m,d,field,p,L,U,beta,runtime_ms\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& r : records) {
    out << r.trial << ',' << r.seed << ',' << r.m << ',' << r.d << ',' << to_string(r.field) << ',' << r.p << ','
        << r.L << ',' << r.U << ',' << r.beta << ',' << r.runtime_ms << '\n';
  }
}

void write_convergence_csv(std::ostream& out, const ConvergenceTable& table) {
  out << "m,mean_beta,q95_beta\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& r : table.rows) out << r.m << ',' << r.mean_beta << ',' << r.q95_beta << '\n';
}

nlohmann::json summary_json(const ExperimentConfig& cfg, const SweepResult& result) {
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& r : result.records) {
    if (r.failed) failures.push_back({{"trial", r.trial}, {"error", r.error}});
  }
  return {
      {"config",
       {{"field", std::string(to_string(cfg.field))},
        {"p", cfg.p},
        {"m", cfg.m},
        {"d", cfg.d},
        {"trials", cfg.trials},
        {"seed", cfg.rng.seed},
        {"stream", cfg.rng.stream},
        {"optimizer", to_json(cfg.optimizer)}}},
      {"generator", Rng::kGeneratorName},
      {"gaussian", Rng::kGaussianMethod},
      {"git_describe", build_version()},
      {"summary",
       {{"count", result.summary.count},
        {"failed", result.summary.failed},
        {"mean", result.summary.mean},
        {"q05", result.summary.q05},
        {"q95", result.summary.q95},
        {"asymptote", result.summary.asymptote},
        {"gap_to_asymptote", result.summary.gap_to_asymptote}}},
      {"failures", failures},
      {"warnings", result.warnings},
  };
}

}  // namespace prcond
