// SPDX-License-Identifier: Apache-2.0
#include "prcond/serialize.hpp"

#include <cmath>

#ifndef PRCOND_GIT_DESCRIBE
#define PRCOND_GIT_DESCRIBE "unknown"
#endif

namespace prcond {

namespace {

nlohmann::json number_or_null(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

}  // namespace

const char* build_version() { return PRCOND_GIT_DESCRIBE; }

nlohmann::json to_json(const FieldVector& x) {
  nlohmann::json out = nlohmann::json::array();
  for (Index i = 0; i < x.size(); ++i) {
    if (x.field() == Field::Real) {
      out.push_back(x[i].real());
    } else {
      out.push_back({x[i].real(), x[i].imag()});
    }
  }
  return out;
}

nlohmann::json to_json(const OptimizerConfig& cfg) {
  return {
      {"starts", cfg.starts},
      {"max_iters", cfg.max_iters},
      {"gradient_tolerance", cfg.gradient_tolerance},
      {"step_policy",
       {{"armijo", cfg.step_policy.armijo},
        {"shrink", cfg.step_policy.shrink},
        {"max_backtracks", cfg.step_policy.max_backtracks}}},
      {"seed", cfg.rng.seed},
      {"stream", cfg.rng.stream},
      {"use_grid_oracle", cfg.use_grid_oracle},
      {"grid",
       {{"resolution", cfg.grid.resolution},
        {"refine_rounds", cfg.grid.refine_rounds},
        {"refine_zoom", cfg.grid.refine_zoom}}},
  };
}

nlohmann::json to_json(const LipschitzEstimate& est) {
  nlohmann::json out{
      {"value", est.value},
      {"kind", std::string(to_string(est.kind))},
      {"p", est.p},
      {"method", std::string(to_string(est.method))},
      {"solver", {{"starts", est.stats.starts}, {"iterations", est.stats.iterations}, {"seed", est.stats.seed}}},
  };
  if (const auto* pair = std::get_if<UnitPair>(&est.witness)) {
    out["witness"] = {{"u", to_json(pair->u())},
                      {"v", to_json(pair->v())},
                      {"constraint", std::string(to_string(pair->constraint()))}};
  } else {
    out["witness"] = {{"u", to_json(std::get<FieldVector>(est.witness))}};
  }
  out["certified_band"] = est.certified_band
                              ? nlohmann::json::array({est.certified_band->first, est.certified_band->second})
                              : nlohmann::json(nullptr);
  return out;
}

nlohmann::json to_json(const ConditionReport& report) {
  nlohmann::json flags = nlohmann::json::array();
  if (report.no_phase_retrieval_suspected) flags.push_back("NoPhaseRetrievalSuspected");
  return {
      {"p", report.p},
      {"field", std::string(to_string(report.field))},
      {"m", report.m},
      {"d", report.d},
      {"L", report.L},
      {"U", report.U},
      {"beta", number_or_null(report.beta)},
      {"theoretical_lower_bound", report.theoretical_lower_bound},
      {"flags", flags},
      {"lower", to_json(report.lower)},
      {"upper", to_json(report.upper)},
      {"optimizer", to_json(report.config)},
  };
}

}  // namespace prcond
