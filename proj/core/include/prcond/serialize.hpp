// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <nlohmann/json.hpp>

#include "prcond/lipschitz.hpp"

namespace prcond {

nlohmann::json to_json(const FieldVector& x);
nlohmann::json to_json(const OptimizerConfig& cfg);
nlohmann::json to_json(const LipschitzEstimate& est);
/// Every report field, witnesses, method tags and solver metadata. A
/// non-finite beta is written as null (the flag says why).
nlohmann::json to_json(const ConditionReport& report);

/// `git describe` of the source tree at configure time.
const char* build_version();

}  // namespace prcond
