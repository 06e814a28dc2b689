// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "prcond/lipschitz.hpp"

namespace prcond::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kNoPhaseRetrieval = 3,
  kVerificationFailed = 4,
};

struct VerifyOptions {
  GridSpec grid;
  std::uint64_t seed = 20240607;
  /// Test hook: corrupts one suite so the failure path can be exercised.
  bool inject_fault = false;
};

struct SuiteResult {
  std::string name;
  long cases = 0;
  double max_residual = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  bool passed() const;
};

VerifyReport run_verify(const VerifyOptions& options);

/// Runs one invocation. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace prcond::cli
