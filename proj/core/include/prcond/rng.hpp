// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "prcond/core.hpp"

namespace prcond {

/// Seed plus stream id. Equal specs give bit-identical sequences.
struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// An independent sub-stream, e.g. one per optimizer start or per trial.
  RngSpec child(std::uint64_t index) const;

  bool operator==(const RngSpec&) const = default;
};

std::uint64_t splitmix64(std::uint64_t x);

/// mt19937_64 seeded through SplitMix64 from (seed, stream); Gaussians by
/// Box-Muller on 53-bit uniforms.
class Rng {
 public:
  static constexpr const char* kGeneratorName = "mt19937_64+splitmix64";
  static constexpr const char* kGaussianMethod = "box-muller";

  explicit Rng(RngSpec spec);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  /// Standard normal N(0, 1).
  double normal();
  /// N(0, 1/2) + i N(0, 1/2), so that E|z|^2 = 1.
  Complex complex_normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// i.i.d. standard Gaussian entries (E|a_jk|^2 = 1 in both fields).
SensingMatrix sample_gaussian(Field field, Index m, Index d, RngSpec rng);

/// Uniformly distributed unit vector.
FieldVector random_unit_vector(Field field, Index d, Rng& rng);

}  // namespace prcond
