// SPDX-License-Identifier: Apache-2.0
#include "prcond/rng.hpp"

#include <cmath>
#include <numbers>

namespace prcond {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngSpec RngSpec::child(std::uint64_t index) const {
  return RngSpec{seed, splitmix64(stream * 0x9e3779b97f4a7c15ULL + splitmix64(index + 1))};
}

Rng::Rng(RngSpec spec) {
  std::uint64_t s = splitmix64(spec.seed);
  s = splitmix64(s ^ splitmix64(spec.stream + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32),
                    static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.stream)};
  engine_.seed(seq);
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return z;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  return r * std::cos(a);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

SensingMatrix sample_gaussian(Field field, Index m, Index d, RngSpec spec) {
  if (m < 1 || d < 1) throw DimensionError("sample_gaussian needs m >= 1 and d >= 1");
  Rng rng(spec);
  SensingMatrix::Storage rows(m, d);
  for (Index j = 0; j < m; ++j) {
    for (Index k = 0; k < d; ++k) {
      rows(j, k) = field == Field::Real ? Complex(rng.normal(), 0.0) : rng.complex_normal();
    }
  }
  return SensingMatrix(field, std::move(rows));
}

FieldVector random_unit_vector(Field field, Index d, Rng& rng) {
  Eigen::VectorXcd v(d);
  double n2 = 0.0;
  do {
    for (Index k = 0; k < d; ++k) {
      v[k] = field == Field::Real ? Complex(rng.normal(), 0.0) : rng.complex_normal();
    }
    n2 = v.squaredNorm();
  } while (n2 < 1e-300);
  return FieldVector(field, v / std::sqrt(n2));
}

}  // namespace prcond
