// SPDX-License-Identifier: Apache-2.0
//
// Shared substrate: scalar fields, sensing matrices, field-tagged vectors,
// unit pairs, polar row coordinates, the intensity map and the quotient
// metric dist_H(x, y) = || x x* - y y* ||_*.
#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "prcond/errors.hpp"

namespace prcond {

using Complex = std::complex<double>;
using Index = Eigen::Index;

enum class Field { Real, Complex };

std::string_view to_string(Field field);
Field parse_field(std::string_view text);

/// Constraint attached to a pair (u, v) of unit vectors.
///  - RealInner:  Im<u, v> = 0 (vacuous over the reals)
///  - Orthogonal: <u, v> = 0
///  - Free:       no coupling
enum class Constraint { RealInner, Orthogonal, Free };

std::string_view to_string(Constraint constraint);

/// A vector over a tagged field. Entries are stored as std::complex<double>
/// (interleaved re/im); for Field::Real every imaginary part is exactly zero.
class FieldVector {
 public:
  FieldVector() = default;
  FieldVector(Field field, Eigen::VectorXcd values);

  static FieldVector real(const Eigen::VectorXd& values);
  static FieldVector complex(Eigen::VectorXcd values);

  Field field() const { return field_; }
  Index size() const { return values_.size(); }
  const Eigen::VectorXcd& values() const { return values_; }
  Complex operator[](Index i) const { return values_[i]; }

  double norm() const { return values_.norm(); }
  double squared_norm() const { return values_.squaredNorm(); }
  FieldVector normalized() const;
  FieldVector scaled(Complex c) const;

 private:
  Field field_ = Field::Real;
  Eigen::VectorXcd values_;
};

/// <x, y> = x* y (conjugate-linear in the first argument).
Complex inner(const FieldVector& x, const FieldVector& y);

/// The m x d sensing matrix A = (a_1, ..., a_m)*. Row j holds a_j*, so that
/// row j applied to x yields a_j* x. Immutable after construction.
class SensingMatrix {
 public:
  using Storage = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  SensingMatrix(Field field, Storage rows);

  static SensingMatrix real(const Eigen::MatrixXd& rows);
  static SensingMatrix complex(Storage rows);

  Field field() const { return field_; }
  Index m() const { return rows_.rows(); }
  Index d() const { return rows_.cols(); }
  const Storage& rows() const { return rows_; }
  Complex operator()(Index j, Index k) const { return rows_(j, k); }

  /// ||a_j||^2 for every row.
  Eigen::VectorXd row_norms_squared() const;
  double frobenius_squared() const { return rows_.squaredNorm(); }

  SensingMatrix scaled(double c) const;
  /// Keeps the first `count` columns (the d=2 reduction B of a wider A).
  SensingMatrix leading_columns(Index count) const;
  /// A * Q for a real d x d matrix Q (e.g. a planar rotation).
  SensingMatrix times(const Eigen::MatrixXd& q) const;

  bool operator==(const SensingMatrix& other) const = default;

 private:
  Field field_;
  Storage rows_;
};

/// Phase-retrieval parameterization of a row of a d=2 matrix:
///   row = t (cos(phi) e^{i alpha}, sin(phi) e^{i beta}).
struct PolarRow {
  double t = 0.0;
  double phi = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

/// A pair of unit vectors tagged with the constraint it satisfies.
class UnitPair {
 public:
  static constexpr double kNormTolerance = 1e-12;
  static constexpr double kConstraintTolerance = 1e-10;

  UnitPair(FieldVector u, FieldVector v, Constraint constraint);

  Field field() const { return u_.field(); }
  const FieldVector& u() const { return u_; }
  const FieldVector& v() const { return v_; }
  Constraint constraint() const { return constraint_; }

 private:
  FieldVector u_;
  FieldVector v_;
  Constraint constraint_;
};

/// E_m: row j-1 = (cos((j-1)pi/m), sin((j-1)pi/m)), j = 1..m. Requires m >= 3.
SensingMatrix harmonic_frame(int m);

/// Psi_A(x) = |A x|^2 componentwise.
Eigen::VectorXd psi_map(const SensingMatrix& a, const FieldVector& x);

/// ||x x* - y y*||_* by the product formula, cross-checked against the
/// eigenvalues of the rank-2 operator restricted to span{x, y}.
double dist_h(const FieldVector& x, const FieldVector& y);

/// Product formula sqrt(|x|^2+|y|^2-2|<x,y>|) sqrt(|x|^2+|y|^2+2|<x,y>|).
double dist_h_product(const FieldVector& x, const FieldVector& y);

/// Sum of absolute eigenvalues of x x* - y y* on span{x, y}.
double dist_h_eigen(const FieldVector& x, const FieldVector& y);

/// Decomposes every row of a d=2 matrix. Real rows with a negative second
/// entry are sign-flipped first (a and -a give identical measurements), so
/// reconstruction reproduces real rows up to a sign.
std::vector<PolarRow> to_polar(const SensingMatrix& a);

/// Inverse of to_polar for a single row.
Eigen::RowVector2cd from_polar(const PolarRow& row, Field field);

// Validation helpers shared by the modules.
void require_same_field(Field a, Field b, std::string_view what);
void require_size(Index expected, Index actual, std::string_view what);

}  // namespace prcond
