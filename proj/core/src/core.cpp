// SPDX-License-Identifier: Apache-2.0
#include "prcond/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace prcond {

namespace {

bool all_finite(const Eigen::Ref<const Eigen::VectorXcd>& v) {
  for (Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) return false;
  }
  return true;
}

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a < 0.0) a += two_pi;
  if (a >= two_pi) a = 0.0;
  return a;
}

}  // namespace

std::string_view to_string(Field field) {
  return field == Field::Real ? "real" : "complex";
}

Field parse_field(std::string_view text) {
  if (text == "real" || text == "Real" || text == "R") return Field::Real;
  if (text == "complex" || text == "Complex" || text == "C") return Field::Complex;
  throw ParseError("unknown field '" + std::string(text) + "' (expected real or complex)");
}

std::string_view to_string(Constraint constraint) {
  switch (constraint) {
    case Constraint::RealInner: return "RealInner";
    case Constraint::Orthogonal: return "Orthogonal";
    case Constraint::Free: return "Free";
  }
  return "?";
}

void require_same_field(Field a, Field b, std::string_view what) {
  if (a != b) {
    throw FieldMismatchError(std::string(what) + ": mixed real/complex operands");
  }
}

void require_size(Index expected, Index actual, std::string_view what) {
  if (expected != actual) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(expected) +
                         ", got " + std::to_string(actual));
  }
}

// ---------------------------------------------------------------- FieldVector

FieldVector::FieldVector(Field field, Eigen::VectorXcd values)
    : field_(field), values_(std::move(values)) {
  if (!all_finite(values_)) throw DomainError("vector has non-finite entries");
  if (field_ == Field::Real) {
    for (Index i = 0; i < values_.size(); ++i) {
      if (values_[i].imag() != 0.0) {
        throw FieldMismatchError("real vector with nonzero imaginary part");
      }
    }
  }
}

FieldVector FieldVector::real(const Eigen::VectorXd& values) {
  return FieldVector(Field::Real, values.cast<Complex>());
}

FieldVector FieldVector::complex(Eigen::VectorXcd values) {
  return FieldVector(Field::Complex, std::move(values));
}

FieldVector FieldVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw DomainError("cannot normalize the zero vector");
  return FieldVector(field_, values_ / n);
}

FieldVector FieldVector::scaled(Complex c) const {
  if (field_ == Field::Real && c.imag() != 0.0) {
    throw FieldMismatchError("complex scalar applied to a real vector");
  }
  return FieldVector(field_, values_ * c);
}

Complex inner(const FieldVector& x, const FieldVector& y) {
  require_same_field(x.field(), y.field(), "inner");
  require_size(x.size(), y.size(), "inner");
  return x.values().dot(y.values());  // Eigen's dot conjugates the first argument
}

// -------------------------------------------------------------- SensingMatrix

SensingMatrix::SensingMatrix(Field field, Storage rows) : field_(field), rows_(std::move(rows)) {
  if (rows_.rows() < 1 || rows_.cols() < 1) {
    throw DimensionError("sensing matrix needs m >= 1 and d >= 1");
  }
  for (Index j = 0; j < rows_.rows(); ++j) {
    for (Index k = 0; k < rows_.cols(); ++k) {
      const Complex z = rows_(j, k);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw DomainError("sensing matrix has non-finite entries");
      }
      if (field_ == Field::Real && z.imag() != 0.0) {
        throw FieldMismatchError("real sensing matrix with nonzero imaginary part");
      }
    }
  }
}

SensingMatrix SensingMatrix::real(const Eigen::MatrixXd& rows) {
  return SensingMatrix(Field::Real, rows.cast<Complex>());
}

SensingMatrix SensingMatrix::complex(Storage rows) {
  return SensingMatrix(Field::Complex, std::move(rows));
}

Eigen::VectorXd SensingMatrix::row_norms_squared() const {
  return rows_.rowwise().squaredNorm();
}

SensingMatrix SensingMatrix::scaled(double c) const {
  return SensingMatrix(field_, rows_ * c);
}

SensingMatrix SensingMatrix::leading_columns(Index count) const {
  if (count < 1 || count > d()) throw DimensionError("leading_columns: count out of range");
  return SensingMatrix(field_, rows_.leftCols(count));
}

SensingMatrix SensingMatrix::times(const Eigen::MatrixXd& q) const {
  if (q.rows() != d() || q.cols() != d()) throw DimensionError("times: expected a d x d matrix");
  return SensingMatrix(field_, rows_ * q.cast<Complex>());
}

// ------------------------------------------------------------------- UnitPair

UnitPair::UnitPair(FieldVector u, FieldVector v, Constraint constraint)
    : u_(std::move(u)), v_(std::move(v)), constraint_(constraint) {
  require_same_field(u_.field(), v_.field(), "UnitPair");
  require_size(u_.size(), v_.size(), "UnitPair");
  if (std::abs(u_.norm() - 1.0) > kNormTolerance || std::abs(v_.norm() - 1.0) > kNormTolerance) {
    throw DomainError("UnitPair: u and v must have unit norm");
  }
  const Complex uv = inner(u_, v_);
  if (constraint_ == Constraint::RealInner && std::abs(uv.imag()) > kConstraintTolerance) {
    throw DomainError("UnitPair: Im<u,v> must vanish");
  }
  if (constraint_ == Constraint::Orthogonal && std::abs(uv) > kConstraintTolerance) {
    throw DomainError("UnitPair: <u,v> must vanish");
  }
}

// --------------------------------------------------------------------- frames

SensingMatrix harmonic_frame(int m) {
  if (m < 3) throw DomainError("harmonic_frame requires m >= 3");
  Eigen::MatrixXd e(m, 2);
  for (int j = 0; j < m; ++j) {
    const double a = j * std::numbers::pi / m;
    e(j, 0) = std::cos(a);
    e(j, 1) = std::sin(a);
  }
  return SensingMatrix::real(e);
}

Eigen::VectorXd psi_map(const SensingMatrix& a, const FieldVector& x) {
  require_same_field(a.field(), x.field(), "psi_map");
  require_size(a.d(), x.size(), "psi_map");
  return (a.rows() * x.values()).cwiseAbs2();
}

// --------------------------------------------------------------------- metric

double dist_h_product(const FieldVector& x, const FieldVector& y) {
  const double s = x.squared_norm() + y.squared_norm();
  const double c = 2.0 * std::abs(inner(x, y));
  return std::sqrt(std::max(0.0, s - c)) * std::sqrt(s + c);
}

double dist_h_eigen(const FieldVector& x, const FieldVector& y) {
  require_same_field(x.field(), y.field(), "dist_h");
  require_size(x.size(), y.size(), "dist_h");
  // Orthonormal basis (e1, e2) of span{x, y} by Gram-Schmidt, then the 2x2
  // Hermitian matrix of x x* - y y* in that basis.
  const Eigen::VectorXcd& xv = x.values();
  const Eigen::VectorXcd& yv = y.values();
  const double scale = std::max(xv.norm(), yv.norm());
  if (scale == 0.0) return 0.0;

  Eigen::VectorXcd e1 = xv.norm() >= yv.norm() ? xv : yv;
  e1 /= e1.norm();
  const Eigen::VectorXcd& other = xv.norm() >= yv.norm() ? yv : xv;
  Eigen::VectorXcd e2 = other - e1 * e1.dot(other);
  const double r = e2.norm();

  Eigen::Matrix2cd h = Eigen::Matrix2cd::Zero();
  const Complex x1 = e1.dot(xv);
  const Complex y1 = e1.dot(yv);
  Complex x2 = 0.0;
  Complex y2 = 0.0;
  if (r > 1e-14 * scale) {
    e2 /= r;
    x2 = e2.dot(xv);
    y2 = e2.dot(yv);
  }
  const Eigen::Vector2cd xc(x1, x2);
  const Eigen::Vector2cd yc(y1, y2);
  h = xc * xc.adjoint() - yc * yc.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double dist_h(const FieldVector& x, const FieldVector& y) {
  const double a = dist_h_product(x, y);
  const double b = dist_h_eigen(x, y);
  const double tol = 1e-10 * (x.squared_norm() + y.squared_norm());
  if (std::abs(a - b) > std::max(tol, 1e-300)) {
    throw Error("dist_h: product formula and eigenvalue route disagree");
  }
  return a;
}

// ---------------------------------------------------------------------- polar

std::vector<PolarRow> to_polar(const SensingMatrix& a) {
  if (a.d() != 2) throw DimensionError("to_polar requires d = 2");
  std::vector<PolarRow> out;
  out.reserve(static_cast<std::size_t>(a.m()));
  for (Index j = 0; j < a.m(); ++j) {
    Complex z1 = a(j, 0);
    Complex z2 = a(j, 1);
    PolarRow row;
    if (a.field() == Field::Real) {
      double x1 = z1.real();
      double x2 = z2.real();
      if (x2 < 0.0 || (x2 == 0.0 && x1 < 0.0)) {
        x1 = -x1;
        x2 = -x2;
      }
      row.t = std::hypot(x1, x2);
      row.phi = row.t == 0.0 ? 0.0 : std::atan2(x2, x1);
    } else {
      const double r1 = std::abs(z1);
      const double r2 = std::abs(z2);
      row.t = std::hypot(r1, r2);
      row.phi = row.t == 0.0 ? 0.0 : std::atan2(r2, r1);
      row.alpha = r1 == 0.0 ? 0.0 : wrap_angle(std::arg(z1));
      row.beta = r2 == 0.0 ? 0.0 : wrap_angle(std::arg(z2));
    }
    out.push_back(row);
  }
  return out;
}

Eigen::RowVector2cd from_polar(const PolarRow& row, Field field) {
  Eigen::RowVector2cd out;
  if (field == Field::Real) {
    out << Complex(row.t * std::cos(row.phi), 0.0), Complex(row.t * std::sin(row.phi), 0.0);
  } else {
    out << row.t * std::cos(row.phi) * std::polar(1.0, row.alpha),
        row.t * std::sin(row.phi) * std::polar(1.0, row.beta);
  }
  return out;
}

}  // namespace prcond
