// SPDX-License-Identifier: Apache-2.0
#include "prcond/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "prcond/closedform.hpp"
#include "prcond/parallel.hpp"

namespace prcond {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxCellsPerRound = 1 << 18;

using Point = std::array<double, 2>;

struct Cell {
  Point c;
  double v;
};

struct SearchOutcome {
  Point arg{};
  double best = 0.0;
  double lower = 0.0;
};

// Certified minimization of f over a 1-D or 2-D box. f must be lip-Lipschitz
// in the Euclidean metric of the angles. Every cell whose lower bound
// v - lip * half_diagonal does not exceed the incumbent is refined.
template <class F>
SearchOutcome branch_and_bound(const F& f, int dims, Point lo, Point span, int resolution, double lip,
                               const GridSpec& grid) {
  std::array<int, 2> res{resolution, dims == 2 ? resolution : 1};
  Point h{span[0] / res[0], dims == 2 ? span[1] / res[1] : 0.0};
  std::vector<double> values(static_cast<std::size_t>(res[0]) * res[1]);
  parallel_for(static_cast<std::size_t>(res[0]), [&](std::size_t i) {
    const double x = lo[0] + (i + 0.5) * h[0];
    for (int j = 0; j < res[1]; ++j) {
      const double y = dims == 2 ? lo[1] + (j + 0.5) * h[1] : 0.0;
      values[i * res[1] + j] = f(x, y);
    }
  });
  SearchOutcome out;
  std::size_t arg = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] < values[arg]) arg = k;
  }
  out.best = values[arg];
  out.arg = {lo[0] + (arg / res[1] + 0.5) * h[0],
             dims == 2 ? lo[1] + (arg % res[1] + 0.5) * h[1] : 0.0};

  double half_diag = 0.5 * std::hypot(h[0], h[1]);
  std::vector<Cell> survivors;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] - lip * half_diag <= out.best) {
      survivors.push_back({{lo[0] + (k / res[1] + 0.5) * h[0],
                            dims == 2 ? lo[1] + (k % res[1] + 0.5) * h[1] : 0.0},
                           values[k]});
    }
  }
  values = {};

  const int nominal = std::max(2, static_cast<int>(std::lround(1.0 / grid.refine_zoom)));
  for (int round = 0; round < grid.refine_rounds; ++round) {
    int factor = nominal;
    const double per_cell = dims == 2 ? double(factor) * factor : double(factor);
    if (survivors.size() * per_cell > kMaxCellsPerRound) {
      const double room = double(kMaxCellsPerRound) / survivors.size();
      factor = static_cast<int>(dims == 2 ? std::floor(std::sqrt(room)) : std::floor(room));
    }
    if (factor < 2) break;
    const int fy = dims == 2 ? factor : 1;
    const Point ch{h[0] / factor, dims == 2 ? h[1] / factor : 0.0};
    std::vector<double> child(survivors.size() * factor * fy);
    parallel_for(survivors.size(), [&](std::size_t s) {
      const Cell& cell = survivors[s];
      for (int a = 0; a < factor; ++a) {
        const double x = cell.c[0] - 0.5 * h[0] + (a + 0.5) * ch[0];
        for (int b = 0; b < fy; ++b) {
          const double y = dims == 2 ? cell.c[1] - 0.5 * h[1] + (b + 0.5) * ch[1] : 0.0;
          child[(s * factor + a) * fy + b] = f(x, y);
        }
      }
    });
    for (std::size_t k = 0; k < child.size(); ++k) {
      if (child[k] < out.best) {
        out.best = child[k];
        const std::size_t s = k / (factor * fy);
        const int a = static_cast<int>((k / fy) % factor);
        const int b = static_cast<int>(k % fy);
        out.arg = {survivors[s].c[0] - 0.5 * h[0] + (a + 0.5) * ch[0],
                   dims == 2 ? survivors[s].c[1] - 0.5 * h[1] + (b + 0.5) * ch[1] : 0.0};
      }
    }
    h = ch;
    half_diag = 0.5 * std::hypot(h[0], h[1]);
    std::vector<Cell> next;
    for (std::size_t k = 0; k < child.size(); ++k) {
      if (child[k] - lip * half_diag <= out.best) {
        const std::size_t s = k / (factor * fy);
        const int a = static_cast<int>((k / fy) % factor);
        const int b = static_cast<int>(k % fy);
        const Cell& parent = survivors[s];
        next.push_back({{parent.c[0] - 0.5 * (h[0] * factor) + (a + 0.5) * h[0],
                         dims == 2 ? parent.c[1] - 0.5 * (h[1] * factor) + (b + 0.5) * h[1] : 0.0},
                        child[k]});
      }
    }
    survivors = std::move(next);
  }

  out.lower = out.best;
  for (const Cell& c : survivors) out.lower = std::min(out.lower, c.v - lip * half_diag);
  return out;
}

// Golden-section search on [a, b].
template <class F>
std::pair<double, double> golden_section(const F& f, double a, double b, int iters = 100) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < iters && b - a > 1e-15; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? std::pair{c, fc} : std::pair{d, fd};
}

// Nelder-Mead in the plane.
template <class F>
std::pair<Point, double> nelder_mead(const F& f, Point start, double size, int iters = 400) {
  std::array<Point, 3> s{start, Point{start[0] + size, start[1]}, Point{start[0], start[1] + size}};
  std::array<double, 3> v{f(s[0][0], s[0][1]), f(s[1][0], s[1][1]), f(s[2][0], s[2][1])};
  auto eval = [&](const Point& p) { return f(p[0], p[1]); };
  for (int it = 0; it < iters; ++it) {
    std::array<int, 3> o{0, 1, 2};
    std::sort(o.begin(), o.end(), [&](int x, int y) { return v[x] < v[y]; });
    const Point& best = s[o[0]];
    const Point& worst = s[o[2]];
    if (std::hypot(s[o[2]][0] - best[0], s[o[2]][1] - best[1]) < 1e-14) break;
    const Point centroid{(s[o[0]][0] + s[o[1]][0]) / 2, (s[o[0]][1] + s[o[1]][1]) / 2};
    auto along = [&](double t) {
      return Point{centroid[0] + t * (worst[0] - centroid[0]), centroid[1] + t * (worst[1] - centroid[1])};
    };
    const Point r = along(-1.0);
    const double fr = eval(r);
    if (fr < v[o[0]]) {
      const Point e = along(-2.0);
      const double fe = eval(e);
      if (fe < fr) {
        s[o[2]] = e;
        v[o[2]] = fe;
      } else {
        s[o[2]] = r;
        v[o[2]] = fr;
      }
    } else if (fr < v[o[1]]) {
      s[o[2]] = r;
      v[o[2]] = fr;
    } else {
      const Point c = along(fr < v[o[2]] ? -0.5 : 0.5);
      const double fc = eval(c);
      if (fc < std::min(fr, v[o[2]])) {
        s[o[2]] = c;
        v[o[2]] = fc;
      } else {
        for (int k : {o[1], o[2]}) {
          s[k] = {(s[k][0] + best[0]) / 2, (s[k][1] + best[1]) / 2};
          v[k] = eval(s[k]);
        }
      }
    }
  }
  const auto k = static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
  return {s[k], v[k]};
}

template <class F>
SearchOutcome certified_min(const F& f, int dims, Point lo, Point span, double lip, const GridSpec& grid) {
  grid.validate();
  SearchOutcome out = branch_and_bound(f, dims, lo, span, grid.resolution, lip, grid);
  const double cell = span[0] / grid.resolution;
  if (dims == 1) {
    const auto [x, v] = golden_section([&](double t) { return f(t, 0.0); }, out.arg[0] - cell, out.arg[0] + cell);
    if (v < out.best) {
      out.best = v;
      out.arg = {x, 0.0};
    }
  } else {
    const auto [x, v] = nelder_mead(f, out.arg, cell);
    if (v < out.best) {
      out.best = v;
      out.arg = x;
    }
  }
  out.lower = std::min(out.lower, out.best);
  return out;
}

// Per-row data of a d = 2 matrix, with a_i = conj(row_i):
//   w_i   = t_i^2
//   bloch = (|a1|^2 - |a2|^2, 2 Re(conj(a1) a2), 2 Im(conj(a1) a2))
//   polar = (|a1|^2 - |a2|^2, 2 Re(a1 conj(a2)), 2 Im(a1 conj(a2)))
struct RowData {
  std::vector<double> w;
  std::vector<std::array<double, 3>> bloch;
  std::vector<std::array<double, 3>> polar;
};

RowData row_data(const SensingMatrix& a) {
  if (a.d() != 2) throw DimensionError("grid oracle requires d = 2");
  RowData rd;
  for (Index j = 0; j < a.m(); ++j) {
    const Complex a1 = std::conj(a(j, 0));
    const Complex a2 = std::conj(a(j, 1));
    const double n1 = std::norm(a1);
    const double n2 = std::norm(a2);
    const Complex x = std::conj(a1) * a2;
    rd.w.push_back(n1 + n2);
    rd.bloch.push_back({n1 - n2, 2.0 * x.real(), 2.0 * x.imag()});
    rd.polar.push_back({n1 - n2, 2.0 * x.real(), -2.0 * x.imag()});
  }
  return rd;
}

double lp_of(const std::vector<double>& w, int p) {
  double s = 0.0;
  for (double x : w) s += p == 1 ? x : x * x;
  return p == 1 ? s : std::sqrt(s);
}

// min over c in [-1, 1] of (sum |w_i c + s_i|^p)^{1/p}, together with c.
std::pair<double, double> min_over_c(const std::vector<double>& w, const std::vector<double>& s, int p,
                                     std::vector<std::pair<double, double>>& scratch) {
  double c = 0.0;
  if (p == 2) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      num -= w[i] * s[i];
      den += w[i] * w[i];
    }
    c = den > 0.0 ? std::clamp(num / den, -1.0, 1.0) : 0.0;
  } else {
    scratch.clear();
    double total = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] > 0.0) {
        scratch.emplace_back(-s[i] / w[i], w[i]);
        total += w[i];
      }
    }
    std::sort(scratch.begin(), scratch.end());
    double acc = 0.0;
    for (const auto& [x, wt] : scratch) {
      acc += wt;
      if (acc >= 0.5 * total) {
        c = x;
        break;
      }
    }
    c = std::clamp(c, -1.0, 1.0);
  }
  double val = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double r = std::abs(w[i] * c + s[i]);
    val += p == 1 ? r : r * r;
  }
  return {p == 1 ? val : std::sqrt(val), c};
}

// Reconstructs (u, v) from the Bloch angles of x = (u + v)/2 and c = <u, v>.
UnitPair pair_from_bloch(Field field, double vartheta, double gamma, double c) {
  const Complex x1 = std::cos(vartheta / 2);
  const Complex x2 = std::sin(vartheta / 2) * std::polar(1.0, field == Field::Real ? 0.0 : gamma);
  const Eigen::Vector2cd xh(x1, x2);
  const Eigen::Vector2cd yh(-std::conj(x2), std::conj(x1));
  const Eigen::Vector2cd x = std::sqrt((1.0 + c) / 2.0) * xh;
  const Eigen::Vector2cd y = std::sqrt((1.0 - c) / 2.0) * yh;
  Eigen::Vector2cd u = x - y;
  Eigen::Vector2cd v = x + y;
  u.normalize();
  v.normalize();
  if (field == Field::Real) {
    return UnitPair(FieldVector::real(u.real()), FieldVector::real(v.real()), Constraint::RealInner);
  }
  return UnitPair(FieldVector::complex(u), FieldVector::complex(v), Constraint::RealInner);
}

Eigen::Vector2cd polar_u(Field field, double theta, double gamma) {
  return {std::cos(theta) * std::polar(1.0, field == Field::Real ? 0.0 : gamma), Complex(std::sin(theta))};
}

Eigen::Vector2cd polar_v(Field field, double theta, double gamma) {
  return {std::sin(theta) * std::polar(1.0, field == Field::Real ? 0.0 : gamma), Complex(-std::cos(theta))};
}

FieldVector as_field(Field field, const Eigen::Vector2cd& x) {
  return field == Field::Real ? FieldVector::real(x.real()) : FieldVector::complex(x);
}

}  // namespace

LipschitzEstimate grid_lower_l(const SensingMatrix& a, int p, Constraint constraint, const GridSpec& grid) {
  require_p(p);
  if (constraint == Constraint::Free) throw DomainError("grid_lower_l: constraint must be RealInner or Orthogonal");
  const RowData rd = row_data(a);
  const Field field = a.field();
  const int dims = field == Field::Real ? 1 : 2;
  const std::size_t m = rd.w.size();
  const double norm_w = lp_of(rd.w, p);

  LipschitzEstimate est;
  est.kind = constraint == Constraint::Orthogonal ? EstimateKind::OrthogonalM : EstimateKind::LowerL;
  est.p = p;
  est.method = Method::GridOracle;

  SearchOutcome out;
  if (constraint == Constraint::RealInner) {
    // r_i = (w_i c + n . bloch_i) / 2 with n the Bloch vector of (u + v)/2.
    auto f = [&](double vartheta, double gamma) {
      thread_local std::vector<double> s;
      thread_local std::vector<std::pair<double, double>> scratch;
      s.resize(m);
      const double n0 = std::cos(vartheta);
      const double n1 = std::sin(vartheta) * std::cos(gamma);
      const double n2 = std::sin(vartheta) * std::sin(gamma);
      for (std::size_t i = 0; i < m; ++i) s[i] = n0 * rd.bloch[i][0] + n1 * rd.bloch[i][1] + n2 * rd.bloch[i][2];
      return 0.5 * min_over_c(rd.w, s, p, scratch).first;
    };
    const double lip = 0.5 * norm_w;
    out = dims == 1 ? certified_min(f, 1, {0.0, 0.0}, {2.0 * kPi, 0.0}, lip, grid)
                    : certified_min(f, 2, {0.0, 0.0}, {kPi, 2.0 * kPi}, lip, grid);
    std::vector<double> s(m);
    std::vector<std::pair<double, double>> scratch;
    const double vt = out.arg[0];
    const double g = out.arg[1];
    for (std::size_t i = 0; i < m; ++i) {
      s[i] = std::cos(vt) * rd.bloch[i][0] + std::sin(vt) * std::cos(g) * rd.bloch[i][1] +
             std::sin(vt) * std::sin(g) * rd.bloch[i][2];
    }
    const double c = min_over_c(rd.w, s, p, scratch).second;
    est.witness = pair_from_bloch(field, vt, g, c);
  } else {
    // Orthogonal family u = (cos t e^{ig}, sin t), v = (sin t e^{ig}, -cos t):
    // r_i = n . polar_i / 2 with n = (sin 2t, -cos 2t cos g, -cos 2t sin g).
    auto f = [&](double theta, double gamma) {
      const double n0 = std::sin(2 * theta);
      const double n1 = -std::cos(2 * theta) * std::cos(gamma);
      const double n2 = -std::cos(2 * theta) * std::sin(gamma);
      double acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double r = std::abs(0.5 * (n0 * rd.polar[i][0] + n1 * rd.polar[i][1] + n2 * rd.polar[i][2]));
        acc += p == 1 ? r : r * r;
      }
      return p == 1 ? acc : std::sqrt(acc);
    };
    const double lip = norm_w;
    out = dims == 1 ? certified_min(f, 1, {0.0, 0.0}, {kPi, 0.0}, lip, grid)
                    : certified_min(f, 2, {0.0, 0.0}, {kPi, 2.0 * kPi}, lip, grid);
    Eigen::Vector2cd u = polar_u(field, out.arg[0], out.arg[1]);
    Eigen::Vector2cd v = polar_v(field, out.arg[0], out.arg[1]);
    est.witness = UnitPair(as_field(field, u.normalized()), as_field(field, v.normalized()), Constraint::Orthogonal);
  }
  const UnitPair& w = est.pair();
  est.value = lower_objective(a, p, w.u(), w.v());
  est.certified_band = std::pair{std::min(out.lower, est.value), est.value};
  est.stats.starts = 0;
  return est;
}

LipschitzEstimate grid_upper_u(const SensingMatrix& a, int p, const GridSpec& grid) {
  require_p(p);
  const RowData rd = row_data(a);
  const Field field = a.field();
  const std::size_t m = rd.w.size();
  // |a_i* u|^2 = (w_i + n . polar_i) / 2 for u = (cos(t/2) e^{ig}, sin(t/2)),
  // n = (cos t, sin t cos g, sin t sin g). Maximize by minimizing the negative.
  auto f = [&](double vartheta, double gamma) {
    const double n0 = std::cos(vartheta);
    const double n1 = std::sin(vartheta) * std::cos(gamma);
    const double n2 = std::sin(vartheta) * std::sin(gamma);
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double q = 0.5 * (rd.w[i] + n0 * rd.polar[i][0] + n1 * rd.polar[i][1] + n2 * rd.polar[i][2]);
      acc += p == 1 ? q : q * q;
    }
    return -(p == 1 ? acc : std::sqrt(acc));
  };
  const double lip = 0.5 * lp_of(rd.w, p);
  const SearchOutcome out = field == Field::Real
                                ? certified_min(f, 1, {0.0, 0.0}, {2.0 * kPi, 0.0}, lip, grid)
                                : certified_min(f, 2, {0.0, 0.0}, {kPi, 2.0 * kPi}, lip, grid);
  LipschitzEstimate est;
  est.kind = EstimateKind::UpperU;
  est.p = p;
  est.method = Method::GridOracle;
  const Eigen::Vector2cd u = polar_u(field, out.arg[0] / 2, out.arg[1]);
  est.witness = as_field(field, u.normalized());
  est.value = upper_objective(a, p, est.vector());
  est.certified_band = std::pair{est.value, std::max(-out.lower, est.value)};
  return est;
}

// ----------------------------------------------------------------- identities

double check_lagrange_identities(int m, double theta) {
  if (m < 1) throw DomainError("check_lagrange_identities needs m >= 1");
  const double half = std::sin(theta / 2);
  if (!std::isfinite(theta) || std::abs(half) < 1e-8) {
    throw DomainError("theta is (numerically) a multiple of 2 pi, a pole of the identities");
  }
  double sc = 0.0;
  double ss = 0.0;
  for (int j = 1; j <= m; ++j) {
    sc += std::cos(j * theta);
    ss += std::sin(j * theta);
  }
  const double rc = std::sin((2.0 * m + 1) / 2 * theta) / (2 * half) - 0.5;
  const double rs = std::sin((m + 1.0) / 2 * theta) * std::sin(m * theta / 2) / half;
  double worst = std::max(std::abs(sc - rc), std::abs(ss - rs));
  if (m >= 3) {
    double c2 = 0.0;
    double c4 = 0.0;
    for (int j = 1; j <= m; ++j) {
      c2 += std::cos(2.0 * j * kPi / m - 2 * theta);
      c4 += std::cos(4.0 * j * kPi / m - 4 * theta);
    }
    worst = std::max({worst, std::abs(c2), std::abs(c4)});
  }
  return worst;
}

double gk_direct(int m, int k, double theta, double phi) {
  double s = 0.0;
  for (int j = 1; j <= m; ++j) {
    const double a = j * kPi / m;
    s += std::abs(std::cos(a - theta) * std::sin(a - phi - k * kPi / m));
  }
  return s;
}

int gk_k_hat(int m, double phi) {
  if (m % 2 == 0) return (m - 2) / 2;
  return phi <= kPi / (2.0 * m) ? (m - 1) / 2 : (m - 3) / 2;
}

double gk_closed_form(int m, int k, double theta, double phi) {
  const double pm = kPi / m;
  if (m % 2 == 0) {
    return std::cos(k * pm) * std::cos(pm - theta - phi) / std::sin(pm) + k * std::sin(phi - theta + k * pm);
  }
  if (theta <= pm / 2) {
    return std::cos(pm / 2 + k * pm) * std::cos(pm / 2 - theta - phi) / std::sin(pm) +
           (2.0 * k + 1) / 2 * std::sin(phi - theta + k * pm);
  }
  return std::cos(pm / 2 - k * pm) * std::cos(1.5 * pm - theta - phi) / std::sin(pm) +
         (2.0 * k - 1) / 2 * std::sin(phi - theta + k * pm);
}

double check_gk_closed_form(int m, int k, double theta, double phi) {
  if (m < 3) throw DomainError("G_k closed form needs m >= 3");
  const double pm = kPi / m;
  if (!(theta >= 0.0 && theta <= pm) || !(phi >= 0.0 && phi <= pm)) {
    throw DomainError("G_k closed form needs theta, phi in [0, pi/m]");
  }
  if (k < 0 || k > gk_k_hat(m, phi)) throw DomainError("G_k closed form: k outside [0, k_hat]");
  return std::abs(gk_direct(m, k, theta, phi) - gk_closed_form(m, k, theta, phi));
}

double g_of_t(const SensingMatrix& a, const FieldVector& x, const FieldVector& y, double t) {
  const Eigen::VectorXd al = psi_map(a, x);
  const Eigen::VectorXd ga = psi_map(a, y);
  return (al * t - ga).squaredNorm() / ((t + 1) * (t + 1));
}

double g_prime_at_one(const SensingMatrix& a, const FieldVector& x, const FieldVector& y, double h) {
  return (g_of_t(a, x, y, 1 + h) - g_of_t(a, x, y, 1 - h)) / (2 * h);
}

bool check_g_min_at_one(const SensingMatrix& a, const FieldVector& x, const FieldVector& y,
                        std::span<const double> t_grid) {
  if (std::abs(x.norm() - 1) > 1e-10 || std::abs(y.norm() - 1) > 1e-10 || std::abs(inner(x, y)) > 1e-10) {
    throw PreconditionError("check_g_min_at_one needs an orthonormal pair (x, y)");
  }
  if (!is_tight_4_frame(a, 200, 1e-9).tight) {
    throw PreconditionError("check_g_min_at_one needs a tight 4-frame");
  }
  const double g1 = g_of_t(a, x, y, 1.0);
  for (double t : t_grid) {
    if (t < 0.0) throw DomainError("t grid must be nonnegative");
    if (g1 > g_of_t(a, x, y, t) + 1e-12) return false;
  }
  return true;
}

SubTanResult check_sub_tan(std::span<const double> phis, std::span<const double> t_squares, const GridSpec& grid) {
  if (phis.size() != t_squares.size()) throw DimensionError("check_sub_tan: phis and t_squares differ in length");
  if (phis.empty()) throw DomainError("check_sub_tan needs at least one angle");
  grid.validate();
  for (std::size_t i = 0; i < phis.size(); ++i) {
    if (!(phis[i] >= 0.0 && phis[i] <= kPi)) throw DomainError("check_sub_tan: angles must lie in [0, pi]");
    if (i > 0 && phis[i] < phis[i - 1]) throw DomainError("check_sub_tan: angles must be sorted");
  }
  auto g = [&](double theta) {
    double s = 0.0;
    for (std::size_t i = 0; i < phis.size(); ++i) s += t_squares[i] * std::abs(std::sin(theta - phis[i]));
    return s;
  };
  // g is concave between consecutive kinks, so its minimum sits at a kink or
  // an endpoint; the grid is an independent cross-check.
  double best = std::min(g(0.0), g(kPi));
  for (double p : phis) best = std::min(best, g(p));
  const int n = grid.resolution;
  for (int i = 0; i <= n; ++i) best = std::min(best, g(kPi * i / n));
  SubTanResult r;
  r.min_value = best;
  r.bound = sub_tan_bound(t_squares);
  r.holds = r.min_value <= r.bound + 1e-10;
  return r;
}

McEstimate mc_expectation(Field field, double theta, long samples, RngSpec spec) {
  if (samples < 1000) throw DomainError("mc_expectation needs at least 1000 samples");
  Rng rng(spec);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  double mean = 0.0;
  double m2 = 0.0;
  for (long k = 0; k < samples; ++k) {
    Complex a1;
    Complex a2;
    if (field == Field::Real) {
      a1 = rng.normal();
      a2 = rng.normal();
    } else {
      a1 = rng.complex_normal();
      a2 = rng.complex_normal();
    }
    // Re(u* a a* v) = |a1|^2 cos + Re(a1 conj(a2)) sin
    const double x = std::abs(std::norm(a1) * c + (a1 * std::conj(a2)).real() * s);
    const double delta = x - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (x - mean);
  }
  const double var = m2 / static_cast<double>(samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(samples))};
}

}  // namespace prcond
