#include "rspcycles/stability.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "rspcycles/errors.hpp"
#include "rspcycles/maps.hpp"

namespace rsp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieTolerance = 1e-10;
constexpr double kSolverAgreement = 1e-8;

using Complex = std::complex<double>;

double scale(const Complex& z) { return std::max(1.0, std::abs(z)); }

// Monic cubic x^3 + a x^2 + b x + c.
double horner(double a, double b, double c, double x) { return ((x + a) * x + b) * x + c; }

double newton_polish(double a, double b, double c, double x) {
  for (int i = 0; i < 3; ++i) {
    const double f = horner(a, b, c, x);
    const double df = (3.0 * x + 2.0 * a) * x + b;
    if (df == 0.0) break;
    const double next = x - f / df;
    if (!std::isfinite(next) || std::abs(horner(a, b, c, next)) >= std::abs(f)) break;
    x = next;
  }
  return x;
}

std::array<Complex, 3> cubic_roots(const CharPolyData& cp) {
  const double a = -cp.tr;
  const double b = cp.b;
  const double c = -cp.det;
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double shift = -a / 3.0;
  const double d = q * q / 4.0 + p * p * p / 27.0;

  if (d > 0.0) {
    // One real root; choose the sign that avoids cancellation.
    const double u = std::cbrt(-q / 2.0 - std::copysign(std::sqrt(d), q));
    const double t = u == 0.0 ? 0.0 : u - p / (3.0 * u);
    const double r = newton_polish(a, b, c, t + shift);
    const double sum = -a - r;
    const double prod = b - r * sum;
    const double disc = prod - sum * sum / 4.0;
    const double im = std::sqrt(std::max(disc, 0.0));
    if (disc >= 0.0) return {Complex(r, 0.0), Complex(sum / 2.0, im), Complex(sum / 2.0, -im)};
    const double re = std::sqrt(-disc);
    return {Complex(r, 0.0), Complex(sum / 2.0 + re, 0.0), Complex(sum / 2.0 - re, 0.0)};
  }
  // Three real roots (trigonometric form).
  std::array<Complex, 3> out;
  if (p == 0.0) {
    const double r = newton_polish(a, b, c, shift);
    return {Complex(r, 0.0), Complex(r, 0.0), Complex(r, 0.0)};
  }
  const double m = 2.0 * std::sqrt(-p / 3.0);
  const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
  const double theta = std::acos(arg) / 3.0;
  for (int k = 0; k < 3; ++k) {
    const double t = m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0);
    out[static_cast<std::size_t>(k)] = Complex(newton_polish(a, b, c, t + shift), 0.0);
  }
  return out;
}

// Null vector of a rank-two 3x3 matrix from the largest cross product of rows.
Vec3 null_vector(const Mat3& a) {
  Vec3 best = Vec3::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const Vec3 c = a.row(i).transpose().cross(a.row(j).transpose());
      if (c.squaredNorm() > best.squaredNorm()) best = c;
    }
  }
  return best;
}

Vec3 canonical_direction(Vec3 v) {
  const double n = v.norm();
  if (n == 0.0) return v;
  v /= n;
  for (int i = 0; i < 3; ++i) {
    if (v[i] != 0.0) {
      if (v[i] < 0.0) v = -v;
      break;
    }
  }
  return v;
}

CycleIndices all_minus_infinity(const Cycle& cycle) {
  CycleIndices out;
  for (NodeId n : cycle.nodes) out.emplace_back(n, -kInf);
  return out;
}

// Indices of C1 at (ex, ey) in its fragmentarily stable region, ordered
// (xi1, xi2).
std::pair<double, double> c1_indices(double ex, double ey) {
  const double s1 = (-4.0 + ex + (3.0 - ex) * ey + ey * ey) / ((1.0 - ex) * (1.0 + ey));
  const double s2 =
      std::min((ey - ex) / (1.0 - ey), (1.0 + 2.0 * ex + ey * ey) / (2.0 * (1.0 - ex)));
  return {s1, s2};
}

void require_interior(const Cycle& cycle, const PayoffParams& params) {
  if (auto reason = boundary_reason(cycle, params)) throw BoundaryParams(*reason);
}

}  // namespace

std::string format_index(IndexValue v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CharPolyData char_poly(const Mat3& m) {
  const double minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) -
                        m(0, 2) * m(2, 0) + m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  return {m.trace(), minors, m.determinant()};
}

CharPolyData c0_char_poly(const PayoffParams& params) {
  const double ex = params.eps_x();
  const double ey = params.eps_y();
  return {(-3.0 - 3.0 * ex - 3.0 * ey + ex * ey) / 4.0, (-3.0 + 3.0 * ex + 3.0 * ey + ex * ey) / 4.0,
          1.0};
}

int routh_hurwitz_positive_count(const CharPolyData& cp) {
  if (std::abs(cp.tr) < 1e-12) throw DegenerateTrace("trace vanishes; Routh-Hurwitz undefined");
  const std::array<double, 4> seq = {-1.0, cp.tr, (cp.det - cp.b * cp.tr) / cp.tr, cp.det};
  int changes = 0;
  double last = seq[0];
  for (std::size_t i = 1; i < seq.size(); ++i) {
    if (seq[i] == 0.0) continue;
    if ((seq[i] > 0.0) != (last > 0.0)) ++changes;
    last = seq[i];
  }
  return changes;
}

double cubic_discriminant(const CharPolyData& cp) {
  const double t = cp.tr;
  const double b = cp.b;
  const double d = cp.det;
  return 18.0 * t * b * d - 4.0 * t * t * t * d + t * t * b * b - 4.0 * b * b * b - 27.0 * d * d;
}

double discriminant(const PayoffParams& params) {
  const double x = params.eps_x();
  const double y = params.eps_y();
  const double x2 = x * x;
  const double x3 = x2 * x;
  const double x4 = x2 * x2;
  const double c4 = (x2 - 9.0) * (x2 - 9.0);
  const double c3 = -80.0 * x3 - 432.0 * x;
  const double c2 = -18.0 * x4 - 396.0 * x2 - 162.0;
  const double c1 = -432.0 * x3 - 3024.0 * x;
  const double c0 = 81.0 * x4 - 162.0 * x2 - 3375.0;
  return ((((c4 * y + c3) * y + c2) * y + c1) * y + c0) / 256.0;
}

std::array<Complex, 3> eigenvalues(const Mat3& m) {
  const auto roots = cubic_roots(char_poly(m));
  const Eigen::EigenSolver<Mat3> solver(m, false);
  std::array<bool, 3> used{};
  for (const Complex& r : roots) {
    double best = kInf;
    int best_k = -1;
    for (int k = 0; k < 3; ++k) {
      if (used[static_cast<std::size_t>(k)]) continue;
      const double d = std::abs(r - solver.eigenvalues()[k]);
      if (d < best) {
        best = d;
        best_k = k;
      }
    }
    if (best > kSolverAgreement * scale(r)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "closed-form root " << r << " disagrees with the dense eigensolver by " << best;
      throw Error(msg.str());
    }
    used[static_cast<std::size_t>(best_k)] = true;
  }
  return roots;
}

DominanceData dominance(const Mat3& m) {
  DominanceData out;
  out.eigenvalues = eigenvalues(m);
  auto sorted = out.eigenvalues;
  std::sort(sorted.begin(), sorted.end(),
            [](const Complex& a, const Complex& b) { return std::abs(a) > std::abs(b); });
  const Complex top = sorted[0];
  const Complex second = sorted[1];
  const double tol = kTieTolerance * scale(top);
  if (std::abs(std::abs(top) - std::abs(second)) < tol && std::abs(top - std::conj(second)) >= tol &&
      std::abs(top - second) >= tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "eigenvalues " << top << " and " << second << " share the largest modulus";
    throw TieBreak(msg.str());
  }
  out.lambda_max = top;
  out.cond_i = std::abs(top.imag()) < tol;
  if (!out.cond_i) return out;

  const double lambda = top.real();
  out.lambda_max = Complex(lambda, 0.0);
  out.cond_ii = lambda > 1.0 + kTieTolerance;
  const Mat3 shifted = m - lambda * Mat3::Identity();
  out.w_max = canonical_direction(null_vector(shifted));
  const Vec3 left = null_vector(shifted.transpose());
  const double overlap = left.dot(out.w_max);
  if (overlap != 0.0) out.v_max = left / overlap;

  const Vec3& w = out.w_max;
  out.cond_iii = (w.array() > 0.0).all() || (w.array() < 0.0).all();
  out.cond_iii_pairwise = w[0] * w[1] > 1.0 && w[0] * w[2] > 1.0 && w[1] * w[2] > 1.0;
  return out;
}

IndexValue f_index(const Vec3& alpha) {
  const double lo = alpha.minCoeff();
  const double hi = alpha.maxCoeff();
  const double sum = alpha.sum();
  if (lo >= 0.0) return kInf;
  if (hi <= 0.0) return -kInf;
  if (sum == 0.0) return 0.0;
  if (sum < 0.0) return sum / hi;
  return -sum / lo;
}

double b1(const PayoffParams& params) {
  const double x = params.eps_x();
  const double y = params.eps_y();
  return (5.0 - x) * y * y + (x * x + 10.0 * x + 1.0) * y - (1.0 - x) * (4.0 + 5.0 * x);
}

double b2(const PayoffParams& params) {
  const double x = params.eps_x();
  const double y = params.eps_y();
  return (5.0 + x) * y * y + (-x * x + 10.0 * x - 1.0) * y - (1.0 + x) * (4.0 - 5.0 * x);
}

double curve_c(double x) {
  const double x2 = x * x;
  return (1.0 - 10.0 * x + x2 + std::sqrt(81.0 - 24.0 * x - 2.0 * x2 - 40.0 * x2 * x + x2 * x2)) /
         (2.0 * (5.0 + x));
}

double curve_d(double x) {
  const double x2 = x * x;
  return (-(1.0 + 10.0 * x + x2) +
          std::sqrt(81.0 + 24.0 * x - 2.0 * x2 + 40.0 * x2 * x + x2 * x2)) /
         (2.0 * (5.0 - x));
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::EAS:
      return "EAS";
    case Classification::FAS:
      return "FAS";
    case Classification::CU:
      return "CU";
    case Classification::NonAttractor:
      return "NonAttractor";
    case Classification::Boundary:
      return "Boundary";
  }
  return "?";
}

std::optional<std::string> boundary_reason(const Cycle& cycle, const PayoffParams& params) {
  const double ex = params.eps_x();
  const double ey = params.eps_y();
  if (std::abs(ex + ey) < kBoundaryBand) return "eps_x + eps_y = 0";
  if (cycle.id == CycleId::C1 || cycle.id == CycleId::C2) {
    if (std::abs(ex - ey) < kBoundaryBand) return "eps_x - eps_y = 0";
    if (cycle.id == CycleId::C1 && std::abs(b1(params)) < kBoundaryBand) return "b1 = 0";
    if (cycle.id == CycleId::C2 && std::abs(b2(params)) < kBoundaryBand) return "b2 = 0";
  }
  for (NodeId n : cycle.nodes) {
    try {
      const DominanceData d = dominance(cycle_transition_matrix(cycle, n, params).m);
      if (std::abs(std::abs(d.lambda_max) - 1.0) < kBoundaryBand) {
        return "|lambda_max| = 1 at " + std::string(to_string(n));
      }
    } catch (const TieBreak& e) {
      return std::string("dominant eigenvalue tie: ") + e.what();
    }
  }
  return std::nullopt;
}

CycleIndices stability_indices_matrix_path(const Cycle& cycle, const PayoffParams& params) {
  require_interior(cycle, params);
  std::vector<DominanceData> dom;
  for (NodeId n : cycle.nodes) {
    dom.push_back(dominance(cycle_transition_matrix(cycle, n, params).m));
    if (!dom.back().satisfied()) return all_minus_infinity(cycle);
  }
  CycleIndices out;
  for (std::size_t i = 0; i < cycle.nodes.size(); ++i) {
    const NodeId n = cycle.nodes[i];
    IndexValue sigma = f_index(dom[i].v_max);
    for (const Mat3& p : partial_products(cycle, n, params)) {
      for (int r = 0; r < 3; ++r) sigma = std::min(sigma, f_index(p.row(r).transpose()));
    }
    out.emplace_back(n, sigma);
  }
  return out;
}

CycleIndices closed_form_indices(const Cycle& cycle, const PayoffParams& params) {
  require_interior(cycle, params);
  const double ex = params.eps_x();
  const double ey = params.eps_y();
  switch (cycle.id) {
    case CycleId::C0:
      if (ex + ey < 0.0) {
        return {{NodeId::Xi0, std::min((1 - ex) / (1 + ex), (1 - ey) * (1 - ey) / (2 * (1 + ey)))},
                {NodeId::Xi1, std::min((1 - ey) / (1 + ey), (1 - ex) * (1 - ex) / (2 * (1 + ex)))}};
      }
      break;
    case CycleId::C1:
      if (ex + ey > 0.0 && b1(params) > 0.0 && ex < ey) {
        const auto [s1, s2] = c1_indices(ex, ey);
        return {{NodeId::Xi1, s1}, {NodeId::Xi2, s2}};
      }
      break;
    case CycleId::C2:
      if (ex + ey > 0.0 && b2(params) > 0.0 && ex > ey) {
        const auto [s0, s2] = c1_indices(ey, ex);
        return {{NodeId::Xi0, s0}, {NodeId::Xi2, s2}};
      }
      break;
    case CycleId::C3:
    case CycleId::C4:
      break;
  }
  return all_minus_infinity(cycle);
}

Classification classify_indices(CycleId cycle, const CycleIndices& sigma) {
  const bool all_positive =
      std::all_of(sigma.begin(), sigma.end(), [](const auto& s) { return s.second > 0.0; });
  const bool any_finite_or_more =
      std::any_of(sigma.begin(), sigma.end(), [](const auto& s) { return s.second > -kInf; });
  if (all_positive) return Classification::EAS;
  if (any_finite_or_more) return Classification::FAS;
  return cycle == CycleId::C0 ? Classification::NonAttractor : Classification::CU;
}

StabilityReport classify(const Cycle& cycle, const PayoffParams& params, IndexPath path) {
  StabilityReport report{cycle.id, params, {}, Classification::Boundary, {}};
  if (auto reason = boundary_reason(cycle, params)) {
    report.boundary = *reason;
    return report;
  }
  try {
    report.sigma = path == IndexPath::Closed ? closed_form_indices(cycle, params)
                                             : stability_indices_matrix_path(cycle, params);
  } catch (const TieBreak& e) {
    report.boundary = std::string("dominant eigenvalue tie: ") + e.what();
    return report;
  }
  report.classification = classify_indices(cycle.id, report.sigma);
  return report;
}

}  // namespace rsp
