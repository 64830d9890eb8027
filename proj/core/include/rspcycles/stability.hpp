#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rspcycles/game.hpp"
#include "rspcycles/network.hpp"

namespace rsp {

/// Stability indices are extended reals; +-infinity use IEEE infinities.
using IndexValue = double;

/// "inf", "-inf" or the shortest round-trip decimal.
std::string format_index(IndexValue v);

/// Coefficients of det(lambda I - M) = lambda^3 - tr lambda^2 + b lambda - det.
struct CharPolyData {
  double tr;
  double b;  // sum of the principal 2x2 minors
  double det;
};

CharPolyData char_poly(const Mat3& m);

/// The closed forms of trace, B and determinant of the C0 return matrix.
CharPolyData c0_char_poly(const PayoffParams& params);

/// Sign changes of (-1, tr, (det - b tr)/tr, det). Throws DegenerateTrace if
/// |tr| < 1e-12.
int routh_hurwitz_positive_count(const CharPolyData& cp);

/// Discriminant of a cubic with the given coefficients.
double cubic_discriminant(const CharPolyData& cp);

/// Discriminant of the C0 characteristic polynomial as a quartic in eps_y.
double discriminant(const PayoffParams& params);

/// Roots of the characteristic polynomial in closed form, cross-checked
/// against a dense eigensolver. Throws rsp::Error if the two disagree by more
/// than 1e-8 (relative to max(1, |lambda|)).
std::array<std::complex<double>, 3> eigenvalues(const Mat3& m);

struct DominanceData {
  std::array<std::complex<double>, 3> eigenvalues;
  std::complex<double> lambda_max;
  bool cond_i = false;    // lambda_max real
  bool cond_ii = false;   // lambda_max > 1
  bool cond_iii = false;  // eigenvector components share a strict sign
  bool cond_iii_pairwise = false;  // all pairwise component products > 1
  Vec3 w_max = Vec3::Zero();  // unit norm, first nonzero component positive
  Vec3 v_max = Vec3::Zero();  // left eigenvector with v_max . w_max = 1

  bool satisfied() const { return cond_i && cond_ii && cond_iii; }
};

/// Throws TieBreak if two distinct, non-conjugate eigenvalues share the
/// largest modulus within 1e-10.
DominanceData dominance(const Mat3& m);

/// Five-branch F-index of an exponent vector.
IndexValue f_index(const Vec3& alpha);

double b1(const PayoffParams& params);
double b2(const PayoffParams& params);

/// Curves bounding the fragmentarily stable regions: curve_c is the root of
/// b2 = 0 (edge of C2's region), curve_d the root of b1 = 0 (edge of C1's).
/// Both return eps_y as a function of eps_x.
double curve_c(double eps_x);
double curve_d(double eps_x);

enum class Classification { EAS, FAS, CU, NonAttractor, Boundary };

std::string_view to_string(Classification c);

inline constexpr double kBoundaryBand = 1e-8;

/// The first governing quantity of `cycle` within the boundary band, if any.
std::optional<std::string> boundary_reason(const Cycle& cycle, const PayoffParams& params);

using CycleIndices = std::vector<std::pair<NodeId, IndexValue>>;

/// Indices from the transition matrices: all -inf if some return matrix fails
/// the dominance conditions, otherwise the smallest F-index over the dominant
/// left eigenvector and the rows of every partial product starting at the node.
/// Throws BoundaryParams inside a boundary band.
CycleIndices stability_indices_matrix_path(const Cycle& cycle, const PayoffParams& params);

/// Closed-form indices. Throws BoundaryParams inside a boundary band.
CycleIndices closed_form_indices(const Cycle& cycle, const PayoffParams& params);

enum class IndexPath { Closed, Matrix };

struct StabilityReport {
  CycleId cycle;
  PayoffParams params;
  CycleIndices sigma;  // empty when Boundary
  Classification classification;
  std::string boundary;  // reason when Boundary
};

Classification classify_indices(CycleId cycle, const CycleIndices& sigma);

StabilityReport classify(const Cycle& cycle, const PayoffParams& params,
                         IndexPath path = IndexPath::Closed);

}  // namespace rsp
