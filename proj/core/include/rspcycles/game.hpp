#pragma once

#include <array>
#include <string_view>

#include <Eigen/Core>

namespace rsp {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Pure strategies, indexed globally in the order R, S, P.
enum class Strategy : int { Rock = 0, Scissors = 1, Paper = 2 };

inline constexpr std::array<Strategy, 3> kStrategies = {
    Strategy::Rock, Strategy::Scissors, Strategy::Paper};

char strategy_letter(Strategy s);

/// Tie payoffs (eps_x, eps_y); both must lie in the open interval (-1, 1).
class PayoffParams {
 public:
  PayoffParams(double eps_x, double eps_y);

  double eps_x() const noexcept { return eps_x_; }
  double eps_y() const noexcept { return eps_y_; }

  /// Same parameters with the roles of the two players exchanged.
  PayoffParams swapped() const { return {eps_y_, eps_x_}; }

  friend bool operator==(const PayoffParams&, const PayoffParams&) = default;

 private:
  double eps_x_;
  double eps_y_;
};

/// Probability vector over (R, S, P).
///
/// Construction accepts inputs whose sum is within 1e-12 of one and whose
/// entries are non-negative, then renormalises so the stored sum is exactly
/// the floating-point division result.
class SimplexPoint {
 public:
  static constexpr double kTolerance = 1e-12;

  SimplexPoint(double p1, double p2, double p3);
  explicit SimplexPoint(const Vec3& p) : SimplexPoint(p[0], p[1], p[2]) {}

  static SimplexPoint vertex(Strategy s);

  double operator[](int i) const { return p_[static_cast<std::size_t>(i)]; }
  double operator[](Strategy s) const { return (*this)[static_cast<int>(s)]; }
  const std::array<double, 3>& values() const noexcept { return p_; }
  Vec3 vector() const { return {p_[0], p_[1], p_[2]}; }

  friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;

 private:
  struct Unchecked {};
  SimplexPoint(Unchecked, const std::array<double, 3>& p) : p_(p) {}
  friend class GameState;

  std::array<double, 3> p_;
};

/// Point of the product of simplices: mixed strategies of players X and Y.
class GameState {
 public:
  GameState(SimplexPoint x, SimplexPoint y) : x_(x), y_(y) {}

  /// Validating conversion from the stacked (x1,x2,x3,y1,y2,y3) vector.
  static GameState from_vector(const Vec6& v);

  /// Trusted conversion for states produced by the integrator, which keeps
  /// both simplices normalised already.
  static GameState from_normalised(const Vec6& v);

  static GameState pure(Strategy x, Strategy y);

  const SimplexPoint& x() const noexcept { return x_; }
  const SimplexPoint& y() const noexcept { return y_; }
  Vec6 vector() const;

  friend bool operator==(const GameState&, const GameState&) = default;

 private:
  SimplexPoint x_;
  SimplexPoint y_;
};

struct PayoffMatrixPair {
  Mat3 a;  // payoff of X (rows) against Y (columns)
  Mat3 b;  // payoff of Y (rows) against X (columns)
};

PayoffMatrixPair payoff_matrices(const PayoffParams& params);

/// Coupled replicator vector field with the payoff matrices materialised.
///
/// Evaluation is defined on all of R^6 (the Jacobian code differentiates
/// slightly off the simplex); on the simplex the x- and y-blocks each sum
/// to zero.
class ReplicatorField {
 public:
  explicit ReplicatorField(const PayoffParams& params);

  const PayoffParams& params() const noexcept { return params_; }
  const PayoffMatrixPair& matrices() const noexcept { return m_; }

  Vec6 operator()(const Vec6& s) const {
    Vec6 out;
    evaluate(s, out);
    return out;
  }

  void evaluate(const Vec6& s, Vec6& out) const {
    const auto x = s.head<3>();
    const auto y = s.tail<3>();
    const Vec3 ay = m_.a * y;
    const Vec3 bx = m_.b * x;
    const double xay = x.dot(ay);
    const double ybx = y.dot(bx);
    for (int i = 0; i < 3; ++i) {
      out[i] = s[i] * (ay[i] - xay);
      out[3 + i] = s[3 + i] * (bx[i] - ybx);
    }
  }

 private:
  PayoffParams params_;
  PayoffMatrixPair m_;
};

/// Replicator field at a validated state, as (dx1,dx2,dx3,dy1,dy2,dy3).
Vec6 replicator_field(const GameState& state, const PayoffParams& params);

/// The interior Nash equilibrium (1/3,1/3,1/3; 1/3,1/3,1/3).
GameState nash_point();

/// Generator of the symmetry group: (x1,x2,x3; y1,y2,y3) -> (x3,x1,x2; y3,y1,y2).
Vec6 cyclic_shift(const Vec6& v);
GameState cyclic_shift(const GameState& s);
Strategy cyclic_shift(Strategy s);

}  // namespace rsp
