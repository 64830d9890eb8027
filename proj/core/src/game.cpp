#include "rspcycles/game.hpp"

#include <cmath>
#include <sstream>

#include "rspcycles/errors.hpp"

namespace rsp {

char strategy_letter(Strategy s) {
  switch (s) {
    case Strategy::Rock:
      return 'R';
    case Strategy::Scissors:
      return 'S';
    case Strategy::Paper:
      return 'P';
  }
  return '?';
}

PayoffParams::PayoffParams(double eps_x, double eps_y) : eps_x_(eps_x), eps_y_(eps_y) {
  auto inside = [](double e) { return std::isfinite(e) && e > -1.0 && e < 1.0; };
  if (!inside(eps_x) || !inside(eps_y)) {
    std::ostringstream msg;
    msg << "tie payoffs must lie in (-1, 1), got eps_x=" << eps_x << " eps_y=" << eps_y;
    throw InvalidArgument(msg.str());
  }
}

SimplexPoint::SimplexPoint(double p1, double p2, double p3) {
  const double sum = p1 + p2 + p3;
  if (!(p1 >= 0.0 && p2 >= 0.0 && p3 >= 0.0) || !(std::abs(sum - 1.0) <= kTolerance)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "not a point of the simplex: (" << p1 << ", " << p2 << ", " << p3 << ")";
    throw InvalidArgument(msg.str());
  }
  p_ = {p1 / sum, p2 / sum, p3 / sum};
}

SimplexPoint SimplexPoint::vertex(Strategy s) {
  std::array<double, 3> p{0.0, 0.0, 0.0};
  p[static_cast<std::size_t>(s)] = 1.0;
  return SimplexPoint(Unchecked{}, p);
}

GameState GameState::from_vector(const Vec6& v) {
  return {SimplexPoint(v[0], v[1], v[2]), SimplexPoint(v[3], v[4], v[5])};
}

GameState GameState::from_normalised(const Vec6& v) {
  return {SimplexPoint(SimplexPoint::Unchecked{}, {v[0], v[1], v[2]}),
          SimplexPoint(SimplexPoint::Unchecked{}, {v[3], v[4], v[5]})};
}

GameState GameState::pure(Strategy x, Strategy y) {
  return {SimplexPoint::vertex(x), SimplexPoint::vertex(y)};
}

Vec6 GameState::vector() const {
  Vec6 v;
  v << x_[0], x_[1], x_[2], y_[0], y_[1], y_[2];
  return v;
}

PayoffMatrixPair payoff_matrices(const PayoffParams& params) {
  auto cyclic = [](double eps) {
    const double win = 1.0 - eps;
    const double lose = -1.0 - eps;
    Mat3 m;
    m << 0.0, win, lose,
         lose, 0.0, win,
         win, lose, 0.0;
    return m;
  };
  return {cyclic(params.eps_x()), cyclic(params.eps_y())};
}

ReplicatorField::ReplicatorField(const PayoffParams& params)
    : params_(params), m_(payoff_matrices(params)) {}

Vec6 replicator_field(const GameState& state, const PayoffParams& params) {
  return ReplicatorField(params)(state.vector());
}

GameState nash_point() {
  const double third = 1.0 / 3.0;
  return {SimplexPoint(third, third, third), SimplexPoint(third, third, third)};
}

Vec6 cyclic_shift(const Vec6& v) {
  Vec6 out;
  out << v[2], v[0], v[1], v[5], v[3], v[4];
  return out;
}

GameState cyclic_shift(const GameState& s) { return GameState::from_normalised(cyclic_shift(s.vector())); }

Strategy cyclic_shift(Strategy s) { return static_cast<Strategy>((static_cast<int>(s) + 1) % 3); }

}  // namespace rsp
