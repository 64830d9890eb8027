#include "rspcycles/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rspcycles/errors.hpp"

namespace rsp {

namespace {

std::string rejection_message(double time, int coordinate, double value) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "integration step rejected at t=" << time << ": coordinate " << coordinate
      << " reached " << value << " (time step too large)";
  return msg.str();
}

}  // namespace

StepRejected::StepRejected(double time, int coordinate, double value)
    : Error(rejection_message(time, coordinate, value)),
      time_(time),
      coordinate_(coordinate),
      value_(value) {}

Rk4Stepper::Rk4Stepper(const PayoffParams& params, double dt) : field_(params), dt_(dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time step must be positive");
}

void Rk4Stepper::step(Vec6& s, double t) {
  const double h = dt_;
  field_.evaluate(s, k1_);
  tmp_ = s + 0.5 * h * k1_;
  field_.evaluate(tmp_, k2_);
  tmp_ = s + 0.5 * h * k2_;
  field_.evaluate(tmp_, k3_);
  tmp_ = s + h * k3_;
  field_.evaluate(tmp_, k4_);
  s += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);

  for (int i = 0; i < 6; ++i) {
    if (s[i] < 0.0) {
      if (s[i] < kRejectBelow) throw StepRejected(t + h, i, s[i]);
      s[i] = 0.0;
    }
  }
  const double sx = s[0] + s[1] + s[2];
  const double sy = s[3] + s[4] + s[5];
  max_sum_deviation_ = std::max({max_sum_deviation_, std::abs(sx - 1.0), std::abs(sy - 1.0)});
  s.head<3>() /= sx;
  s.tail<3>() /= sy;
}

LogRk4Stepper::LogRk4Stepper(const PayoffParams& params, double dt)
    : m_(payoff_matrices(params)), dt_(dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time step must be positive");
}

void LogRk4Stepper::rate(const Vec6& u, Vec6& out) const {
  const Vec6 s = to_linear(u);
  const auto x = s.head<3>();
  const auto y = s.tail<3>();
  const Vec3 ay = m_.a * y;
  const Vec3 bx = m_.b * x;
  out.head<3>() = ay.array() - x.dot(ay);
  out.tail<3>() = bx.array() - y.dot(bx);
}

void LogRk4Stepper::step(Vec6& u) {
  const double h = dt_;
  rate(u, k1_);
  tmp_ = u + 0.5 * h * k1_;
  rate(tmp_, k2_);
  tmp_ = u + 0.5 * h * k2_;
  rate(tmp_, k3_);
  tmp_ = u + h * k3_;
  rate(tmp_, k4_);
  u += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  renormalise(u);
}

double LogRk4Stepper::drift(Vec6& u, double threshold, double max_time) {
  const double limit = std::log(threshold);
  for (int b = 0; b < 6; b += 3) {
    int top = b;
    for (int i = b + 1; i < b + 3; ++i) {
      if (u[i] > u[top]) top = i;
    }
    for (int i = b; i < b + 3; ++i) {
      if (i != top && !(u[i] < limit)) return 0.0;
    }
  }
  rate(u, k1_);
  double tau = max_time;
  for (int i = 0; i < 6; ++i) {
    if (u[i] < limit && k1_[i] > 0.0) tau = std::min(tau, (limit - u[i]) / k1_[i]);
  }
  if (!(tau > 0.0)) return 0.0;
  u += tau * k1_;
  renormalise(u);
  return tau;
}

void LogRk4Stepper::renormalise(Vec6& u) {
  for (int b = 0; b < 6; b += 3) {
    const double top = std::max({u[b], u[b + 1], u[b + 2]});
    const double lse =
        top + std::log(std::exp(u[b] - top) + std::exp(u[b + 1] - top) + std::exp(u[b + 2] - top));
    for (int i = b; i < b + 3; ++i) u[i] -= lse;
  }
}

Vec6 LogRk4Stepper::to_log(const Vec6& state) { return state.array().log().matrix(); }

Vec6 LogRk4Stepper::to_linear(const Vec6& u) {
  // Values this small only matter as "zero"; skipping exp avoids subnormals.
  Vec6 s;
  for (int i = 0; i < 6; ++i) s[i] = u[i] < -700.0 ? 0.0 : std::exp(u[i]);
  return s;
}

Trajectory integrate(const GameState& initial, const PayoffParams& params, double t_max,
                     double dt, std::size_t stride) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InvalidArgument("t_max must be positive");
  if (stride == 0) throw InvalidArgument("stride must be at least 1");
  Rk4Stepper stepper(params, dt);

  const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
  Trajectory traj;
  traj.times.reserve(steps / stride + 2);
  traj.states.reserve(steps / stride + 2);

  Vec6 s = initial.vector();
  std::array<bool, 6> zero{};
  for (int i = 0; i < 6; ++i) zero[static_cast<std::size_t>(i)] = s[i] == 0.0;

  traj.times.push_back(0.0);
  traj.states.push_back(initial);
  for (std::size_t n = 1; n <= steps; ++n) {
    stepper.step(s, static_cast<double>(n - 1) * dt);
    for (int i = 0; i < 6; ++i) {
      if (zero[static_cast<std::size_t>(i)]) s[i] = 0.0;
    }
    if (n % stride == 0 || n == steps) {
      traj.times.push_back(static_cast<double>(n) * dt);
      traj.states.push_back(GameState::from_normalised(s));
    }
  }
  traj.max_sum_deviation = stepper.max_sum_deviation();
  return traj;
}

std::vector<NodeId> Itinerary::labels() const {
  std::vector<NodeId> out;
  out.reserve(visits.size());
  for (const auto& v : visits) out.push_back(v.node);
  return out;
}

std::optional<VertexPair> nearby_vertex(const Vec6& state, double threshold) {
  // The nearest vertex takes the largest coordinate of each player.
  int ix = 0;
  int iy = 0;
  for (int i = 1; i < 3; ++i) {
    if (state[i] > state[ix]) ix = i;
    if (state[3 + i] > state[3 + iy]) iy = i;
  }
  Vec6 v = Vec6::Zero();
  v[ix] = 1.0;
  v[3 + iy] = 1.0;
  if ((state - v).squaredNorm() < threshold * threshold) {
    return VertexPair{static_cast<Strategy>(ix), static_cast<Strategy>(iy)};
  }
  return std::nullopt;
}

ItineraryTracker::ItineraryTracker(double near_threshold, double min_residence)
    : threshold_(near_threshold), min_residence_(min_residence) {
  if (!(near_threshold > 0.0 && near_threshold < 0.5)) {
    throw InvalidArgument("near threshold must lie in (0, 0.5)");
  }
}

bool ItineraryTracker::observe(double t, const Vec6& state) {
  const auto near = nearby_vertex(state, threshold_);
  if (current_ && near && *near == current_->vertex) {
    current_->exit = t;
    return false;
  }
  bool closed = false;
  if (current_) {
    current_->exit = t;
    if (current_->exit - current_->entry >= min_residence_) {
      auto& visits = itinerary_.visits;
      if (!visits.empty() && visits.back().node == current_->node) {
        visits.back().exit = current_->exit;
      } else {
        visits.push_back(*current_);
      }
      closed = true;
    }
    current_.reset();
  }
  if (near) current_ = Visit{node_of(*near), *near, t, t};
  return closed;
}

Itinerary itinerary(const Trajectory& traj, double near_threshold, double min_residence) {
  if (min_residence < 0.0) {
    min_residence = traj.times.size() > 1 ? 5.0 * (traj.times[1] - traj.times[0]) : 0.0;
  }
  ItineraryTracker tracker(near_threshold, min_residence);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    tracker.observe(traj.times[i], traj.states[i].vector());
  }
  return tracker.itinerary();
}

namespace {

// Coordinates off an edge: c for the moving player, g and h for the fixed one.
struct OffEdge {
  int c;
  int g;
  int h;
};

const std::array<OffEdge, 18>& off_edge_coordinates() {
  static const std::array<OffEdge, 18> table = [] {
    std::array<OffEdge, 18> out{};
    for (std::size_t k = 0; k < out.size(); ++k) {
      const auto& e = network_edges()[k];
      const bool x_moves = e.from.y == e.to.y;
      const int mo = x_moves ? 0 : 3;
      const int fo = x_moves ? 3 : 0;
      const int a = static_cast<int>(x_moves ? e.from.x : e.from.y);
      const int b = static_cast<int>(x_moves ? e.to.x : e.to.y);
      const int f = static_cast<int>(x_moves ? e.from.y : e.from.x);
      out[k] = {mo + 3 - a - b, fo + (f + 1) % 3, fo + (f + 2) % 3};
    }
    return out;
  }();
  return table;
}

double log_sum_exp(std::initializer_list<double> v) {
  const double top = std::max(v);
  if (top == -std::numeric_limits<double>::infinity()) return top;
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - top);
  return top + std::log(sum);
}

}  // namespace

double distance_to_network(const Vec6& s) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& o : off_edge_coordinates()) {
    const double c = s[o.c];
    const double g = s[o.g];
    const double h = s[o.h];
    best = std::min(best, 1.5 * c * c + g * g + h * h + (g + h) * (g + h));
  }
  return std::sqrt(best);
}

double log_distance_to_network(const Vec6& u) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& o : off_edge_coordinates()) {
    const double gh = log_sum_exp({u[o.g], u[o.h]});
    best = std::min(best, log_sum_exp({std::log(1.5) + 2.0 * u[o.c], 2.0 * u[o.g], 2.0 * u[o.h],
                                       2.0 * gh}));
  }
  return 0.5 * best;
}

double distance_to_network(const GameState& state) { return distance_to_network(state.vector()); }

}  // namespace rsp
