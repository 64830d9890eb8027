#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rspcycles/game.hpp"
#include "rspcycles/network.hpp"

namespace rsp {

/// Fixed-step classical Runge-Kutta stepper for the replicator field.
///
/// After each step negative coordinates are clamped to zero and both
/// simplices renormalised. A coordinate below -1e-9 before clamping raises
/// StepRejected. Coordinates that are exactly zero stay exactly zero, since
/// every component of the field carries its own coordinate as a factor.
class Rk4Stepper {
 public:
  static constexpr double kRejectBelow = -1e-9;

  Rk4Stepper(const PayoffParams& params, double dt);

  double dt() const noexcept { return dt_; }
  const ReplicatorField& field() const noexcept { return field_; }

  /// Advances `state` from time t to t + dt in place.
  void step(Vec6& state, double t);

  /// Largest |sum - 1| seen before renormalisation since construction.
  double max_sum_deviation() const noexcept { return max_sum_deviation_; }

 private:
  ReplicatorField field_;
  double dt_;
  double max_sum_deviation_ = 0.0;
  Vec6 k1_, k2_, k3_, k4_, tmp_;
};

/// Fixed-step Runge-Kutta stepper for the same flow written in log
/// coordinates u = log(x), du_i/dt = (Ay)_i - x.Ay (and likewise for y).
///
/// Near the heteroclinic network the small coordinates decay like
/// exp(-c t) with sojourn times growing geometrically, and in linear
/// coordinates they underflow to exact zeros after a few passages. In log
/// coordinates they stay representable. Each simplex is renormalised with a
/// log-sum-exp after every step; zero coordinates are -inf and stay so.
class LogRk4Stepper {
 public:
  LogRk4Stepper(const PayoffParams& params, double dt);

  double dt() const noexcept { return dt_; }

  /// Advances the log state `u` in place by one step.
  void step(Vec6& u);

  /// Close to a vertex, with every other coordinate below `threshold`, the
  /// log field is constant up to O(threshold); the state then moves on a
  /// straight line. Advances `u` along that line until the first growing
  /// coordinate reaches `threshold`, or by `max_time`, and returns the time
  /// advanced. Returns 0 and leaves `u` alone outside that regime.
  double drift(Vec6& u, double threshold, double max_time);

  static Vec6 to_log(const Vec6& state);
  static Vec6 to_linear(const Vec6& u);

 private:
  void rate(const Vec6& u, Vec6& out) const;
  static void renormalise(Vec6& u);

  PayoffMatrixPair m_;
  double dt_;
  Vec6 k1_, k2_, k3_, k4_, tmp_;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<GameState> states;
  double max_sum_deviation = 0.0;
};

/// Integrates from `initial` up to t_max, recording every `stride`-th step
/// (the initial and final states are always recorded).
Trajectory integrate(const GameState& initial, const PayoffParams& params, double t_max,
                     double dt = 1e-3, std::size_t stride = 1);

inline constexpr double kDefaultNearThreshold = 0.1;

struct Visit {
  NodeId node;
  VertexPair vertex;  // orbit member at which the visit started
  double entry;
  double exit;
};

struct Itinerary {
  std::vector<Visit> visits;

  std::vector<NodeId> labels() const;
};

/// Index of the vertex within `threshold` of the state, if any. Vertices are
/// sqrt(2) apart, so for thresholds below one half at most one qualifies.
std::optional<VertexPair> nearby_vertex(const Vec6& state, double threshold);

/// Incremental itinerary builder fed one sample at a time.
///
/// Visits shorter than `min_residence` are discarded; a visit whose label
/// equals the previous recorded one is merged into it.
class ItineraryTracker {
 public:
  ItineraryTracker(double near_threshold, double min_residence);

  /// Returns true when this sample closed a visit that was recorded or merged.
  bool observe(double t, const Vec6& state);

  const Itinerary& itinerary() const noexcept { return itinerary_; }
  bool inside() const noexcept { return current_.has_value(); }
  /// The visit in progress, if the last sample was near a vertex.
  const std::optional<Visit>& current() const noexcept { return current_; }

 private:
  double threshold_;
  double min_residence_;
  std::optional<Visit> current_;
  Itinerary itinerary_;
};

/// Visits of the trajectory to the nodes. A negative `min_residence` selects
/// five times the first time step of the trajectory.
Itinerary itinerary(const Trajectory& traj, double near_threshold = kDefaultNearThreshold,
                    double min_residence = -1.0);

/// Euclidean distance in R^6 to the union of the 18 connecting edges (which
/// contain all nine vertices).
///
/// For a point of the simplices the nearest point of the edge from (a, f) to
/// (b, f) (player X moving from a to b, Y at f) is x_a + x_c/2 along the edge,
/// and the squared distance reduces to 1.5 x_c^2 + y_g^2 + y_h^2 + (y_g + y_h)^2
/// with c, g, h the coordinates off the edge. Only small coordinates enter,
/// so the result keeps full relative precision close to the network.
double distance_to_network(const Vec6& state);
double distance_to_network(const GameState& state);

/// log(distance_to_network) from log coordinates, usable far below the
/// range of doubles.
double log_distance_to_network(const Vec6& log_state);

}  // namespace rsp
