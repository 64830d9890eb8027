#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rspcycles/flow.hpp"
#include "rspcycles/game.hpp"
#include "rspcycles/network.hpp"
#include "rspcycles/stability.hpp"

namespace rsp {

/// Shortest representation with 17 significant digits, '.' decimal point.
std::string format_real(double v);

// Parameter-region sweep.

struct RegionGrid {
  int resolution;
  std::vector<double> axis;  // cell centres -1 + (2i + 1)/resolution
  /// cells[i * resolution + j] at (axis[i], axis[j]) = (eps_x, eps_y).
  std::vector<std::array<Classification, 5>> cells;

  Classification at(int i, int j, CycleId c) const {
    return cells[static_cast<std::size_t>(i * resolution + j)][static_cast<std::size_t>(c)];
  }
};

/// Classifies all five cycles at each cell centre of a resolution^2 grid over
/// (-1, 1)^2. Throws InvalidArgument for resolution < 11.
RegionGrid run_region_sweep(int resolution, IndexPath path = IndexPath::Closed);

/// CSV with columns eps_x,eps_y,C0,C1,C2,C3,C4.
void write_region_csv(const RegionGrid& grid, std::ostream& out);

// Monte Carlo basin estimation.

struct BasinOptions {
  CycleId cycle = CycleId::C0;
  PayoffParams params{-0.3, -0.3};
  double delta = 0.05;
  std::size_t samples = 500;
  double horizon = 500.0;
  std::uint64_t seed = 42;
  double dt = 1e-2;
  /// Transitions along the cycle's pattern required for a success.
  std::size_t transitions = 8;
  /// A run is abandoned once its distance to the network exceeds this.
  double escape_radius = 0.5;
  /// Straight-line drift near a vertex while all other coordinates are
  /// below this (see LogRk4Stepper::drift); 0 disables it.
  double drift_below = 1e-12;
  unsigned threads = 0;
};

struct BasinSample {
  bool converged = false;
  double end_time = 0.0;
  /// Completed visits, followed by the visit in progress if there is one.
  std::vector<Visit> visits;
  /// Log of the largest distance to the network on the way into each visit.
  std::vector<double> transit_distance;
};

struct BasinEstimate {
  BasinOptions options;
  std::size_t converged = 0;
  double fraction = 0.0;
  std::vector<BasinSample> runs;
};

/// Initial condition for sample `index`: a uniformly chosen connection of the
/// cycle, a uniform point on its edge, and the three transverse coordinates
/// drawn uniformly from (0, delta/3), which keeps it within delta of the edge.
GameState basin_seed(const Cycle& cycle, double delta, std::uint64_t seed, std::uint64_t index);

/// Simulates one seed in log coordinates (LogRk4Stepper) until success,
/// escape, or the horizon. A transition counts once the next visit has begun.
BasinSample run_basin_sample(const Cycle& cycle, const BasinOptions& options,
                             const GameState& initial);

BasinEstimate estimate_basin_fraction(const BasinOptions& options);

/// True when the last `transitions` + 1 visits follow the cycle and the
/// distance on the way into each node shrinks from one pass to the next.
bool follows_cycle(const Cycle& cycle, const std::vector<Visit>& visits,
                   const std::vector<double>& transit_distance, std::size_t transitions);

// Return map of the flow versus the transition matrix.

struct FirstReturn {
  double delta;
  Vec3 predicted;  // M^(0) log(seed)
  Vec3 observed;   // log section coordinates at the first return
  double relative_error;
  double return_time;
};

/// Seeds the incoming section of xi0 (the representative vertex (R,P), at
/// distance `section` along the contracting coordinate y2) with
/// w = z1 = z2 = delta, integrates until the orbit crosses the image section
/// at (S,R), and maps the crossing back by the inverse group generator.
FirstReturn first_return_comparison(const PayoffParams& params, double delta,
                                    double section = 0.1, double dt = 1e-3,
                                    double t_max = 1000.0);

// Trajectory export.

void write_trajectory_csv(const Trajectory& traj, std::ostream& out);
void write_itinerary_csv(const Itinerary& itin, std::ostream& out);

/// Integrates and writes the trajectory to `trajectory_path` and the
/// itinerary to `itinerary_path`. Throws IoError naming the path on failure.
Itinerary simulate_to_files(const GameState& initial, const PayoffParams& params, double t_max,
                            double dt, std::size_t stride,
                            const std::filesystem::path& trajectory_path,
                            const std::filesystem::path& itinerary_path);

}  // namespace rsp
