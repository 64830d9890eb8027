#include "rspcycles/harness.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include "rspcycles/errors.hpp"
#include "rspcycles/maps.hpp"
#include "rspcycles/parallel.hpp"
#include "rspcycles/philox.hpp"

namespace rsp {

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

RegionGrid run_region_sweep(int resolution, IndexPath path) {
  if (resolution < 11) throw InvalidArgument("region sweep resolution must be at least 11");
  RegionGrid grid{resolution, {}, {}};
  const auto n = static_cast<std::size_t>(resolution);
  grid.axis.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid.axis[i] = -1.0 + (2.0 * static_cast<double>(i) + 1.0) / resolution;
  }
  grid.cells.resize(n * n);
  const auto& net = quotient_network();
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      const PayoffParams params(grid.axis[i], grid.axis[j]);
      auto& cell = grid.cells[i * n + j];
      for (CycleId c : kCycles) {
        cell[static_cast<std::size_t>(c)] = classify(net.cycle(c), params, path).classification;
      }
    }
  });
  return grid;
}

void write_region_csv(const RegionGrid& grid, std::ostream& out) {
  out << "eps_x,eps_y,C0,C1,C2,C3,C4\n";
  const auto n = static_cast<std::size_t>(grid.resolution);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out << format_real(grid.axis[i]) << ',' << format_real(grid.axis[j]);
      for (Classification c : grid.cells[i * n + j]) out << ',' << to_string(c);
      out << '\n';
    }
  }
}

GameState basin_seed(const Cycle& cycle, double delta, std::uint64_t seed, std::uint64_t index) {
  SampleStream rng(seed, index);
  const auto count = cycle.connections.size();
  const auto pick = std::min(count - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(count)));
  const Connection& c = cycle.connections[pick];
  const double t = rng.uniform();
  const double side = delta / 3.0;
  const double off_edge = side * rng.uniform();
  const double q1 = side * rng.uniform();
  const double q2 = side * rng.uniform();

  const bool x_moves = c.rep_from.y == c.rep_to.y;
  const int a = static_cast<int>(x_moves ? c.rep_from.x : c.rep_from.y);
  const int b = static_cast<int>(x_moves ? c.rep_to.x : c.rep_to.y);
  const int f = static_cast<int>(x_moves ? c.rep_from.y : c.rep_from.x);

  Vec3 moving;
  moving[a] = (1.0 - off_edge) * t;
  moving[b] = (1.0 - off_edge) * (1.0 - t);
  moving[3 - a - b] = off_edge;
  Vec3 fixed;
  fixed[(f + 1) % 3] = q1;
  fixed[(f + 2) % 3] = q2;
  fixed[f] = 1.0 - q1 - q2;

  Vec6 s;
  s << (x_moves ? moving : fixed), (x_moves ? fixed : moving);
  return GameState::from_vector(s);
}

bool follows_cycle(const Cycle& cycle, const std::vector<Visit>& visits,
                   const std::vector<double>& transit_distance, std::size_t transitions) {
  const std::size_t n = visits.size();
  if (n < transitions + 1 || transit_distance.size() != n) return false;
  const std::size_t start = n - transitions - 1;
  for (std::size_t k = start; k + 1 < n; ++k) {
    if (!cycle.contains(visits[k].node) || visits[k + 1].node != cycle.next(visits[k].node)) {
      return false;
    }
  }
  const std::size_t period = cycle.nodes.size();
  for (std::size_t k = start; k + period < n; ++k) {
    if (!(transit_distance[k + period] < transit_distance[k])) return false;
  }
  return true;
}

BasinSample run_basin_sample(const Cycle& cycle, const BasinOptions& options,
                             const GameState& initial) {
  constexpr std::size_t kProbeEvery = 10;
  BasinSample sample;
  LogRk4Stepper stepper(options.params, options.dt);
  ItineraryTracker tracker(kDefaultNearThreshold, 5.0 * options.dt);
  Vec6 u = LogRk4Stepper::to_log(initial.vector());
  std::vector<double>& dist = sample.transit_distance;
  // Distances are tracked as logarithms; they shrink far below 1e-308.
  constexpr double kNone = -std::numeric_limits<double>::infinity();
  const double log_escape = std::log(options.escape_radius);
  double segment_max = log_distance_to_network(u);  // since the last visit ended
  double entry_max = kNone;                         // transit into the open visit
  double t = 0.0;
  std::size_t n = 0;
  while (t < options.horizon) {
    double advanced = 0.0;
    if (options.drift_below > 0.0) advanced = stepper.drift(u, options.drift_below, options.horizon - t);
    if (advanced == 0.0) {
      stepper.step(u);
      advanced = options.dt;
    }
    t += advanced;
    const Vec6 s = LogRk4Stepper::to_linear(u);
    if (++n % kProbeEvery == 0 && !tracker.inside()) {
      const double d = log_distance_to_network(u);
      if (d > log_escape) break;
      segment_max = std::max(segment_max, d);
    }

    const bool was_inside = tracker.inside();
    const std::size_t before = tracker.itinerary().visits.size();
    const bool closed = tracker.observe(t, s);
    const auto& visits = tracker.itinerary().visits;
    if (was_inside && !tracker.current().has_value()) {
      if (visits.size() > before) {
        dist.push_back(entry_max);
      } else if (closed) {
        dist.back() = std::max(dist.back(), entry_max);
      } else {
        segment_max = std::max(segment_max, entry_max);  // grazing visit, same transit
      }
    }
    if (!was_inside && tracker.inside()) {
      entry_max = segment_max;
      segment_max = kNone;
      const Visit& open = *tracker.current();
      if (visits.empty() || visits.back().node != open.node) {
        std::vector<Visit> seen = visits;
        seen.push_back(open);
        std::vector<double> seen_dist = dist;
        seen_dist.push_back(entry_max);
        if (follows_cycle(cycle, seen, seen_dist, options.transitions)) {
          sample.converged = true;
          break;
        }
      }
    }
  }
  sample.end_time = t;
  sample.visits = tracker.itinerary().visits;
  if (tracker.current()) {
    sample.visits.push_back(*tracker.current());
    dist.push_back(entry_max);
  }
  return sample;
}

BasinEstimate estimate_basin_fraction(const BasinOptions& options) {
  if (!(options.delta > 0.0 && options.delta < 0.2)) {
    throw InvalidArgument("basin seeding distance must lie in (0, 0.2)");
  }
  if (options.samples < 100) throw InvalidArgument("basin estimation needs at least 100 samples");
  if (!(options.horizon > 0.0)) throw InvalidArgument("horizon must be positive");
  const Cycle& cycle = quotient_network().cycle(options.cycle);
  BasinEstimate est{options, 0, 0.0, std::vector<BasinSample>(options.samples)};
  parallel_for(
      options.samples,
      [&](std::size_t i) {
        est.runs[i] = run_basin_sample(cycle, options,
                                       basin_seed(cycle, options.delta, options.seed, i));
      },
      options.threads);
  for (const auto& r : est.runs) est.converged += r.converged ? 1 : 0;
  est.fraction = static_cast<double>(est.converged) / static_cast<double>(options.samples);
  return est;
}

FirstReturn first_return_comparison(const PayoffParams& params, double delta, double section,
                                    double dt, double t_max) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
  if (!(section > 0.0 && section < 0.5)) throw InvalidArgument("section must lie in (0, 0.5)");
  const double h = section;
  Vec6 s;
  s << 1.0 - 2.0 * h * delta, h * delta, h * delta, h * delta, h, 1.0 - h - h * delta;

  const Cycle& c0 = quotient_network().cycle(CycleId::C0);
  const Vec3 eta_in = Vec3::Constant(std::log(delta));
  FirstReturn out{delta, cycle_transition_matrix(c0, NodeId::Xi0, params).m * eta_in,
                  Vec3::Zero(), 0.0, 0.0};

  Rk4Stepper stepper(params, dt);
  const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt));
  Vec6 prev = s;
  for (std::size_t n = 1; n <= steps; ++n) {
    prev = s;
    stepper.step(s, static_cast<double>(n - 1) * dt);
    if (prev[5] > h && s[5] <= h && s[1] > 0.5) {
      const double f = (prev[5] - h) / (prev[5] - s[5]);
      // Coordinates at (S,R) playing the roles of (x2, y1, x3) at (R,P).
      const std::array<int, 3> idx = {2, 4, 0};
      for (int k = 0; k < 3; ++k) {
        const double lp = std::log(prev[idx[static_cast<std::size_t>(k)]]);
        const double ln = std::log(s[idx[static_cast<std::size_t>(k)]]);
        out.observed[k] = lp + f * (ln - lp) - std::log(h);
      }
      out.return_time = (static_cast<double>(n - 1) + f) * dt;
      out.relative_error = (out.observed - out.predicted).norm() / out.predicted.norm();
      return out;
    }
  }
  throw Error("orbit did not return to the section before t_max");
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  out << "t,x1,x2,x3,y1,y2,y3\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    out << format_real(traj.times[i]);
    const Vec6 v = traj.states[i].vector();
    for (int k = 0; k < 6; ++k) out << ',' << format_real(v[k]);
    out << '\n';
  }
}

void write_itinerary_csv(const Itinerary& itin, std::ostream& out) {
  out << "label,entry,exit\n";
  for (const auto& v : itin.visits) {
    out << to_string(v.node) << ',' << format_real(v.entry) << ',' << format_real(v.exit) << '\n';
  }
}

namespace {

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path.string() + " for writing");
  writer(file);
  file.flush();
  if (!file) throw IoError("failed writing " + path.string());
}

}  // namespace

Itinerary simulate_to_files(const GameState& initial, const PayoffParams& params, double t_max,
                            double dt, std::size_t stride,
                            const std::filesystem::path& trajectory_path,
                            const std::filesystem::path& itinerary_path) {
  const Trajectory traj = integrate(initial, params, t_max, dt, stride);
  const Itinerary itin = itinerary(traj, kDefaultNearThreshold, 5.0 * dt);
  write_file(trajectory_path, [&](std::ostream& o) { write_trajectory_csv(traj, o); });
  write_file(itinerary_path, [&](std::ostream& o) { write_itinerary_csv(itin, o); });
  return itin;
}

}  // namespace rsp
