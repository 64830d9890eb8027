#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rspcycles/errors.hpp"
#include "rspcycles/flow.hpp"

namespace {

using rsp::GameState;
using rsp::NodeId;
using rsp::PayoffParams;
using rsp::Vec6;

GameState near_losing_vertex(double d) {
  return GameState({1.0 - 2.0 * d, d, d}, {d, d, 1.0 - 2.0 * d});
}

TEST(Integrate, NashIsConstant) {
  const auto traj = rsp::integrate(rsp::nash_point(), {-0.3, 0.6}, 20.0, 1e-3, 100);
  ASSERT_GE(traj.states.size(), 2u);
  for (const auto& s : traj.states) {
    EXPECT_LT((s.vector() - rsp::nash_point().vector()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Integrate, TimesIncreaseAndEndpointsRecorded) {
  const auto traj = rsp::integrate(near_losing_vertex(0.01), {-0.3, -0.3}, 1.05, 1e-2, 7);
  EXPECT_DOUBLE_EQ(traj.times.front(), 0.0);
  EXPECT_NEAR(traj.times.back(), 1.05, 1e-12);
  for (std::size_t i = 1; i < traj.times.size(); ++i) EXPECT_GT(traj.times[i], traj.times[i - 1]);
  EXPECT_EQ(traj.times.size(), traj.states.size());
}

TEST(Integrate, RejectsInvalidArguments) {
  EXPECT_THROW(rsp::integrate(rsp::nash_point(), {0, 0}, 1.0, 0.0), rsp::InvalidArgument);
  EXPECT_THROW(rsp::integrate(rsp::nash_point(), {0, 0}, -1.0, 1e-3), rsp::InvalidArgument);
}

TEST(Integrate, OversizedStepIsRejected) {
  EXPECT_THROW(rsp::integrate(near_losing_vertex(0.05), {0.5, 0.5}, 50.0, 2.0), rsp::StepRejected);
}

TEST(Integrate, RepresentativeFaceIsInvariant) {
  const GameState s({0.7, 0.3, 0.0}, {0.0, 0.0, 1.0});
  for (double e : {-0.6, 0.0, 0.8}) {
    const auto traj = rsp::integrate(s, {e, -e / 2}, 50.0, 1e-3, 50);
    for (const auto& st : traj.states) {
      EXPECT_EQ(st.x()[2], 0.0);
      EXPECT_EQ(st.y()[0], 0.0);
      EXPECT_EQ(st.y()[1], 0.0);
      EXPECT_EQ(st.y()[2], 1.0);
    }
  }
}

TEST(Integrate, ZeroCoordinatesStayExactlyZero) {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 20; ++n) {
    const auto [ex, ey] = oracle::random_params(rng, 0.9);
    Vec6 v = oracle::random_state(rng);
    const int a = static_cast<int>(rng() % 3);
    const int b = 3 + static_cast<int>(rng() % 3);
    v[a] = 0.0;
    v[b] = 0.0;
    v.head<3>() /= v.head<3>().sum();
    v.tail<3>() /= v.tail<3>().sum();
    const auto traj = rsp::integrate(GameState::from_vector(v), {ex, ey}, 30.0, 1e-2, 10);
    for (const auto& st : traj.states) {
      EXPECT_EQ(st.vector()[a], 0.0);
      EXPECT_EQ(st.vector()[b], 0.0);
    }
  }
}

TEST(Integrate, SimplexSumsStayWithinTolerance) {
  std::mt19937_64 rng(12);
  for (int n = 0; n < 20; ++n) {
    const auto [ex, ey] = oracle::random_params(rng, 0.9);
    const auto s = GameState::from_vector(oracle::random_state(rng));
    const auto traj = rsp::integrate(s, {ex, ey}, 100.0, 1e-2, 1000);
    EXPECT_LT(traj.max_sum_deviation, 1e-9);
  }
}

TEST(Integrate, FlowIsEquivariant) {
  std::mt19937_64 rng(13);
  for (int n = 0; n < 10; ++n) {
    const auto [ex, ey] = oracle::random_params(rng, 0.9);
    const auto s = GameState::from_vector(oracle::random_state(rng));
    const auto a = rsp::integrate(rsp::cyclic_shift(s), {ex, ey}, 20.0, 1e-2, 2000);
    const auto b = rsp::integrate(s, {ex, ey}, 20.0, 1e-2, 2000);
    ASSERT_EQ(a.states.size(), b.states.size());
    for (std::size_t i = 0; i < a.states.size(); ++i) {
      const Vec6 diff = a.states[i].vector() - rsp::cyclic_shift(b.states[i].vector());
      EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(LogStepper, AgreesWithLinearStepper) {
  const PayoffParams params(-0.3, 0.2);
  const auto s0 = GameState({0.5, 0.3, 0.2}, {0.1, 0.6, 0.3});
  Vec6 lin = s0.vector();
  Vec6 u = rsp::LogRk4Stepper::to_log(lin);
  rsp::Rk4Stepper a(params, 1e-3);
  rsp::LogRk4Stepper b(params, 1e-3);
  for (int i = 0; i < 5000; ++i) {
    a.step(lin, i * 1e-3);
    b.step(u);
  }
  EXPECT_LT((lin - rsp::LogRk4Stepper::to_linear(u)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(LogStepper, DriftOnlyNearVertices) {
  const PayoffParams params(-0.3, -0.3);
  rsp::LogRk4Stepper stepper(params, 1e-2);
  Vec6 u = rsp::LogRk4Stepper::to_log(rsp::nash_point().vector());
  const Vec6 before = u;
  EXPECT_EQ(stepper.drift(u, 1e-12, 10.0), 0.0);
  EXPECT_EQ(u, before);

  Vec6 near;
  near << 1.0, 1e-20, 1e-30, 1e-25, 1e-40, 1.0;
  u = rsp::LogRk4Stepper::to_log(near);
  const double t = stepper.drift(u, 1e-12, 1e6);
  EXPECT_GT(t, 0.0);
  const Vec6 after = rsp::LogRk4Stepper::to_linear(u);
  double largest_small = 0.0;
  for (int i : {1, 2, 3, 4}) largest_small = std::max(largest_small, after[i]);
  EXPECT_NEAR(std::log(largest_small), std::log(1e-12), 1e-9);
}

TEST(Itinerary, NashTrajectoryIsEmpty) {
  const auto traj = rsp::integrate(rsp::nash_point(), {0.1, 0.2}, 10.0);
  EXPECT_TRUE(rsp::itinerary(traj).visits.empty());
}

TEST(Itinerary, AlternatesAlongC0WithGrowingResidence) {
  const auto traj = rsp::integrate(near_losing_vertex(1e-3), {-0.3, -0.3}, 200.0, 1e-3, 10);
  const auto itin = rsp::itinerary(traj, 0.1, 5e-3);
  ASSERT_GE(itin.visits.size(), 6u);
  for (std::size_t i = 0; i < itin.visits.size(); ++i) {
    const auto& v = itin.visits[i];
    EXPECT_GT(v.exit, v.entry);
    EXPECT_NE(v.node, NodeId::Xi2);
    if (i > 0) EXPECT_NE(v.node, itin.visits[i - 1].node);
  }
  // Residence at each node grows from one pass to the next after the first
  // two visits.
  for (std::size_t i = 4; i < itin.visits.size(); ++i) {
    const double now = itin.visits[i].exit - itin.visits[i].entry;
    const double before = itin.visits[i - 2].exit - itin.visits[i - 2].entry;
    EXPECT_GT(now, before) << "visit " << i;
  }
}

TEST(Itinerary, ShortVisitsAreDiscarded) {
  rsp::ItineraryTracker tracker(0.1, 1.0);
  Vec6 near = rsp::GameState::pure(rsp::Strategy::Rock, rsp::Strategy::Paper).vector();
  const Vec6 far = rsp::nash_point().vector();
  tracker.observe(0.0, far);
  tracker.observe(0.1, near);
  tracker.observe(0.5, far);
  EXPECT_TRUE(tracker.itinerary().visits.empty());
  tracker.observe(1.0, near);
  tracker.observe(3.0, near);
  tracker.observe(3.1, far);
  ASSERT_EQ(tracker.itinerary().visits.size(), 1u);
  EXPECT_EQ(tracker.itinerary().visits[0].node, NodeId::Xi0);
}

TEST(Distance, VerticesFacesAndNash) {
  for (auto sx : rsp::kStrategies) {
    for (auto sy : rsp::kStrategies) {
      EXPECT_EQ(rsp::distance_to_network(GameState::pure(sx, sy)), 0.0);
    }
  }
  EXPECT_EQ(rsp::distance_to_network(GameState({0.4, 0.6, 0.0}, {0.0, 0.0, 1.0})), 0.0);
  EXPECT_EQ(rsp::distance_to_network(GameState({1.0, 0.0, 0.0}, {0.3, 0.0, 0.7})), 0.0);
  const double nash = rsp::distance_to_network(rsp::nash_point());
  EXPECT_NEAR(nash, std::sqrt(5.0 / 6.0), 1e-15);
  EXPECT_NEAR(nash, oracle::distance_to_edges(rsp::nash_point().vector()), 1e-15);
}

TEST(Distance, MatchesEdgeProjectionOracle) {
  std::mt19937_64 rng(14);
  for (int n = 0; n < 5000; ++n) {
    Vec6 v = oracle::random_state(rng);
    if (n % 2 == 0) {
      // Concentrate half of the samples near the network.
      const int sx = static_cast<int>(rng() % 3), sy = static_cast<int>(rng() % 3);
      Vec6 vertex = Vec6::Zero();
      vertex[sx] = 1.0;
      vertex[3 + sy] = 1.0;
      const double t = std::uniform_real_distribution<double>(0.0, 0.3)(rng);
      v = (1.0 - t) * vertex + t * v;
    }
    const double d = rsp::distance_to_network(v);
    EXPECT_NEAR(d, oracle::distance_to_edges(v), 1e-12);
    EXPECT_NEAR(std::exp(rsp::log_distance_to_network(rsp::LogRk4Stepper::to_log(v))), d,
                1e-12 * (1.0 + d));
  }
}

TEST(Distance, LogFormResolvesTinyDistances) {
  Vec6 u;
  u << 0.0, -900.0, -1000.0, -950.0, -2000.0, 0.0;
  const double ld = rsp::log_distance_to_network(u);
  EXPECT_TRUE(std::isfinite(ld));
  EXPECT_LT(ld, -890.0);
  EXPECT_GT(ld, -960.0);
}

}  // namespace
