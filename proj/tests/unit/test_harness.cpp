#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rspcycles/errors.hpp"
#include "rspcycles/harness.hpp"
#include "rspcycles/parallel.hpp"
#include "rspcycles/philox.hpp"

namespace {

using rsp::Classification;
using rsp::CycleId;
using rsp::NodeId;

const rsp::Cycle& cycle(CycleId id) { return rsp::quotient_network().cycle(id); }

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("rspcycles_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                    "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Philox, KnownAnswer) {
  const auto out = rsp::Philox4x32::block({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out, (rsp::Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  const auto ones = rsp::Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                           {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(ones, (rsp::Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, StreamsAreDeterministicAndDistinct) {
  rsp::SampleStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  double mean = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_GT(x, 0.0);
    EXPECT_LT(x, 1.0);
    mean += x;
    if (i < 4) {
      EXPECT_NE(x, c.uniform());
      EXPECT_NE(x, d.uniform());
    }
  }
  EXPECT_NEAR(mean / 10000.0, 0.5, 0.02);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  rsp::parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; }, 8);
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(rsp::parallel_for(100, [](std::size_t i) {
                 if (i == 37) throw std::runtime_error("boom");
               }, 4),
               std::runtime_error);
}

TEST(RegionSweep, RejectsCoarseGrids) {
  EXPECT_THROW(rsp::run_region_sweep(10), rsp::InvalidArgument);
}

int nearest(const rsp::RegionGrid& g, double v) {
  int best = 0;
  for (int i = 1; i < g.resolution; ++i) {
    if (std::abs(g.axis[static_cast<std::size_t>(i)] - v) <
        std::abs(g.axis[static_cast<std::size_t>(best)] - v)) {
      best = i;
    }
  }
  return best;
}

TEST(RegionSweep, SpotCells) {
  const auto g = rsp::run_region_sweep(41);
  ASSERT_EQ(g.cells.size(), 41u * 41u);
  // Off the diagonal, which is a boundary line for C1 and C2.
  const int a = nearest(g, -0.3), b = nearest(g, -0.5);
  EXPECT_EQ(g.at(a, b, CycleId::C0), Classification::EAS);
  for (CycleId c : {CycleId::C1, CycleId::C2, CycleId::C3, CycleId::C4}) {
    EXPECT_EQ(g.at(a, b, c), Classification::CU);
  }
  EXPECT_EQ(g.at(nearest(g, 0.9), nearest(g, 0.5), CycleId::C2), Classification::FAS);
  EXPECT_EQ(g.at(nearest(g, 0.5), nearest(g, 0.9), CycleId::C1), Classification::FAS);
  for (const auto& cell : g.cells) {
    for (CycleId c : {CycleId::C3, CycleId::C4}) {
      const auto k = cell[static_cast<std::size_t>(c)];
      EXPECT_TRUE(k == Classification::CU || k == Classification::Boundary);
    }
  }
}

TEST(RegionSweep, PathsAgreeAndCsvIsStable) {
  const auto closed = rsp::run_region_sweep(25, rsp::IndexPath::Closed);
  const auto matrix = rsp::run_region_sweep(25, rsp::IndexPath::Matrix);
  EXPECT_EQ(closed.cells, matrix.cells);
  std::ostringstream a, b;
  rsp::write_region_csv(closed, a);
  rsp::write_region_csv(rsp::run_region_sweep(25), b);
  EXPECT_EQ(a.str(), b.str());
  std::istringstream lines(a.str());
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "eps_x,eps_y,C0,C1,C2,C3,C4");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  EXPECT_EQ(rows, 25 * 25);
}

TEST(BasinSeed, WithinDeltaOfTheCycleAndInterior) {
  for (CycleId id : rsp::kCycles) {
    for (std::uint64_t i = 0; i < 200; ++i) {
      const auto s = rsp::basin_seed(cycle(id), 0.05, 42, i);
      const auto v = s.vector();
      EXPECT_TRUE((v.array() > 0.0).all());
      EXPECT_LE(rsp::distance_to_network(v), 0.05);
      EXPECT_EQ(s, rsp::basin_seed(cycle(id), 0.05, 42, i));
      EXPECT_LT(rsp::distance_to_network(v), oracle::distance_to_edges(v) + 1e-12);
    }
  }
}

rsp::Visit visit(NodeId n, double a, double b) { return {n, {rsp::Strategy::Rock, rsp::Strategy::Rock}, a, b}; }

TEST(FollowsCycle, PatternAndShrinkingDistance) {
  const auto& c0 = cycle(CycleId::C0);
  std::vector<rsp::Visit> v;
  std::vector<double> d;
  for (int k = 0; k < 9; ++k) {
    v.push_back(visit(k % 2 ? NodeId::Xi1 : NodeId::Xi0, k, k + 0.5));
    d.push_back(-static_cast<double>(k));
  }
  EXPECT_TRUE(rsp::follows_cycle(c0, v, d, 8));
  EXPECT_FALSE(rsp::follows_cycle(c0, v, d, 9));
  auto grow = d;
  grow[8] = grow[6] + 1.0;
  EXPECT_FALSE(rsp::follows_cycle(c0, v, grow, 8));
  auto wrong = v;
  wrong[5].node = NodeId::Xi2;
  EXPECT_FALSE(rsp::follows_cycle(c0, wrong, d, 8));
  EXPECT_FALSE(rsp::follows_cycle(cycle(CycleId::C2), v, d, 8));
}

TEST(Basin, ValidatesOptions) {
  rsp::BasinOptions o;
  o.delta = 0.2;
  EXPECT_THROW(rsp::estimate_basin_fraction(o), rsp::InvalidArgument);
  o.delta = 0.05;
  o.samples = 99;
  EXPECT_THROW(rsp::estimate_basin_fraction(o), rsp::InvalidArgument);
  o.samples = 100;
  o.horizon = 0.0;
  EXPECT_THROW(rsp::estimate_basin_fraction(o), rsp::InvalidArgument);
}

TEST(Basin, DeterministicAcrossThreadCounts) {
  rsp::BasinOptions o;
  o.samples = 100;
  o.horizon = 300.0;
  o.threads = 1;
  const auto a = rsp::estimate_basin_fraction(o);
  o.threads = 4;
  const auto b = rsp::estimate_basin_fraction(o);
  EXPECT_EQ(a.converged, b.converged);
  ASSERT_EQ(a.runs.size(), b.runs.size());
  for (std::size_t i = 0; i < a.runs.size(); ++i) {
    EXPECT_EQ(a.runs[i].converged, b.runs[i].converged);
    EXPECT_EQ(a.runs[i].end_time, b.runs[i].end_time);
  }
  EXPECT_DOUBLE_EQ(a.fraction, static_cast<double>(a.converged) / 100.0);
  EXPECT_GE(a.fraction, 0.9);
}

TEST(Basin, ConvergedRunsAlternateBetweenCycleNodes) {
  rsp::BasinOptions o;
  o.samples = 100;
  const auto est = rsp::estimate_basin_fraction(o);
  for (const auto& run : est.runs) {
    if (!run.converged) continue;
    const auto& v = run.visits;
    ASSERT_GE(v.size(), 9u);
    for (std::size_t k = v.size() - 9; k + 1 < v.size(); ++k) {
      EXPECT_NE(v[k].node, NodeId::Xi2);
      EXPECT_NE(v[k].node, v[k + 1].node);
    }
  }
}

TEST(FirstReturn, ProducesFiniteComparison) {
  const auto r = rsp::first_return_comparison({-0.3, -0.3}, 1e-2);
  EXPECT_TRUE(r.observed.allFinite());
  EXPECT_TRUE(r.predicted.allFinite());
  EXPECT_GT(r.return_time, 0.0);
  EXPECT_GT(r.relative_error, 0.0);
  EXPECT_LT(r.relative_error, 1.0);
}

TEST(Export, TrajectoryAndItineraryCsv) {
  const auto dir = scratch_dir();
  const auto traj = dir / "nash.csv";
  const auto itin = dir / "nash_itinerary.csv";
  rsp::simulate_to_files(rsp::nash_point(), {0.2, -0.1}, 1.0, 1e-3, 100, traj, itin);
  std::istringstream lines(slurp(traj));
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "t,x1,x2,x3,y1,y2,y3");
  std::set<std::string> bodies;
  int rows = 0;
  for (std::string line; std::getline(lines, line); ++rows) bodies.insert(line.substr(line.find(',')));
  EXPECT_EQ(rows, 11);
  EXPECT_EQ(bodies.size(), 1u) << "Nash rows should be constant";
  EXPECT_EQ(slurp(itin), "label,entry,exit\n");
  std::filesystem::remove_all(dir);
}

TEST(Export, FaceSeedKeepsZeroColumn) {
  const auto dir = scratch_dir();
  rsp::simulate_to_files(rsp::GameState({0.6, 0.4, 0.0}, {0.0, 0.0, 1.0}), {-0.3, -0.3}, 20.0, 1e-3, 100,
                         dir / "face.csv", dir / "face_itin.csv");
  std::istringstream lines(slurp(dir / "face.csv"));
  std::string line;
  std::getline(lines, line);
  int rows = 0;
  for (; std::getline(lines, line); ++rows) {
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    ASSERT_EQ(cols.size(), 7u);
    EXPECT_EQ(cols[3], "0");
  }
  EXPECT_GT(rows, 100);
  std::filesystem::remove_all(dir);
}

TEST(Export, C0SeedItineraryAlternates) {
  const auto dir = scratch_dir();
  const auto itin = rsp::simulate_to_files(
      rsp::GameState({0.998, 0.001, 0.001}, {0.001, 0.001, 0.998}), {-0.3, -0.3}, 150.0, 1e-3, 1000,
      dir / "c0.csv", dir / "c0_itin.csv");
  ASSERT_GE(itin.visits.size(), 4u);
  for (std::size_t i = 0; i < itin.visits.size(); ++i) {
    EXPECT_EQ(itin.visits[i].node, i % 2 == 0 ? NodeId::Xi0 : NodeId::Xi1);
  }
  std::istringstream lines(slurp(dir / "c0_itin.csv"));
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  EXPECT_EQ(line.substr(0, 4), "xi0,");
  std::filesystem::remove_all(dir);
}

TEST(Export, UnwritablePathRaisesIoError) {
  const std::filesystem::path bad = "/nonexistent-dir/for/sure/traj.csv";
  try {
    rsp::simulate_to_files(rsp::nash_point(), {0.0, 0.1}, 0.1, 1e-3, 1, bad, bad);
    FAIL() << "expected IoError";
  } catch (const rsp::IoError& e) {
    EXPECT_NE(std::string(e.what()).find(bad.string()), std::string::npos);
  }
}

TEST(Format, SeventeenSignificantDigits) {
  EXPECT_EQ(rsp::format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(rsp::format_real(0.0), "0");
  EXPECT_EQ(std::stod(rsp::format_real(1.0 / 3.0)), 1.0 / 3.0);
}

}  // namespace
