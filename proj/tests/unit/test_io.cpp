#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "rspcycles/io.hpp"

namespace {

using nlohmann::json;
using rsp::CycleId;
using rsp::NodeId;

const rsp::Cycle& cycle(CycleId id) { return rsp::quotient_network().cycle(id); }

TEST(NetworkJson, ListsNodesConnectionsAndCycles) {
  const auto doc = json::parse(rsp::network_json());
  EXPECT_EQ(doc.at("version"), 1);
  ASSERT_EQ(doc.at("nodes").size(), 3u);
  EXPECT_EQ(doc["nodes"][2]["members"], json({"(R,R)", "(S,S)", "(P,P)"}));
  ASSERT_EQ(doc.at("connections").size(), 6u);
  EXPECT_EQ(doc["connections"][0]["representative"], json({"(R,P)", "(S,P)"}));
  EXPECT_EQ(doc["connections"][0]["space_q"], "(x1,x2,0;0,0,y3)");
  ASSERT_EQ(doc.at("cycles").size(), 5u);
  EXPECT_EQ(doc["cycles"][3]["nodes"], json({"xi0", "xi1", "xi2"}));
}

TEST(MatricesJson, RoundsToFifteenDigits) {
  const rsp::PayoffParams p(0.1, 0.2);
  const auto m = rsp::basic_transition_matrix(cycle(CycleId::C1), NodeId::Xi1, p);
  const auto doc = json::parse(rsp::matrices_json({m}, p));
  EXPECT_EQ(doc.at("version"), 1);
  const double entry = doc["matrices"][0]["entries"][0][0];
  // 2 / 1.2 = 1.6666...; fifteen significant digits.
  EXPECT_EQ(entry, 1.66666666666667);
  EXPECT_EQ(doc["matrices"][0]["kind"], "basic");
  EXPECT_EQ(doc["matrices"][0]["cycle"], "C1");
}

TEST(IndicesJson, InfinitiesAsStrings) {
  const rsp::PayoffParams p(0.9, 0.5);
  const auto doc = json::parse(rsp::indices_json(
      {{rsp::classify(cycle(CycleId::C2), p), rsp::IndexPath::Closed},
       {rsp::classify(cycle(CycleId::C3), p, rsp::IndexPath::Matrix), rsp::IndexPath::Matrix}}));
  EXPECT_EQ(doc.at("version"), 1);
  const auto& c2 = doc["results"][0];
  EXPECT_EQ(c2["cycle"], "C2");
  EXPECT_EQ(c2["classification"], "FAS");
  EXPECT_DOUBLE_EQ(c2["sigma"]["xi2"].get<double>(), 2.81);
  const auto& c3 = doc["results"][1];
  EXPECT_EQ(c3["path"], "matrix");
  EXPECT_EQ(c3["sigma"]["xi1"], "-inf");
}

TEST(IndicesJson, BoundaryCarriesReason) {
  const auto doc = json::parse(rsp::indices_json(
      {{rsp::classify(cycle(CycleId::C0), {0.1, -0.1}), rsp::IndexPath::Closed}}));
  EXPECT_EQ(doc["results"][0]["classification"], "Boundary");
  EXPECT_TRUE(doc["results"][0].contains("boundary"));
}

TEST(IndicesCsv, HeaderAndRows) {
  const auto csv = rsp::indices_csv({{rsp::classify(cycle(CycleId::C0), {-0.5, -0.25}), rsp::IndexPath::Closed}});
  EXPECT_EQ(csv.substr(0, csv.find('\n')).find("cycle"), 0u);
  EXPECT_NE(csv.find("EAS"), std::string::npos);
}

TEST(BasinJson, Fields) {
  rsp::BasinEstimate est;
  est.options.samples = 100;
  est.converged = 37;
  est.fraction = 0.37;
  const auto doc = json::parse(rsp::basin_json(est));
  EXPECT_EQ(doc.at("version"), 1);
  EXPECT_EQ(doc.at("cycle"), "C0");
  EXPECT_EQ(doc.at("seed"), 42);
  EXPECT_EQ(doc.at("converged"), 37);
  EXPECT_DOUBLE_EQ(doc.at("fraction").get<double>(), 0.37);
}

}  // namespace
