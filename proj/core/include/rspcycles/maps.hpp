#pragma once

#include <string>
#include <variant>
#include <vector>

#include "rspcycles/game.hpp"
#include "rspcycles/network.hpp"

namespace rsp {

/// Point of a cross section near a node, each coordinate in (0, 1).
///
/// Incoming sections carry (w, z1, z2), outgoing sections (v, z1, z2), where
/// w is the expanding, v the contracting and z1/z2 the transverse
/// contracting/expanding coordinates of the node's linearisation.
struct SectionPoint {
  enum class Kind { Incoming, Outgoing };

  SectionPoint(Kind kind, const Vec3& coords);
  static SectionPoint incoming(double w, double z1, double z2) {
    return {Kind::Incoming, Vec3(w, z1, z2)};
  }
  static SectionPoint outgoing(double v, double z1, double z2) {
    return {Kind::Outgoing, Vec3(v, z1, z2)};
  }

  Kind kind;
  Vec3 coords;
};

/// Componentwise logarithms of section coordinates, all strictly negative.
struct LogCoords {
  explicit LogCoords(const Vec3& eta);

  Vec3 eta;
};

LogCoords to_log(const SectionPoint& p);
SectionPoint from_log(const LogCoords& eta, SectionPoint::Kind kind);

/// Leading-order passage past a node:
/// (w, z1, z2) -> (w^{c/e}, z1 w^{c_t/e}, z2 w^{-e_t/e}).
/// Throws OutsideDomain unless 0 < z2 < w^{e_t/e}.
SectionPoint local_map(const LocalEigenData& eig, const SectionPoint& in);

/// The local map in log coordinates (a lower-triangular 3x3 matrix).
Mat3 local_log_matrix(const LocalEigenData& eig);

/// Permutation taking outgoing coordinates (v, z1, z2) at `from` to incoming
/// coordinates (w, z1, z2) at the next node of `cycle`, acting on column
/// vectors. Derived from which physical coordinate plays each role at the two
/// vertices joined by the connection.
Mat3 global_permutation(const Cycle& cycle, NodeId from);

SectionPoint global_map(const Cycle& cycle, NodeId from, const SectionPoint& out);

struct TransitionMatrix {
  enum class Kind { Basic, Composite };

  Mat3 m;
  CycleId cycle;
  NodeId node;
  Kind kind;
};

/// Basic transition matrix (local map at `node` followed by the global map to
/// the next node) in closed form. Throws NodeNotInCycle.
TransitionMatrix basic_transition_matrix(const Cycle& cycle, NodeId node,
                                         const PayoffParams& params);

/// The same matrix assembled as global_permutation * local_log_matrix from
/// the tabulated rates.
Mat3 assembled_basic_matrix(const Cycle& cycle, NodeId node, const PayoffParams& params);

/// Return map in log coordinates on the incoming section at `base`: the basic
/// matrices multiplied in visiting order, the one at `base` applied first.
TransitionMatrix cycle_transition_matrix(const Cycle& cycle, NodeId base,
                                         const PayoffParams& params);

/// [M_base, M_next M_base, ..., full composite].
std::vector<Mat3> partial_products(const Cycle& cycle, NodeId base, const PayoffParams& params);

struct DomainExit {
  std::size_t stage;  // index of the passage (0 = the base node)
  NodeId node;
  std::string condition;
};

using PoincareOutcome = std::variant<SectionPoint, DomainExit>;

/// First return to the incoming section at `base`, composed stage by stage
/// from local and global maps with the domain checked at every node.
PoincareOutcome poincare_map(const Cycle& cycle, NodeId base, const PayoffParams& params,
                             const SectionPoint& in);

/// The closed-form return maps of C0 at either node, with their two domain
/// inequalities. Throws NodeNotInCycle for xi2.
PoincareOutcome c0_return_map(NodeId base, const PayoffParams& params, const SectionPoint& in);

/// exp(M log(in)) without domain checks.
SectionPoint apply_log_linear(const Mat3& m, const SectionPoint& in, SectionPoint::Kind kind);

}  // namespace rsp
