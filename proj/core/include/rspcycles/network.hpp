#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rspcycles/game.hpp"

namespace rsp {

/// Relative equilibria: X loses at Xi0, wins at Xi1, ties at Xi2.
enum class NodeId : int { Xi0 = 0, Xi1 = 1, Xi2 = 2 };

inline constexpr std::array<NodeId, 3> kNodes = {NodeId::Xi0, NodeId::Xi1, NodeId::Xi2};

std::string_view to_string(NodeId n);
std::optional<NodeId> parse_node(std::string_view text);
inline int index(NodeId n) { return static_cast<int>(n); }

/// The node that is neither a nor b (a != b).
NodeId third_node(NodeId a, NodeId b);

/// A pure-strategy state (vertex of the product of simplices).
struct VertexPair {
  Strategy x;
  Strategy y;

  friend bool operator==(const VertexPair&, const VertexPair&) = default;
};

std::string to_string(const VertexPair& v);
GameState to_state(const VertexPair& v);
std::optional<VertexPair> as_vertex(const GameState& s);
VertexPair cyclic_shift(const VertexPair& v);
NodeId node_of(const VertexPair& v);

/// Coordinate-wise description of a face or subspace of R^6.
class FacePattern {
 public:
  enum class Slot { Free, Zero, One };

  explicit FacePattern(const std::array<Slot, 6>& slots) : slots_(slots) {}

  const std::array<Slot, 6>& slots() const noexcept { return slots_; }
  bool contains(const Vec6& point, double tol = 0.0) const;
  /// Rendered in the "(x1,x2,0;0,0,y3)" notation.
  std::string to_string() const;

  friend bool operator==(const FacePattern&, const FacePattern&) = default;

 private:
  std::array<Slot, 6> slots_;
};

struct Connection {
  NodeId from;
  NodeId to;
  VertexPair rep_from;
  VertexPair rep_to;
  FacePattern face_p;   // two-dimensional face carrying the representative
  FacePattern space_q;  // three-dimensional invariant vector subspace containing it
};

enum class CycleId : int { C0 = 0, C1, C2, C3, C4 };

inline constexpr std::array<CycleId, 5> kCycles = {CycleId::C0, CycleId::C1, CycleId::C2,
                                                   CycleId::C3, CycleId::C4};

std::string_view to_string(CycleId c);
std::optional<CycleId> parse_cycle(std::string_view text);

struct Cycle {
  CycleId id;
  std::vector<NodeId> nodes;            // visiting order; closes back to nodes.front()
  std::vector<Connection> connections;  // connections[i] leaves nodes[i]

  bool contains(NodeId n) const;
  /// Position of n in the visiting order; throws NodeNotInCycle.
  std::size_t position(NodeId n) const;
  NodeId next(NodeId n) const;
  NodeId previous(NodeId n) const;
};

struct Node {
  NodeId id;
  std::array<VertexPair, 3> members;  // group orbit, ordered by X strategy R, S, P
};

struct QuotientNetwork {
  std::array<Node, 3> nodes;
  std::array<Connection, 6> connections;
  std::array<Cycle, 5> cycles;

  const Node& node(NodeId id) const { return nodes[static_cast<std::size_t>(id)]; }
  const Cycle& cycle(CycleId id) const { return cycles[static_cast<std::size_t>(id)]; }
  const Connection& connection(NodeId from, NodeId to) const;
};

/// The hard-coded network: 3 nodes, 6 connections, 5 cycles.
const QuotientNetwork& quotient_network();

/// One of the 18 edges of the product of simplices; every edge lies in the
/// group orbit of a representative connection.
struct NetworkEdge {
  VertexPair from;
  VertexPair to;
};

const std::array<NetworkEdge, 18>& network_edges();

// Linearisation at the relative equilibria.
//
// Rates are quoted in the time scale of the local-map exponents, which is
// half the time scale of the replicator ODE: a Jacobian eigenvalue of the ODE
// equals kLinearisationTimeScale times the corresponding signed rate below.
inline constexpr double kLinearisationTimeScale = 2.0;

/// e_jk > 0: expanding rate at node j towards node k.
double expanding_rate(NodeId j, NodeId k, const PayoffParams& params);

/// c_ji > 0: contracting rate at node j along the connection arriving from i.
double contracting_rate(NodeId j, NodeId i, const PayoffParams& params);

/// (1 - eps_x)/2: a value sometimes quoted for c_21. It is not a tangent
/// eigenvalue of the linearisation (c_21 = (1 + eps_y)/2 is); kept so the
/// Jacobian calibration can show the mismatch.
double alternative_tie_contracting_rate(const PayoffParams& params);

/// Eigenvalues at node j seen from the connection sequence [from -> j -> to].
struct LocalEigenData {
  NodeId node;
  NodeId from;
  NodeId to;
  double contracting;             // -c_{j,from}
  double expanding;               // e_{j,to}
  double transverse_contracting;  // -c_{j,l}, l the node other than `from`
  double transverse_expanding;    // e_{j,m}, m the node other than `to`
};

/// Throws InvalidContext when from or to equals node.
LocalEigenData local_eigen(NodeId node, NodeId from, NodeId to, const PayoffParams& params);

/// The four tangent rates at node j as signed values (two positive, two
/// negative), sorted ascending.
std::array<double, 4> node_spectrum(NodeId j, const PayoffParams& params);

/// Which coordinate of R^6 (0..5 for x1..x3, y1..y3) plays each role at a
/// vertex for the passage [from -> node_of(vertex) -> to].
struct CoordinateRoles {
  int contracting;             // v
  int expanding;               // w
  int transverse_contracting;  // z1
  int transverse_expanding;    // z2
};

CoordinateRoles coordinate_roles(const VertexPair& vertex, NodeId from, NodeId to);

/// Central-difference Jacobian of the replicator field at an arbitrary point.
Mat6 numerical_jacobian(const Vec6& point, const PayoffParams& params, double step = 1e-6);

struct JacobianSpectrum {
  std::array<std::complex<double>, 6> full;     // all eigenvalues of the 6x6 Jacobian
  std::array<std::complex<double>, 4> tangent;  // restricted to {sum x = 0, sum y = 0}
};

/// Spectrum of the finite-difference Jacobian at one of the nine vertices or
/// at the Nash point. Throws NotAVertex otherwise. Eigenvalues are sorted by
/// (real, imag).
JacobianSpectrum jacobian_eigen_at_vertex(const GameState& state, const PayoffParams& params);

}  // namespace rsp
