#include "rspcycles/network.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "rspcycles/errors.hpp"

namespace rsp {

namespace {

int mod3(int v) { return ((v % 3) + 3) % 3; }

Strategy strategy_at(int i) { return static_cast<Strategy>(mod3(i)); }

// Offset y - x (mod 3) of the members of each node.
int node_offset(NodeId n) {
  switch (n) {
    case NodeId::Xi0:
      return 2;
    case NodeId::Xi1:
      return 1;
    case NodeId::Xi2:
      return 0;
  }
  return 0;
}

Connection make_connection(NodeId from, NodeId to, VertexPair a, VertexPair b) {
  using Slot = FacePattern::Slot;
  std::array<Slot, 6> p{};
  p.fill(Slot::Zero);
  if (a.y == b.y) {
    p[static_cast<std::size_t>(a.x)] = Slot::Free;
    p[static_cast<std::size_t>(b.x)] = Slot::Free;
    p[3 + static_cast<std::size_t>(a.y)] = Slot::One;
  } else {
    p[static_cast<std::size_t>(a.x)] = Slot::One;
    p[3 + static_cast<std::size_t>(a.y)] = Slot::Free;
    p[3 + static_cast<std::size_t>(b.y)] = Slot::Free;
  }
  std::array<Slot, 6> q = p;
  for (auto& s : q) {
    if (s == Slot::One) s = Slot::Free;
  }
  return {from, to, a, b, FacePattern(p), FacePattern(q)};
}

QuotientNetwork build_network() {
  using S = Strategy;
  using N = NodeId;
  QuotientNetwork net{
      {Node{N::Xi0, {}}, Node{N::Xi1, {}}, Node{N::Xi2, {}}},
      {make_connection(N::Xi0, N::Xi1, {S::Rock, S::Paper}, {S::Scissors, S::Paper}),
       make_connection(N::Xi1, N::Xi0, {S::Scissors, S::Paper}, {S::Scissors, S::Rock}),
       make_connection(N::Xi1, N::Xi2, {S::Rock, S::Scissors}, {S::Rock, S::Rock}),
       make_connection(N::Xi2, N::Xi1, {S::Rock, S::Rock}, {S::Paper, S::Rock}),
       make_connection(N::Xi0, N::Xi2, {S::Scissors, S::Rock}, {S::Rock, S::Rock}),
       make_connection(N::Xi2, N::Xi0, {S::Rock, S::Rock}, {S::Rock, S::Paper})},
      {}};
  for (auto& node : net.nodes) {
    for (int i = 0; i < 3; ++i) {
      node.members[static_cast<std::size_t>(i)] = {strategy_at(i),
                                                   strategy_at(i + node_offset(node.id))};
    }
  }
  auto cycle = [&net](CycleId id, std::vector<NodeId> nodes) {
    Cycle c{id, nodes, {}};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      c.connections.push_back(net.connection(nodes[i], nodes[(i + 1) % nodes.size()]));
    }
    return c;
  };
  net.cycles = {cycle(CycleId::C0, {N::Xi0, N::Xi1}), cycle(CycleId::C1, {N::Xi1, N::Xi2}),
                cycle(CycleId::C2, {N::Xi0, N::Xi2}),
                cycle(CycleId::C3, {N::Xi0, N::Xi1, N::Xi2}),
                cycle(CycleId::C4, {N::Xi0, N::Xi2, N::Xi1})};
  return net;
}

}  // namespace

std::string_view to_string(NodeId n) {
  switch (n) {
    case NodeId::Xi0:
      return "xi0";
    case NodeId::Xi1:
      return "xi1";
    case NodeId::Xi2:
      return "xi2";
  }
  return "?";
}

std::optional<NodeId> parse_node(std::string_view text) {
  for (NodeId n : kNodes) {
    if (text == to_string(n)) return n;
  }
  if (text.size() == 1 && text[0] >= '0' && text[0] <= '2') return static_cast<NodeId>(text[0] - '0');
  return std::nullopt;
}

NodeId third_node(NodeId a, NodeId b) {
  if (a == b) throw InvalidArgument("third_node needs two distinct nodes");
  return static_cast<NodeId>(3 - index(a) - index(b));
}

std::string to_string(const VertexPair& v) {
  return std::string{'(', strategy_letter(v.x), ',', strategy_letter(v.y), ')'};
}

GameState to_state(const VertexPair& v) { return GameState::pure(v.x, v.y); }

std::optional<VertexPair> as_vertex(const GameState& s) {
  auto pure_index = [](const SimplexPoint& p) -> std::optional<Strategy> {
    for (Strategy st : kStrategies) {
      if (std::abs(p[st] - 1.0) <= SimplexPoint::kTolerance) return st;
    }
    return std::nullopt;
  };
  const auto x = pure_index(s.x());
  const auto y = pure_index(s.y());
  if (!x || !y) return std::nullopt;
  return VertexPair{*x, *y};
}

VertexPair cyclic_shift(const VertexPair& v) { return {cyclic_shift(v.x), cyclic_shift(v.y)}; }

NodeId node_of(const VertexPair& v) {
  switch (mod3(static_cast<int>(v.y) - static_cast<int>(v.x))) {
    case 2:
      return NodeId::Xi0;
    case 1:
      return NodeId::Xi1;
    default:
      return NodeId::Xi2;
  }
}

bool FacePattern::contains(const Vec6& point, double tol) const {
  for (int i = 0; i < 6; ++i) {
    const double v = point[i];
    switch (slots_[static_cast<std::size_t>(i)]) {
      case Slot::Zero:
        if (std::abs(v) > tol) return false;
        break;
      case Slot::One:
        if (std::abs(v - 1.0) > tol) return false;
        break;
      case Slot::Free:
        break;
    }
  }
  return true;
}

std::string FacePattern::to_string() const {
  std::string out = "(";
  for (int i = 0; i < 6; ++i) {
    if (i == 3) {
      out += ';';
    } else if (i > 0) {
      out += ',';
    }
    switch (slots_[static_cast<std::size_t>(i)]) {
      case Slot::Zero:
        out += '0';
        break;
      case Slot::One:
        out += '1';
        break;
      case Slot::Free:
        out += (i < 3 ? 'x' : 'y');
        out += static_cast<char>('1' + i % 3);
        break;
    }
  }
  return out + ")";
}

std::string_view to_string(CycleId c) {
  static constexpr std::array<std::string_view, 5> names = {"C0", "C1", "C2", "C3", "C4"};
  return names[static_cast<std::size_t>(c)];
}

std::optional<CycleId> parse_cycle(std::string_view text) {
  for (CycleId c : kCycles) {
    if (text == to_string(c)) return c;
  }
  return std::nullopt;
}

bool Cycle::contains(NodeId n) const { return std::find(nodes.begin(), nodes.end(), n) != nodes.end(); }

std::size_t Cycle::position(NodeId n) const {
  const auto it = std::find(nodes.begin(), nodes.end(), n);
  if (it == nodes.end()) {
    throw NodeNotInCycle(std::string(rsp::to_string(n)) + " is not a node of " +
                         std::string(rsp::to_string(id)));
  }
  return static_cast<std::size_t>(it - nodes.begin());
}

NodeId Cycle::next(NodeId n) const { return nodes[(position(n) + 1) % nodes.size()]; }

NodeId Cycle::previous(NodeId n) const {
  return nodes[(position(n) + nodes.size() - 1) % nodes.size()];
}

const Connection& QuotientNetwork::connection(NodeId from, NodeId to) const {
  for (const auto& c : connections) {
    if (c.from == from && c.to == to) return c;
  }
  throw InvalidArgument("no connection from a node to itself");
}

const QuotientNetwork& quotient_network() {
  static const QuotientNetwork net = build_network();
  return net;
}

const std::array<NetworkEdge, 18>& network_edges() {
  static const std::array<NetworkEdge, 18> edges = [] {
    std::array<NetworkEdge, 18> out{};
    std::size_t k = 0;
    for (const auto& c : quotient_network().connections) {
      VertexPair a = c.rep_from;
      VertexPair b = c.rep_to;
      for (int g = 0; g < 3; ++g) {
        out[k++] = {a, b};
        a = cyclic_shift(a);
        b = cyclic_shift(b);
      }
    }
    return out;
  }();
  return edges;
}

double expanding_rate(NodeId j, NodeId k, const PayoffParams& params) {
  const double ex = params.eps_x();
  const double ey = params.eps_y();
  if (j == k) throw InvalidContext("expanding rate needs two distinct nodes");
  switch (j) {
    case NodeId::Xi0:
      return k == NodeId::Xi1 ? 1.0 : (1.0 + ex) / 2.0;
    case NodeId::Xi1:
      return k == NodeId::Xi2 ? (1.0 + ey) / 2.0 : 1.0;
    case NodeId::Xi2:
      return k == NodeId::Xi0 ? (1.0 - ey) / 2.0 : (1.0 - ex) / 2.0;
  }
  return 0.0;
}

double contracting_rate(NodeId j, NodeId i, const PayoffParams& params) {
  const double ex = params.eps_x();
  const double ey = params.eps_y();
  if (j == i) throw InvalidContext("contracting rate needs two distinct nodes");
  switch (j) {
    case NodeId::Xi0:
      return i == NodeId::Xi1 ? 1.0 : (1.0 - ey) / 2.0;
    case NodeId::Xi1:
      return i == NodeId::Xi2 ? (1.0 - ex) / 2.0 : 1.0;
    case NodeId::Xi2:
      return i == NodeId::Xi0 ? (1.0 + ex) / 2.0 : (1.0 + ey) / 2.0;
  }
  return 0.0;
}

double alternative_tie_contracting_rate(const PayoffParams& params) {
  return (1.0 - params.eps_x()) / 2.0;
}

LocalEigenData local_eigen(NodeId node, NodeId from, NodeId to, const PayoffParams& params) {
  if (from == node || to == node) {
    std::ostringstream msg;
    msg << "context (" << to_string(from) << ", " << to_string(to) << ") is invalid at "
        << to_string(node);
    throw InvalidContext(msg.str());
  }
  return {node,
          from,
          to,
          -contracting_rate(node, from, params),
          expanding_rate(node, to, params),
          -contracting_rate(node, third_node(node, from), params),
          expanding_rate(node, third_node(node, to), params)};
}

std::array<double, 4> node_spectrum(NodeId j, const PayoffParams& params) {
  std::array<double, 4> out{};
  std::size_t k = 0;
  for (NodeId other : kNodes) {
    if (other == j) continue;
    out[k++] = expanding_rate(j, other, params);
    out[k++] = -contracting_rate(j, other, params);
  }
  std::sort(out.begin(), out.end());
  return out;
}

CoordinateRoles coordinate_roles(const VertexPair& vertex, NodeId from, NodeId to) {
  const NodeId here = node_of(vertex);
  if (from == here || to == here) {
    throw InvalidContext("context (" + std::string(to_string(from)) + ", " +
                         std::string(to_string(to)) + ") is invalid at " + to_string(vertex));
  }
  // Signs of the transverse eigenvalues do not depend on the tie payoffs.
  const PayoffMatrixPair m = payoff_matrices(PayoffParams(0.0, 0.0));
  CoordinateRoles roles{-1, -1, -1, -1};
  const int vx = static_cast<int>(vertex.x);
  const int vy = static_cast<int>(vertex.y);
  for (int c = 0; c < 6; ++c) {
    const bool is_x = c < 3;
    const int s = c % 3;
    if (s == (is_x ? vx : vy)) continue;
    const double eig = is_x ? m.a(s, vy) - m.a(vx, vy) : m.b(s, vx) - m.b(vy, vx);
    const VertexPair neighbour = is_x ? VertexPair{strategy_at(s), vertex.y}
                                      : VertexPair{vertex.x, strategy_at(s)};
    const NodeId other = node_of(neighbour);
    if (eig < 0.0) {
      (other == from ? roles.contracting : roles.transverse_contracting) = c;
    } else {
      (other == to ? roles.expanding : roles.transverse_expanding) = c;
    }
  }
  return roles;
}

Mat6 numerical_jacobian(const Vec6& point, const PayoffParams& params, double step) {
  const ReplicatorField field(params);
  Mat6 j;
  for (int c = 0; c < 6; ++c) {
    Vec6 plus = point;
    Vec6 minus = point;
    plus[c] += step;
    minus[c] -= step;
    j.col(c) = (field(plus) - field(minus)) / (2.0 * step);
  }
  return j;
}

JacobianSpectrum jacobian_eigen_at_vertex(const GameState& state, const PayoffParams& params) {
  const bool is_nash = (state.vector() - nash_point().vector()).cwiseAbs().maxCoeff() <=
                       SimplexPoint::kTolerance;
  if (!as_vertex(state) && !is_nash) {
    throw NotAVertex("Jacobian spectrum is only defined at pure states and the Nash point");
  }
  const Mat6 jac = numerical_jacobian(state.vector(), params);

  // Orthonormal basis of the tangent space {sum x = 0, sum y = 0}.
  Eigen::Matrix<double, 6, 4> basis = Eigen::Matrix<double, 6, 4>::Zero();
  const double r2 = 1.0 / std::sqrt(2.0);
  const double r6 = 1.0 / std::sqrt(6.0);
  for (int b = 0; b < 2; ++b) {
    const int o = 3 * b;
    basis(o + 0, 2 * b) = r2;
    basis(o + 1, 2 * b) = -r2;
    basis(o + 0, 2 * b + 1) = r6;
    basis(o + 1, 2 * b + 1) = r6;
    basis(o + 2, 2 * b + 1) = -2.0 * r6;
  }
  const Eigen::Matrix4d restricted = basis.transpose() * jac * basis;

  auto by_parts = [](const std::complex<double>& a, const std::complex<double>& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  };
  JacobianSpectrum out;
  const Eigen::EigenSolver<Mat6> full(jac, false);
  for (int i = 0; i < 6; ++i) out.full[static_cast<std::size_t>(i)] = full.eigenvalues()[i];
  const Eigen::EigenSolver<Eigen::Matrix4d> tangent(restricted, false);
  for (int i = 0; i < 4; ++i) out.tangent[static_cast<std::size_t>(i)] = tangent.eigenvalues()[i];
  std::sort(out.full.begin(), out.full.end(), by_parts);
  std::sort(out.tangent.begin(), out.tangent.end(), by_parts);
  return out;
}

}  // namespace rsp
