#include "rspcycles/maps.hpp"

#include <cmath>
#include <sstream>

#include "rspcycles/errors.hpp"

namespace rsp {

namespace {

Mat3 rows(double a00, double a01, double a02, double a10, double a11, double a12, double a20,
          double a21, double a22) {
  Mat3 m;
  m << a00, a01, a02, a10, a11, a12, a20, a21, a22;
  return m;
}

// Closed forms of the basic matrices, in the accents of each cycle.
Mat3 c0_basic(NodeId node, double ex, double ey) {
  if (node == NodeId::Xi1) std::swap(ex, ey);
  return rows((1 - ey) / 2, 1, 0, -(1 + ex) / 2, 0, 1, 1, 0, 0);
}

Mat3 c1_basic(NodeId node, double ex, double ey) {
  if (node == NodeId::Xi1) {
    return rows(2 / (1 + ey), 1, 0, (1 - ex) / (1 + ey), 0, 0, -2 / (1 + ey), 0, 1);
  }
  return rows(-(1 - ey) / (1 - ex), 0, 1, (1 + ex) / (1 - ex), 1, 0, (1 + ey) / (1 - ex), 0, 0);
}

Mat3 c3_basic(NodeId node, double ex, double ey) {
  switch (node) {
    case NodeId::Xi0:
      return rows(1, 1, 0, -(1 + ex) / 2, 0, 1, (1 - ey) / 2, 0, 0);
    case NodeId::Xi1:
      return rows(-2 / (1 + ey), 0, 1, (1 - ex) / (1 + ey), 1, 0, 2 / (1 + ey), 0, 0);
    case NodeId::Xi2:
      return rows((1 + ex) / (1 - ey), 1, 0, (1 + ey) / (1 - ey), 0, 0, -(1 - ex) / (1 - ey), 0,
                  1);
  }
  return Mat3::Zero();
}

Mat3 c4_basic(NodeId node, double ex, double ey) {
  switch (node) {
    case NodeId::Xi0:
      return rows(-2 / (1 + ex), 0, 1, (1 - ey) / (1 + ex), 1, 0, 2 / (1 + ex), 0, 0);
    case NodeId::Xi2:
      return rows((1 + ey) / (1 - ex), 1, 0, (1 + ex) / (1 - ex), 0, 0, -(1 - ey) / (1 - ex), 0,
                  1);
    case NodeId::Xi1:
      return rows(1, 1, 0, -(1 + ey) / 2, 0, 1, (1 - ex) / 2, 0, 0);
  }
  return Mat3::Zero();
}

// Moves from a vertex along the coordinate that becomes one.
VertexPair follow(const VertexPair& v, int coordinate) {
  if (coordinate < 3) return {static_cast<Strategy>(coordinate), v.y};
  return {v.x, static_cast<Strategy>(coordinate - 3)};
}

std::string format_exit(const char* text, NodeId node) {
  std::ostringstream msg;
  msg << text << " at " << to_string(node);
  return msg.str();
}

}  // namespace

SectionPoint::SectionPoint(Kind k, const Vec3& c) : kind(k), coords(c) {
  for (int i = 0; i < 3; ++i) {
    if (!(c[i] > 0.0 && c[i] < 1.0)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "section coordinate " << i << " = " << c[i] << " outside (0, 1)";
      throw OutsideDomain(msg.str());
    }
  }
}

LogCoords::LogCoords(const Vec3& e) : eta(e) {
  for (int i = 0; i < 3; ++i) {
    if (!(e[i] < 0.0) || std::isnan(e[i])) {
      throw OutsideDomain("log coordinates must be strictly negative");
    }
  }
}

LogCoords to_log(const SectionPoint& p) { return LogCoords(p.coords.array().log().matrix()); }

SectionPoint from_log(const LogCoords& eta, SectionPoint::Kind kind) {
  return {kind, eta.eta.array().exp().matrix()};
}

SectionPoint local_map(const LocalEigenData& eig, const SectionPoint& in) {
  const double w = in.coords[0];
  const double z1 = in.coords[1];
  const double z2 = in.coords[2];
  const double e = eig.expanding;
  if (!(z2 < std::pow(w, eig.transverse_expanding / e))) {
    throw OutsideDomain(format_exit("z2 < w^(e_t/e) fails", eig.node));
  }
  return SectionPoint::outgoing(std::pow(w, -eig.contracting / e),
                                z1 * std::pow(w, -eig.transverse_contracting / e),
                                z2 * std::pow(w, -eig.transverse_expanding / e));
}

Mat3 local_log_matrix(const LocalEigenData& eig) {
  const double e = eig.expanding;
  return rows(-eig.contracting / e, 0, 0, -eig.transverse_contracting / e, 1, 0,
              -eig.transverse_expanding / e, 0, 1);
}

Mat3 global_permutation(const Cycle& cycle, NodeId from) {
  const NodeId to = cycle.next(from);
  const VertexPair here = quotient_network().node(from).members[0];
  const CoordinateRoles r = coordinate_roles(here, cycle.previous(from), to);
  const VertexPair there = follow(here, r.expanding);
  const CoordinateRoles s = coordinate_roles(there, from, cycle.next(to));

  const std::array<int, 3> outgoing = {r.contracting, r.transverse_contracting,
                                       r.transverse_expanding};
  const std::array<int, 3> incoming = {s.expanding, s.transverse_contracting,
                                       s.transverse_expanding};
  Mat3 p = Mat3::Zero();
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      if (incoming[a] == outgoing[b]) p(static_cast<int>(a), static_cast<int>(b)) = 1.0;
    }
  }
  return p;
}

SectionPoint global_map(const Cycle& cycle, NodeId from, const SectionPoint& out) {
  return {SectionPoint::Kind::Incoming, global_permutation(cycle, from) * out.coords};
}

TransitionMatrix basic_transition_matrix(const Cycle& cycle, NodeId node,
                                         const PayoffParams& params) {
  cycle.position(node);
  const double ex = params.eps_x();
  const double ey = params.eps_y();
  Mat3 m;
  switch (cycle.id) {
    case CycleId::C0:
      m = c0_basic(node, ex, ey);
      break;
    case CycleId::C1:
      m = c1_basic(node, ex, ey);
      break;
    case CycleId::C2:
      // Mirror of C1 under exchanging the players, which swaps xi0 and xi1.
      m = c1_basic(node == NodeId::Xi0 ? NodeId::Xi1 : node, ey, ex);
      break;
    case CycleId::C3:
      m = c3_basic(node, ex, ey);
      break;
    case CycleId::C4:
      m = c4_basic(node, ex, ey);
      break;
  }
  return {m, cycle.id, node, TransitionMatrix::Kind::Basic};
}

Mat3 assembled_basic_matrix(const Cycle& cycle, NodeId node, const PayoffParams& params) {
  const LocalEigenData eig = local_eigen(node, cycle.previous(node), cycle.next(node), params);
  return global_permutation(cycle, node) * local_log_matrix(eig);
}

std::vector<Mat3> partial_products(const Cycle& cycle, NodeId base, const PayoffParams& params) {
  std::vector<Mat3> out;
  Mat3 acc = Mat3::Identity();
  NodeId node = base;
  for (std::size_t i = 0; i < cycle.nodes.size(); ++i) {
    acc = basic_transition_matrix(cycle, node, params).m * acc;
    out.push_back(acc);
    node = cycle.next(node);
  }
  return out;
}

TransitionMatrix cycle_transition_matrix(const Cycle& cycle, NodeId base,
                                         const PayoffParams& params) {
  return {partial_products(cycle, base, params).back(), cycle.id, base,
          TransitionMatrix::Kind::Composite};
}

PoincareOutcome poincare_map(const Cycle& cycle, NodeId base, const PayoffParams& params,
                             const SectionPoint& in) {
  if (in.kind != SectionPoint::Kind::Incoming) {
    throw InvalidArgument("the return map acts on incoming section points");
  }
  SectionPoint p = in;
  NodeId node = base;
  for (std::size_t stage = 0; stage < cycle.nodes.size(); ++stage) {
    const LocalEigenData eig = local_eigen(node, cycle.previous(node), cycle.next(node), params);
    const double bound = std::pow(p.coords[0], eig.transverse_expanding / eig.expanding);
    if (!(p.coords[2] < bound)) {
      return DomainExit{stage, node, format_exit("z2 < w^(e_t/e) fails", node)};
    }
    p = global_map(cycle, node, local_map(eig, p));
    node = cycle.next(node);
  }
  return p;
}

PoincareOutcome c0_return_map(NodeId base, const PayoffParams& params, const SectionPoint& in) {
  quotient_network().cycle(CycleId::C0).position(base);
  double ex = params.eps_x();
  double ey = params.eps_y();
  if (base == NodeId::Xi1) std::swap(ex, ey);
  const NodeId other = base == NodeId::Xi0 ? NodeId::Xi1 : NodeId::Xi0;
  const double w = in.coords[0];
  const double z1 = in.coords[1];
  const double z2 = in.coords[2];
  if (!(z2 < std::pow(w, (1 + ex) / 2))) {
    return DomainExit{0, base, format_exit("z2 < w^((1+eps)/2) fails", base)};
  }
  if (!(z1 > std::pow(w, (3 + ey * ey) / (2 * (1 + ey))))) {
    return DomainExit{1, other, format_exit("z1 > w^((3+eps^2)/(2(1+eps))) fails", other)};
  }
  return SectionPoint::incoming(
      z2 * std::pow(z1, (1 - ex) / 2) * std::pow(w, (-1 - 3 * ex - ey + ex * ey) / 4),
      std::pow(z1, -(1 + ey) / 2) * std::pow(w, (3 + ey * ey) / 4),
      z1 * std::pow(w, (1 - ey) / 2));
}

SectionPoint apply_log_linear(const Mat3& m, const SectionPoint& in, SectionPoint::Kind kind) {
  const Vec3 eta = in.coords.array().log().matrix();
  return {kind, (m * eta).array().exp().matrix()};
}

}  // namespace rsp
