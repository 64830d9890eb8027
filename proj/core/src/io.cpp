#include "rspcycles/io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>  // nlohmann::json, vendored

namespace rsp {

namespace {

using nlohmann::ordered_json;

double round15(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 15);
  double out = v;
  std::from_chars(buf, res.ptr, out);
  return out;
}

ordered_json index_value(IndexValue v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string_view path_name(IndexPath p) { return p == IndexPath::Closed ? "closed" : "matrix"; }

ordered_json document() {
  ordered_json doc;
  doc["version"] = kJsonVersion;
  return doc;
}

}  // namespace

std::string network_json() {
  const auto& net = quotient_network();
  ordered_json doc = document();
  doc["nodes"] = ordered_json::array();
  for (const auto& n : net.nodes) {
    ordered_json members = ordered_json::array();
    for (const auto& m : n.members) members.push_back(to_string(m));
    doc["nodes"].push_back({{"id", to_string(n.id)}, {"members", members}});
  }
  doc["connections"] = ordered_json::array();
  for (const auto& c : net.connections) {
    doc["connections"].push_back({{"from", to_string(c.from)},
                                  {"to", to_string(c.to)},
                                  {"representative", {to_string(c.rep_from), to_string(c.rep_to)}},
                                  {"face_p", c.face_p.to_string()},
                                  {"space_q", c.space_q.to_string()}});
  }
  doc["cycles"] = ordered_json::array();
  for (const auto& c : net.cycles) {
    ordered_json nodes = ordered_json::array();
    for (NodeId n : c.nodes) nodes.push_back(to_string(n));
    doc["cycles"].push_back({{"id", to_string(c.id)}, {"nodes", nodes}});
  }
  return doc.dump(2) + "\n";
}

std::string matrices_json(const std::vector<TransitionMatrix>& matrices,
                          const PayoffParams& params) {
  ordered_json doc = document();
  doc["eps_x"] = params.eps_x();
  doc["eps_y"] = params.eps_y();
  doc["matrices"] = ordered_json::array();
  for (const auto& t : matrices) {
    ordered_json rows = ordered_json::array();
    for (int r = 0; r < 3; ++r) {
      rows.push_back({round15(t.m(r, 0)), round15(t.m(r, 1)), round15(t.m(r, 2))});
    }
    doc["matrices"].push_back(
        {{"cycle", to_string(t.cycle)},
         {"node", to_string(t.node)},
         {"kind", t.kind == TransitionMatrix::Kind::Basic ? "basic" : "composite"},
         {"entries", rows}});
  }
  return doc.dump(2) + "\n";
}

std::string indices_json(const std::vector<LabelledReport>& reports) {
  ordered_json doc = document();
  doc["results"] = ordered_json::array();
  for (const auto& [r, path] : reports) {
    ordered_json sigma = ordered_json::object();
    for (const auto& [node, value] : r.sigma) sigma[std::string(to_string(node))] = index_value(value);
    ordered_json entry = {{"cycle", to_string(r.cycle)},
                          {"eps_x", r.params.eps_x()},
                          {"eps_y", r.params.eps_y()},
                          {"path", path_name(path)},
                          {"sigma", sigma},
                          {"classification", to_string(r.classification)}};
    if (!r.boundary.empty()) entry["boundary"] = r.boundary;
    doc["results"].push_back(entry);
  }
  return doc.dump(2) + "\n";
}

std::string indices_csv(const std::vector<LabelledReport>& reports) {
  std::ostringstream out;
  out << "cycle,path,eps_x,eps_y,node,sigma,classification\n";
  for (const auto& [r, path] : reports) {
    const std::string head = std::string(to_string(r.cycle)) + ',' + std::string(path_name(path)) +
                             ',' + format_real(r.params.eps_x()) + ',' +
                             format_real(r.params.eps_y()) + ',';
    if (r.sigma.empty()) out << head << ",," << to_string(r.classification) << '\n';
    for (const auto& [node, value] : r.sigma) {
      out << head << to_string(node) << ','
          << (std::isinf(value) ? format_index(value) : format_real(value)) << ','
          << to_string(r.classification) << '\n';
    }
  }
  return out.str();
}

std::string basin_json(const BasinEstimate& est) {
  const auto& o = est.options;
  ordered_json doc = document();
  doc["cycle"] = to_string(o.cycle);
  doc["eps_x"] = o.params.eps_x();
  doc["eps_y"] = o.params.eps_y();
  doc["delta"] = o.delta;
  doc["samples"] = o.samples;
  doc["horizon"] = o.horizon;
  doc["dt"] = o.dt;
  doc["seed"] = o.seed;
  doc["converged"] = est.converged;
  doc["fraction"] = est.fraction;
  return doc.dump(2) + "\n";
}

}  // namespace rsp
