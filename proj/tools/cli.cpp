#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "rspcycles/errors.hpp"
#include "rspcycles/harness.hpp"
#include "rspcycles/io.hpp"
#include "rspcycles/maps.hpp"
#include "rspcycles/network.hpp"
#include "rspcycles/stability.hpp"

namespace rsp::cli {

namespace {

const std::vector<std::string> kCycleNames = {"C0", "C1", "C2", "C3", "C4"};

std::vector<CycleId> selected_cycles(const std::string& name) {
  if (name == "all") return {kCycles.begin(), kCycles.end()};
  return {*parse_cycle(name)};
}

// Writes to `path`, or to `out` when the path is empty or "-".
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open " + path + " for writing");
  file << text;
  if (!file.flush()) throw IoError("failed writing " + path);
}

Vec3 parse_triple(const std::string& text, const char* what) {
  std::vector<double> v;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidArgument(std::string(what) + ": cannot parse '" + item + "'");
    }
  }
  if (v.size() != 3) throw InvalidArgument(std::string(what) + " needs three comma-separated values");
  return {v[0], v[1], v[2]};
}

struct Params {
  double eps_x = 0.0;
  double eps_y = 0.0;

  void add_to(CLI::App& app) {
    app.add_option("--eps-x", eps_x, "Tie payoff of player X, in (-1, 1)")->required();
    app.add_option("--eps-y", eps_y, "Tie payoff of player Y, in (-1, 1)")->required();
  }
  PayoffParams get() const { return {eps_x, eps_y}; }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heteroclinic cycles of the two-player parametrised Rock-Scissors-Paper game"};
  app.require_subcommand(1);

  // network
  auto* network = app.add_subcommand("network", "Dump nodes, connections and cycles as JSON");
  std::string network_out;
  network->add_option("--out", network_out, "Output file (default stdout)");

  // maps
  auto* maps = app.add_subcommand("maps", "Print basic and composite transition matrices as JSON");
  Params maps_params;
  maps_params.add_to(*maps);
  std::string maps_cycle = "all";
  std::string maps_node = "all";
  std::string maps_kind = "both";
  std::string maps_out;
  maps->add_option("--cycle", maps_cycle, "C0..C4 or all")
      ->check(CLI::IsMember([] {
        auto v = kCycleNames;
        v.push_back("all");
        return v;
      }()));
  maps->add_option("--node", maps_node, "xi0, xi1, xi2 or all")
      ->check(CLI::IsMember({"xi0", "xi1", "xi2", "all"}));
  maps->add_option("--kind", maps_kind, "basic, composite or both")
      ->check(CLI::IsMember({"basic", "composite", "both"}));
  maps->add_option("--out", maps_out, "Output file (default stdout)");

  // indices
  auto* indices = app.add_subcommand("indices", "Stability indices and classification");
  Params idx_params;
  idx_params.add_to(*indices);
  std::string idx_cycle = "all";
  std::string idx_path = "closed";
  std::string idx_format = "json";
  std::string idx_out;
  indices->add_option("--cycle", idx_cycle, "C0..C4 or all")
      ->check(CLI::IsMember([] {
        auto v = kCycleNames;
        v.push_back("all");
        return v;
      }()));
  indices->add_option("--path", idx_path, "closed, matrix or both")
      ->check(CLI::IsMember({"closed", "matrix", "both"}));
  indices->add_option("--format", idx_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  indices->add_option("--out", idx_out, "Output file (default stdout)");

  // regions
  auto* regions = app.add_subcommand("regions", "Classify all cycles on a parameter grid (CSV)");
  int resolution = 201;
  std::string regions_path = "closed";
  std::string regions_out;
  regions->add_option("--resolution", resolution, "Cells per axis (at least 11)");
  regions->add_option("--path", regions_path, "closed or matrix")
      ->check(CLI::IsMember({"closed", "matrix"}));
  regions->add_option("--out", regions_out, "Output file (default stdout)");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Integrate one trajectory and export CSV");
  Params sim_params;
  sim_params.add_to(*simulate);
  std::string sim_x;
  std::string sim_y;
  double t_max = 100.0;
  double dt = 1e-3;
  std::size_t stride = 1;
  std::string traj_out;
  std::string itin_out;
  simulate->add_option("--x", sim_x, "Initial strategy of X as p1,p2,p3")->required();
  simulate->add_option("--y", sim_y, "Initial strategy of Y as p1,p2,p3")->required();
  simulate->add_option("--t-max", t_max, "Integration time");
  simulate->add_option("--dt", dt, "Time step");
  simulate->add_option("--stride", stride, "Record every n-th step");
  simulate->add_option("--out", traj_out, "Trajectory CSV")->required();
  simulate->add_option("--itinerary-out", itin_out,
                       "Itinerary CSV (default: trajectory path with _itinerary suffix)");

  // basin
  auto* basin = app.add_subcommand("basin", "Monte Carlo estimate of the local basin fraction");
  Params basin_params;
  basin_params.add_to(*basin);
  BasinOptions basin_opts;
  std::string basin_cycle = "C0";
  std::string basin_out;
  basin->add_option("--cycle", basin_cycle, "C0..C4")->check(CLI::IsMember(kCycleNames));
  basin->add_option("--delta", basin_opts.delta, "Seeding distance, in (0, 0.2)");
  basin->add_option("--samples", basin_opts.samples, "Number of samples (at least 100)");
  basin->add_option("--horizon", basin_opts.horizon, "Integration horizon per sample");
  basin->add_option("--seed", basin_opts.seed, "64-bit RNG seed");
  basin->add_option("--dt", basin_opts.dt, "Time step");
  basin->add_option("--threads", basin_opts.threads, "Worker threads (0 = all cores)");
  basin->add_option("--out", basin_out, "Output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*network) {
      emit(network_out, network_json(), out);
    } else if (*maps) {
      const PayoffParams params = maps_params.get();
      const auto& net = quotient_network();
      std::vector<TransitionMatrix> mats;
      for (CycleId id : selected_cycles(maps_cycle)) {
        const Cycle& c = net.cycle(id);
        for (NodeId n : c.nodes) {
          if (maps_node != "all" && to_string(n) != maps_node) continue;
          if (maps_kind != "composite") mats.push_back(basic_transition_matrix(c, n, params));
          if (maps_kind != "basic") mats.push_back(cycle_transition_matrix(c, n, params));
        }
      }
      if (mats.empty()) throw InvalidArgument("node " + maps_node + " is not on the selected cycle");
      emit(maps_out, matrices_json(mats, params), out);
    } else if (*indices) {
      const PayoffParams params = idx_params.get();
      std::vector<LabelledReport> reports;
      for (CycleId id : selected_cycles(idx_cycle)) {
        const Cycle& c = quotient_network().cycle(id);
        if (idx_path != "matrix") reports.push_back({classify(c, params, IndexPath::Closed), IndexPath::Closed});
        if (idx_path != "closed") reports.push_back({classify(c, params, IndexPath::Matrix), IndexPath::Matrix});
      }
      emit(idx_out, idx_format == "json" ? indices_json(reports) : indices_csv(reports), out);
    } else if (*regions) {
      const RegionGrid grid =
          run_region_sweep(resolution, regions_path == "closed" ? IndexPath::Closed : IndexPath::Matrix);
      std::ostringstream csv;
      write_region_csv(grid, csv);
      emit(regions_out, csv.str(), out);
    } else if (*simulate) {
      const GameState initial{SimplexPoint(parse_triple(sim_x, "--x")),
                              SimplexPoint(parse_triple(sim_y, "--y"))};
      if (itin_out.empty()) {
        const std::filesystem::path p(traj_out);
        itin_out = (p.parent_path() / (p.stem().string() + "_itinerary" + p.extension().string())).string();
      }
      simulate_to_files(initial, sim_params.get(), t_max, dt, stride, traj_out, itin_out);
    } else if (*basin) {
      basin_opts.cycle = *parse_cycle(basin_cycle);
      basin_opts.params = basin_params.get();
      emit(basin_out, basin_json(estimate_basin_fraction(basin_opts)), out);
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace rsp::cli
