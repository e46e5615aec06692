#include "z2lgt/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "z2lgt/observables.hpp"
#include "z2lgt/scan.hpp"
#include "z2lgt/stringmodel.hpp"

namespace z2lgt {

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kSolverFailure = 2;

std::string read_all(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig load_config(const std::string& path, std::istream& in) {
  if (path.empty() || path == "-") return parse_config_text(read_all(in));
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config_text(read_all(f));
}

/// Writes to `path`, or to `fallback` when the path is empty or "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ConfigError("cannot open output file '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

const Couplings& require_couplings(const RunConfig& cfg) {
  if (!cfg.couplings) throw ConfigError("config: missing required key couplings");
  return *cfg.couplings;
}

LatticeGeometry checked_geometry(const RunConfig& cfg) {
  try {
    return cfg.geometry.build();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("geometry: ") + e.what());
  }
}

int run_describe(const RunConfig& cfg, std::ostream& out) {
  const LatticeGeometry g = checked_geometry(cfg);
  nlohmann::json j = g.to_json();
  if (cfg.charges) {
    const ChargeConfig q = cfg.charge_config(g);
    j["charges"] = q.values();
    const auto check = validate_sector(g, q);
    j["sector_ok"] = check.ok;
    if (!check.ok) j["sector_violation"] = check.violation;
  }
  out << j.dump(2) << '\n';
  return kOk;
}

int run_ground_state(const RunConfig& cfg, std::ostream& out, const std::string& field_map,
                     std::ostream* log) {
  const LatticeGeometry g = checked_geometry(cfg);
  if (g.num_links() > HamiltonianOperator::kMaxFullBasisLinks) {
    throw ConfigError("geometry: too many links for exact diagonalization");
  }
  const ChargeConfig q = cfg.charge_config(g);
  if (auto check = validate_sector(g, q); !check) throw ConfigError("charges: " + check.violation);
  const Couplings& c = require_couplings(cfg);
  SolverOptions opt = cfg.solver;
  opt.log = log;
  if (log) *log << "iteration,ritz_value,residual\n";

  HamiltonianOperator h = [&] {
    try {
      return HamiltonianOperator(g, c, q);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("couplings: ") + e.what());
    }
  }();
  const auto gs = solve_ground_state(h, opt);
  std::optional<double> vac;
  bool ok = gs.converged;
  if (cfg.charges) {
    const auto v = solve_ground_state(HamiltonianOperator(g, c, vacuum_charges(g)), cfg.solver);
    vac = v.energy;
    ok = ok && v.converged;
  }
  const ObservableReport report = make_report(gs, h, vac);
  nlohmann::json j = report.to_json();
  j["iterations"] = gs.iterations;
  if (cfg.levels > 1) {
    const auto spec = low_spectrum(h, std::min<Eigen::Index>(cfg.levels, h.dimension()), cfg.solver);
    j["levels"] = std::vector<double>(spec.energies.data(), spec.energies.data() + spec.energies.size());
    ok = ok && spec.converged;
  }
  out << std::setprecision(15) << j.dump(2) << '\n';
  if (!field_map.empty()) {
    std::ofstream f(field_map);
    if (!f) throw ConfigError("cannot open field map file '" + field_map + "'");
    write_field_map_csv(f, g, report.electric_field);
  }
  return ok ? kOk : kSolverFailure;
}

int run_scan_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ScanSpec spec = cfg.scan_spec();
  validate_scan(spec);
  const auto rows = run_scan(spec);
  write_scan_csv(out, spec.param, rows);
  bool ok = true;
  for (const auto& r : rows) {
    if (!r.converged) {
      ok = false;
      err << "row " << to_string(spec.param) << "=" << r.value << ": " << r.error << '\n';
    }
  }
  const auto crossings = detect_breaking(rows);
  if (crossings.empty()) {
    err << "no string breaking detected\n";
  } else {
    for (const auto& x : crossings) {
      err << "breaking crossing at " << to_string(spec.param) << " = " << x.value
          << (x.rising ? " (N rising)" : " (N falling)") << '\n';
    }
  }
  return ok ? kOk : kSolverFailure;
}

int run_potential(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.potential) throw ConfigError("config: missing required key potential");
  const LatticeGeometry g = checked_geometry(cfg);
  const Couplings& c = require_couplings(cfg);
  std::vector<PotentialPoint> pts;
  try {
    pts = static_potential(g, c, cfg.potential->separations, cfg.potential->row, cfg.potential->x0,
                           cfg.solver);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("potential: ") + e.what());
  }
  out << "R,V,E0,E0_vacuum,N,residual\n" << std::setprecision(15);
  bool ok = true;
  for (const auto& p : pts) {
    out << p.R << ',' << p.V << ',' << p.energy << ',' << p.vacuum_energy << ','
        << p.total_particles << ',' << p.residual << '\n';
    ok = ok && p.converged;
  }
  return ok ? kOk : kSolverFailure;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::istream& in, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Exact diagonalization of the Z2 gauge theory with static charges"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string field_map;
  bool verbose = false;
  int l1 = 0;
  int l2 = 0;
  double jp = 1.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config,-c", config_path, "JSON config file ('-' or omitted: stdin)");
    sub->add_option("--out,-o", out_path, "output file (default: stdout)");
  };
  auto* describe = app.add_subcommand("describe", "print the lattice tables as JSON");
  add_common(describe);
  auto* gs = app.add_subcommand("ground-state", "ground state observables as JSON");
  add_common(gs);
  gs->add_option("--field-map", field_map, "write <sigma^x> per link as CSV");
  gs->add_flag("--verbose,-v", verbose, "convergence log as CSV on stderr");
  auto* scan = app.add_subcommand("scan", "coupling scan as CSV");
  add_common(scan);
  auto* potential = app.add_subcommand("potential", "static potential V(R) as CSV");
  add_common(potential);
  auto* strings = app.add_subcommand("string-model", "shortest strings and Slater weights as CSV");
  strings->add_option("--l1", l1, "horizontal separation")->required();
  strings->add_option("--l2", l2, "vertical separation")->required();
  strings->add_option("--jp", jp, "plaquette coupling (hopping)");
  strings->add_option("--out,-o", out_path, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (strings->parsed()) {
      StringPatch patch{l1, l2};
      try {
        validate_patch(patch);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("string-model: ") + e.what());
      }
      Sink sink(out_path, out);
      write_string_model_csv(sink.get(), patch, jp);
      return kOk;
    }
    const RunConfig cfg = load_config(config_path, in);
    Sink sink(out_path, out);
    if (describe->parsed()) return run_describe(cfg, sink.get());
    if (gs->parsed()) return run_ground_state(cfg, sink.get(), field_map, verbose ? &err : nullptr);
    if (scan->parsed()) return run_scan_command(cfg, sink.get(), err);
    if (potential->parsed()) return run_potential(cfg, sink.get());
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
  return kConfigError;
}

}  // namespace z2lgt
