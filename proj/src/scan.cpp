#include "z2lgt/scan.hpp"

#include <cmath>
#include <iomanip>
#include <set>

#include "z2lgt/observables.hpp"

namespace z2lgt {

using nlohmann::json;

std::string to_string(SweptParameter p) {
  switch (p) {
    case SweptParameter::J_s: return "J_s";
    case SweptParameter::J_p: return "J_p";
    case SweptParameter::h_z: return "h_z";
    case SweptParameter::h_x: return "h_x";
  }
  return "?";
}

SweptParameter swept_from_string(const std::string& name) {
  if (name == "J_s") return SweptParameter::J_s;
  if (name == "J_p") return SweptParameter::J_p;
  if (name == "h_z") return SweptParameter::h_z;
  if (name == "h_x") return SweptParameter::h_x;
  throw ConfigError("scan.param: unknown parameter '" + name + "' (expected J_s|J_p|h_z|h_x)");
}

double& coupling_ref(Couplings& c, SweptParameter p) {
  switch (p) {
    case SweptParameter::J_s: return c.J_s;
    case SweptParameter::J_p: return c.J_p;
    case SweptParameter::h_z: return c.h_z;
    case SweptParameter::h_x: return c.h_x;
  }
  throw std::logic_error("bad swept parameter");
}

namespace {

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed,
                const std::set<std::string>& required) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
  std::string missing;
  for (const auto& key : required) {
    if (!obj.contains(key)) missing += (missing.empty() ? "" : ", ") + key;
  }
  if (!missing.empty()) throw ConfigError(where + ": missing required key(s) " + missing);
}

template <class T>
T get_as(const json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

double get_number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.at(key).is_number()) throw ConfigError(where + "." + key + ": expected a number");
  return obj.at(key).get<double>();
}

int get_int(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.at(key).is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return obj.at(key).get<int>();
}

Site parse_site(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw ConfigError(where + ": expected a site [x, y]");
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

std::vector<double> parse_grid(const json& g) {
  std::vector<double> grid;
  if (g.is_array()) {
    for (const auto& v : g) {
      if (!v.is_number()) throw ConfigError("scan.grid: entries must be numbers");
      grid.push_back(v.get<double>());
    }
  } else {
    check_keys(g, "scan.grid", {"start", "stop", "step"}, {"start", "stop", "step"});
    const double start = get_number(g, "start", "scan.grid");
    const double stop = get_number(g, "stop", "scan.grid");
    const double step = get_number(g, "step", "scan.grid");
    if (step == 0.0 || !std::isfinite(step)) throw ConfigError("scan.grid.step: must be nonzero");
    const double span = (stop - start) / step;
    if (span < -1e-9) return grid;
    const long count = std::lround(std::floor(span + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) grid.push_back(start + static_cast<double>(i) * step);
  }
  return grid;
}

}  // namespace

RunConfig parse_config(const json& doc) {
  check_keys(doc, "config", {"geometry", "charges", "couplings", "scan", "solver", "potential"},
             {"geometry"});
  RunConfig cfg;

  const json& g = doc.at("geometry");
  check_keys(g, "geometry", {"Lx", "Ly", "bc_x", "bc_y"}, {"Lx", "Ly", "bc_x", "bc_y"});
  cfg.geometry.Lx = get_int(g, "Lx", "geometry");
  cfg.geometry.Ly = get_int(g, "Ly", "geometry");
  try {
    cfg.geometry.bc_x = boundary_from_string(get_as<std::string>(g, "bc_x", "geometry"));
    cfg.geometry.bc_y = boundary_from_string(get_as<std::string>(g, "bc_y", "geometry"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("geometry: ") + e.what());
  }
  if (cfg.geometry.Lx < 2 || cfg.geometry.Ly < 2) {
    throw ConfigError("geometry: Lx and Ly must be at least 2");
  }

  if (doc.contains("charges") && !doc.at("charges").is_null()) {
    const json& c = doc.at("charges");
    if (!c.is_array() || c.size() != 2) throw ConfigError("charges: expected [r1, r2] or null");
    cfg.charges = std::make_pair(parse_site(c[0], "charges[0]"), parse_site(c[1], "charges[1]"));
  }

  if (doc.contains("scan")) {
    const json& s = doc.at("scan");
    check_keys(s, "scan", {"param", "grid"}, {"param", "grid"});
    cfg.scan_param = swept_from_string(get_as<std::string>(s, "param", "scan"));
    cfg.grid = parse_grid(s.at("grid"));
  }

  if (doc.contains("couplings")) {
    const json& c = doc.at("couplings");
    std::set<std::string> names{"J_s", "J_p", "h_z", "h_x"};
    std::set<std::string> required = names;
    if (cfg.scan_param) {
      const std::string swept = to_string(*cfg.scan_param);
      if (c.is_object() && c.contains(swept)) {
        throw ConfigError("couplings." + swept + ": swept parameter must not be fixed");
      }
      required.erase(swept);
    }
    std::set<std::string> allowed = required;
    allowed.insert("plaquette_signs");
    check_keys(c, "couplings", allowed, required);
    Couplings k;
    k.J_s = c.contains("J_s") ? get_number(c, "J_s", "couplings") : 0.0;
    k.J_p = c.contains("J_p") ? get_number(c, "J_p", "couplings") : 0.0;
    k.h_z = c.contains("h_z") ? get_number(c, "h_z", "couplings") : 0.0;
    k.h_x = c.contains("h_x") ? get_number(c, "h_x", "couplings") : 0.0;
    if (c.contains("plaquette_signs")) {
      k.plaquette_signs = get_as<std::vector<int>>(c, "plaquette_signs", "couplings");
    }
    cfg.couplings = std::move(k);
  }

  if (doc.contains("solver")) {
    const json& s = doc.at("solver");
    check_keys(s, "solver", {"tol", "max_iter", "seed", "levels"}, {});
    if (s.contains("tol")) cfg.solver.tol = get_number(s, "tol", "solver");
    if (s.contains("max_iter")) cfg.solver.max_iter = get_int(s, "max_iter", "solver");
    if (s.contains("seed")) cfg.solver.seed = get_as<std::uint64_t>(s, "seed", "solver");
    if (s.contains("levels")) cfg.levels = get_int(s, "levels", "solver");
    if (!(cfg.solver.tol > 0.0)) throw ConfigError("solver.tol: must be positive");
    if (cfg.solver.max_iter < 1) throw ConfigError("solver.max_iter: must be positive");
    if (cfg.levels < 1) throw ConfigError("solver.levels: must be positive");
  }

  if (doc.contains("potential")) {
    const json& p = doc.at("potential");
    check_keys(p, "potential", {"separations", "row", "x0"}, {"separations", "row"});
    PotentialSpec ps;
    ps.separations = get_as<std::vector<int>>(p, "separations", "potential");
    ps.row = get_int(p, "row", "potential");
    if (p.contains("x0")) ps.x0 = get_int(p, "x0", "potential");
    cfg.potential = std::move(ps);
  }
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

ChargeConfig RunConfig::charge_config(const LatticeGeometry& g) const {
  if (!charges) return vacuum_charges(g);
  try {
    return two_charge_config(g, charges->first, charges->second);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("charges: ") + e.what());
  }
}

ScanSpec RunConfig::scan_spec() const {
  if (!scan_param) throw ConfigError("config: missing required key scan");
  if (!couplings) throw ConfigError("config: missing required key couplings");
  ScanSpec s;
  s.geometry = geometry;
  s.charges = charges;
  s.couplings = *couplings;
  s.param = *scan_param;
  s.grid = grid;
  s.solver = solver;
  return s;
}

void validate_scan(const ScanSpec& spec) {
  for (std::size_t i = 1; i < spec.grid.size(); ++i) {
    const double d0 = spec.grid[1] - spec.grid[0];
    const double d = spec.grid[i] - spec.grid[i - 1];
    if (d == 0.0 || (d > 0) != (d0 > 0)) throw ConfigError("scan.grid: must be strictly monotone");
  }
  for (double v : spec.grid) {
    if (!std::isfinite(v)) throw ConfigError("scan.grid: entries must be finite");
  }
  LatticeGeometry g = [&] {
    try {
      return spec.geometry.build();
    } catch (const std::exception& e) {
      throw ConfigError(std::string("geometry: ") + e.what());
    }
  }();
  if (g.num_links() > HamiltonianOperator::kMaxFullBasisLinks) {
    throw ConfigError("geometry: " + std::to_string(g.num_links()) + " links exceed the basis limit");
  }
  ChargeConfig q = vacuum_charges(g);
  if (spec.charges) {
    try {
      q = two_charge_config(g, spec.charges->first, spec.charges->second);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("charges: ") + e.what());
    }
  }
  if (auto check = validate_sector(g, q); !check) throw ConfigError("charges: " + check.violation);
}

std::vector<ScanRow> run_scan(const ScanSpec& spec) {
  validate_scan(spec);
  const LatticeGeometry g = spec.geometry.build();
  const ChargeConfig charged = spec.charges
                                   ? two_charge_config(g, spec.charges->first, spec.charges->second)
                                   : vacuum_charges(g);
  std::vector<ScanRow> rows;
  rows.reserve(spec.grid.size());
  for (double value : spec.grid) {
    ScanRow row;
    row.value = value;
    try {
      Couplings c = spec.couplings;
      coupling_ref(c, spec.param) = value;
      const HamiltonianOperator h(g, c, charged);
      const auto gs = solve_ground_state(h, spec.solver);
      double vac_energy = gs.energy;
      double vac_residual = 0.0;
      bool vac_ok = true;
      if (spec.charges) {
        const HamiltonianOperator h0(g, c, vacuum_charges(g));
        const auto vac = solve_ground_state(h0, spec.solver);
        vac_energy = vac.energy;
        vac_residual = vac.residual;
        vac_ok = vac.converged;
      }
      row.E0 = gs.energy;
      row.dE = gs.energy - vac_energy;
      row.N = particle_number_map(gs.state, h).total;
      row.degenerate = gs.degenerate;
      row.residual = std::max(gs.residual, vac_residual);
      row.converged = gs.converged && vac_ok;
      if (!row.converged) row.error = "eigensolver did not converge";
    } catch (const std::exception& e) {
      row.converged = false;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<Crossing> detect_breaking(const std::vector<ScanRow>& rows, double threshold) {
  std::vector<Crossing> out;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double a = rows[i].N - threshold;
    const double b = rows[i + 1].N - threshold;
    // A point sitting exactly on the threshold is attributed to the
    // interval it starts, so a single touch is not counted twice.
    if ((a < 0 && b >= 0) || (a > 0 && b <= 0)) {
      const double t = a / (a - b);
      const double x = rows[i].value + t * (rows[i + 1].value - rows[i].value);
      const bool increasing_grid = rows[i + 1].value > rows[i].value;
      out.push_back({x, (b > a) == increasing_grid});
    }
  }
  return out;
}

void write_scan_csv(std::ostream& out, SweptParameter param, const std::vector<ScanRow>& rows) {
  out << "param,value,E0,dE,N,degenerate,residual\n" << std::setprecision(15);
  for (const auto& r : rows) {
    out << to_string(param) << ',' << r.value << ',' << r.E0 << ',' << r.dE << ',' << r.N << ','
        << (r.degenerate ? 1 : 0) << ',' << r.residual << '\n';
  }
}

}  // namespace z2lgt
