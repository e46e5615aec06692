#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "z2lgt/eigensolver.hpp"
#include "z2lgt/hamiltonian.hpp"
#include "z2lgt/lattice.hpp"

namespace z2lgt {

/// Raised for malformed or inconsistent run configurations.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SweptParameter { J_s, J_p, h_z, h_x };

std::string to_string(SweptParameter p);
SweptParameter swept_from_string(const std::string& name);
double& coupling_ref(Couplings& c, SweptParameter p);

struct GeometrySpec {
  int Lx = 2;
  int Ly = 2;
  Boundary bc_x = Boundary::Open;
  Boundary bc_y = Boundary::Open;

  LatticeGeometry build() const { return LatticeGeometry(Lx, Ly, bc_x, bc_y); }
};

struct PotentialSpec {
  std::vector<int> separations;
  int row = 0;
  int x0 = 0;
};

struct ScanSpec {
  GeometrySpec geometry;
  std::optional<std::pair<Site, Site>> charges;
  Couplings couplings;  // the swept entry is overwritten per grid point
  SweptParameter param = SweptParameter::h_x;
  std::vector<double> grid;
  SolverOptions solver;
};

/// Parsed JSON configuration. Sections not present in the document stay empty.
struct RunConfig {
  GeometrySpec geometry;
  std::optional<std::pair<Site, Site>> charges;
  std::optional<Couplings> couplings;
  std::optional<SweptParameter> scan_param;
  std::vector<double> grid;
  SolverOptions solver;
  int levels = 1;
  std::optional<PotentialSpec> potential;

  ChargeConfig charge_config(const LatticeGeometry& g) const;
  ScanSpec scan_spec() const;
};

/// Strict parser: unknown keys and missing required keys raise ConfigError
/// naming the offending key.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& text);

struct ScanRow {
  double value = 0.0;
  double E0 = 0.0;
  double dE = 0.0;
  double N = 0.0;
  bool degenerate = false;
  double residual = 0.0;
  bool converged = true;
  std::string error;
};

void validate_scan(const ScanSpec& spec);

/// Ground state with and without the charges at each grid point. Rows are
/// computed independently; a failing point is recorded and the scan moves on.
std::vector<ScanRow> run_scan(const ScanSpec& spec);

struct Crossing {
  double value = 0.0;
  bool rising = true;  // N increases with the swept parameter
};

/// Linear-interpolated crossings of N through `threshold` in grid order.
/// Empty: no breaking. More than one entry: non-monotone scan.
std::vector<Crossing> detect_breaking(const std::vector<ScanRow>& rows, double threshold = 1.0);

/// CSV: param,value,E0,dE,N,degenerate,residual
void write_scan_csv(std::ostream& out, SweptParameter param, const std::vector<ScanRow>& rows);

}  // namespace z2lgt
