#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "z2lgt/eigensolver.hpp"
#include "z2lgt/hamiltonian.hpp"
#include "z2lgt/stringmodel.hpp"

namespace z2lgt {

/// Matter occupation n_r = (1 - Q_r <A_r>) / 2 and its sum.
/// Ground state of a lattice Hamiltonian. Without off-diagonal terms the
/// lowest basis state is returned exactly; otherwise `ground_state` is used.
GroundStateResult<double> solve_ground_state(const HamiltonianOperator& op,
                                             const SolverOptions& solver = {});

struct ParticleNumbers {
  std::vector<double> per_site;
  double total = 0.0;
};

ParticleNumbers particle_number_map(const Eigen::VectorXd& state, const HamiltonianOperator& op);

/// <sigma^x> on every link.
std::vector<double> electric_field_map(const Eigen::VectorXd& state, const HamiltonianOperator& op);

/// CSV rows link_id,base_x,base_y,direction,value.
void write_field_map_csv(std::ostream& out, const LatticeGeometry& geometry,
                         const std::vector<double>& field);

struct ObservableReport {
  double energy = 0.0;
  std::optional<double> delta_energy;  // against the charge-free ground state
  double total_particles = 0.0;
  std::vector<double> occupation;
  std::vector<double> electric_field;
  bool degenerate = false;
  bool converged = true;
  double residual = 0.0;

  nlohmann::json to_json() const;
};

ObservableReport make_report(const GroundStateResult<double>& gs, const HamiltonianOperator& op,
                             std::optional<double> vacuum_energy = std::nullopt);

struct PotentialPoint {
  int R = 0;
  double V = 0.0;
  double energy = 0.0;
  double vacuum_energy = 0.0;
  double total_particles = 0.0;
  double residual = 0.0;
  bool converged = true;
};

/// V(R) = E0(charges at (x0, row) and (x0 + R, row)) - E0(no charges).
std::vector<PotentialPoint> static_potential(const LatticeGeometry& geometry,
                                             const Couplings& couplings,
                                             const std::vector<int>& separations, int row,
                                             int x0 = 0, const SolverOptions& solver = {});

struct StringWeights {
  StringPatch patch;
  std::vector<StringConfig> configs;  // enumerate_shortest_strings order
  std::vector<double> weights;
  double leakage = 0.0;
  bool degenerate = false;

  /// Weights divided by their sum (leakage removed).
  std::vector<double> normalized() const;
};

/// Overlap of a state with each shortest string between charges at `origin`
/// and `origin + (l1, l2)`.
StringWeights string_weights(const Eigen::VectorXd& state, const HamiltonianOperator& op,
                             Site origin, const StringPatch& patch);
StringWeights string_weights(const GroundStateResult<double>& gs, const HamiltonianOperator& op,
                             Site origin, const StringPatch& patch);

}  // namespace z2lgt
