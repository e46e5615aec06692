#include "z2lgt/observables.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <stdexcept>
#include <string>

namespace z2lgt {

GroundStateResult<double> solve_ground_state(const HamiltonianOperator& op, const SolverOptions& solver) {
  if (!op.flips().empty()) return ground_state(op, solver);
  const Eigen::VectorXd& d = op.diagonal();
  Eigen::Index best = 0;
  const double e0 = d.minCoeff(&best);
  GroundStateResult<double> r;
  r.energy = e0;
  r.state = Eigen::VectorXd::Unit(d.size(), best);
  r.gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (i != best) r.gap = std::min(r.gap, d[i] - e0);
  }
  r.degenerate = r.gap < solver.gap_tol;
  r.converged = true;
  return r;
}

namespace {

void require_unit_norm(const Eigen::VectorXd& state, const HamiltonianOperator& op) {
  if (state.size() != op.dimension()) {
    throw std::invalid_argument("state length does not match the operator dimension");
  }
  const double dev = std::abs(state.norm() - 1.0);
  if (dev > 1e-8) {
    throw std::invalid_argument("state norm deviates from 1 by " + std::to_string(dev));
  }
}

}  // namespace

ParticleNumbers particle_number_map(const Eigen::VectorXd& state, const HamiltonianOperator& op) {
  require_unit_norm(state, op);
  const auto& g = op.geometry();
  std::vector<double> star(g.num_sites(), 0.0);
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    const double p = state[i] * state[i];
    if (p == 0.0) continue;
    const BasisState s = op.basis().state(i);
    for (int r = 0; r < g.num_sites(); ++r) star[r] += p * star_value(g, r, s);
  }
  ParticleNumbers out;
  out.per_site.resize(g.num_sites());
  for (int r = 0; r < g.num_sites(); ++r) {
    out.per_site[r] = 0.5 * (1.0 - op.charges()[r] * star[r]);
    out.total += out.per_site[r];
  }
  return out;
}

std::vector<double> electric_field_map(const Eigen::VectorXd& state, const HamiltonianOperator& op) {
  require_unit_norm(state, op);
  const int links = op.geometry().num_links();
  std::vector<double> field(links, 0.0);
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    const double p = state[i] * state[i];
    if (p == 0.0) continue;
    const BasisState s = op.basis().state(i);
    for (int b = 0; b < links; ++b) field[b] += p * sigma_x(s, b);
  }
  return field;
}

void write_field_map_csv(std::ostream& out, const LatticeGeometry& geometry,
                         const std::vector<double>& field) {
  if (static_cast<int>(field.size()) != geometry.num_links()) {
    throw std::invalid_argument("field map size does not match the number of links");
  }
  out << "link_id,base_x,base_y,direction,value\n" << std::setprecision(15);
  for (int b = 0; b < geometry.num_links(); ++b) {
    const auto& l = geometry.link(b);
    const Site s = geometry.site(l.base);
    out << b << ',' << s.x << ',' << s.y << ',' << (l.dir == Direction::X ? 'x' : 'y') << ','
        << field[b] << '\n';
  }
}

nlohmann::json ObservableReport::to_json() const {
  nlohmann::json j;
  j["energy"] = energy;
  j["delta_energy"] = delta_energy ? nlohmann::json(*delta_energy) : nlohmann::json(nullptr);
  j["N"] = total_particles;
  j["occupation"] = occupation;
  j["electric_field"] = electric_field;
  j["degenerate"] = degenerate;
  j["converged"] = converged;
  j["residual"] = residual;
  return j;
}

ObservableReport make_report(const GroundStateResult<double>& gs, const HamiltonianOperator& op,
                             std::optional<double> vacuum_energy) {
  ObservableReport r;
  r.energy = gs.energy;
  if (vacuum_energy) r.delta_energy = gs.energy - *vacuum_energy;
  const auto n = particle_number_map(gs.state, op);
  r.total_particles = n.total;
  r.occupation = n.per_site;
  r.electric_field = electric_field_map(gs.state, op);
  r.degenerate = gs.degenerate;
  r.converged = gs.converged;
  r.residual = gs.residual;
  return r;
}

std::vector<PotentialPoint> static_potential(const LatticeGeometry& geometry,
                                             const Couplings& couplings,
                                             const std::vector<int>& separations, int row, int x0,
                                             const SolverOptions& solver) {
  for (int R : separations) {
    if (R < 1) throw std::invalid_argument("separation must be at least 1 (coincident charges)");
    if (!geometry.contains({x0, row}) || !geometry.contains({x0 + R, row})) {
      throw std::invalid_argument("separation " + std::to_string(R) + " does not fit in row " +
                                  std::to_string(row));
    }
  }
  const HamiltonianOperator vacuum(geometry, couplings, vacuum_charges(geometry));
  const auto vac = solve_ground_state(vacuum, solver);

  std::vector<PotentialPoint> out;
  for (int R : separations) {
    const HamiltonianOperator h(geometry, couplings,
                                two_charge_config(geometry, {x0, row}, {x0 + R, row}));
    const auto gs = solve_ground_state(h, solver);
    PotentialPoint p;
    p.R = R;
    p.energy = gs.energy;
    p.vacuum_energy = vac.energy;
    p.V = gs.energy - vac.energy;
    p.total_particles = particle_number_map(gs.state, h).total;
    p.residual = std::max(gs.residual, vac.residual);
    p.converged = gs.converged && vac.converged;
    out.push_back(p);
  }
  return out;
}

std::vector<double> StringWeights::normalized() const {
  double sum = 0.0;
  for (double w : weights) sum += w;
  std::vector<double> out(weights);
  if (sum > 0.0) {
    for (double& w : out) w /= sum;
  }
  return out;
}

StringWeights string_weights(const Eigen::VectorXd& state, const HamiltonianOperator& op,
                             Site origin, const StringPatch& patch) {
  require_unit_norm(state, op);
  validate_patch(patch);
  const auto& g = op.geometry();
  const Site end{origin.x + patch.l1, origin.y + patch.l2};
  if (!g.contains(origin) || !g.contains(end) || op.charges()[g.site_index(origin)] != -1 ||
      op.charges()[g.site_index(end)] != -1) {
    throw std::invalid_argument("patch corners do not coincide with static charges");
  }
  StringWeights out;
  out.patch = patch;
  out.configs = enumerate_shortest_strings(patch);
  double total = 0.0;
  for (const auto& c : out.configs) {
    const Eigen::Index i = op.basis().find(config_to_state(c, origin, g));
    const double w = i < 0 ? 0.0 : state[i] * state[i];
    out.weights.push_back(w);
    total += w;
  }
  out.leakage = state.squaredNorm() - total;
  return out;
}

StringWeights string_weights(const GroundStateResult<double>& gs, const HamiltonianOperator& op,
                             Site origin, const StringPatch& patch) {
  StringWeights w = string_weights(gs.state, op, origin, patch);
  w.degenerate = gs.degenerate;
  return w;
}

}  // namespace z2lgt
