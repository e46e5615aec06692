#include "z2lgt/stringmodel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <stdexcept>

namespace z2lgt {

void validate_patch(const StringPatch& patch) {
  if (patch.l1 < 0 || patch.l2 < 0) throw std::invalid_argument("patch sides must be non-negative");
  if (patch.length() < 1) throw std::invalid_argument("patch must have l1 + l2 >= 1");
}

int StringConfig::horizontal() const {
  return static_cast<int>(std::count(moves.begin(), moves.end(), 1));
}

std::string StringConfig::to_string() const {
  std::string s;
  for (int m : moves) s.push_back(m ? '1' : '0');
  return s;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

std::vector<StringConfig> enumerate_shortest_strings(const StringPatch& patch) {
  validate_patch(patch);
  StringConfig c;
  c.moves.assign(patch.l2, 0);
  c.moves.insert(c.moves.end(), patch.l1, 1);
  std::vector<StringConfig> out;
  out.reserve(binomial(patch.length(), patch.l1));
  do {
    out.push_back(c);
  } while (std::next_permutation(c.moves.begin(), c.moves.end()));
  return out;
}

std::vector<int> config_to_path(const StringConfig& config, Site origin,
                                const LatticeGeometry& geometry) {
  const int h = config.horizontal();
  const int v = config.length() - h;
  const Site end{origin.x + h, origin.y + v};
  if (!geometry.contains(origin) || !geometry.contains(end)) {
    throw std::out_of_range("string path leaves the lattice");
  }
  std::vector<int> path;
  path.reserve(config.moves.size());
  Site at = origin;
  for (int m : config.moves) {
    const Direction d = m ? Direction::X : Direction::Y;
    path.push_back(geometry.link_index(at, d));
    if (m) ++at.x; else ++at.y;
  }
  return path;
}

BasisState config_to_state(const StringConfig& config, Site origin, const LatticeGeometry& geometry) {
  return links_to_state(config_to_path(config, origin, geometry));
}

int corner_count(const StringConfig& config) {
  int corners = 0;
  for (std::size_t i = 1; i < config.moves.size(); ++i) corners += config.moves[i] != config.moves[i - 1];
  return corners;
}

Eigen::MatrixXd string_adjacency_hamiltonian(const StringPatch& patch, double J_p,
                                             std::size_t dense_limit) {
  validate_patch(patch);
  const std::uint64_t count = binomial(patch.length(), patch.l1);
  if (count > dense_limit) {
    throw std::invalid_argument("string manifold of " + std::to_string(count) +
                                " configurations exceeds the dense limit");
  }
  const auto configs = enumerate_shortest_strings(patch);
  const auto dim = static_cast<Eigen::Index>(configs.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    StringConfig c = configs[i];
    for (std::size_t p = 0; p + 1 < c.moves.size(); ++p) {
      if (c.moves[p] == c.moves[p + 1]) continue;
      std::swap(c.moves[p], c.moves[p + 1]);
      const auto it = std::lower_bound(configs.begin(), configs.end(), c);
      h(i, it - configs.begin()) = -J_p;
      std::swap(c.moves[p], c.moves[p + 1]);
    }
  }
  return h;
}

Eigen::VectorXd single_particle_levels(const FermionChain& chain) {
  if (chain.L < 1 || chain.N < 0 || chain.N > chain.L) throw std::invalid_argument("invalid fermion chain");
  Eigen::VectorXd eps(chain.L);
  for (int k = 1; k <= chain.L; ++k) {
    eps[k - 1] = -2.0 * chain.J_p * std::cos(k * std::numbers::pi / (chain.L + 1));
  }
  return eps;
}

FermionSpectrum fermion_spectrum(const FermionChain& chain) {
  const Eigen::VectorXd eps = single_particle_levels(chain);
  const std::uint64_t count = binomial(chain.L, chain.N);
  if (count > (std::uint64_t{1} << 26)) throw std::invalid_argument("fermion spectrum too large");

  std::vector<double> energies;
  energies.reserve(count);
  std::vector<int> occ(chain.L - chain.N, 0);
  occ.insert(occ.end(), chain.N, 1);
  do {
    double e = 0.0;
    for (int k = 0; k < chain.L; ++k) {
      if (occ[k]) e += eps[k];
    }
    energies.push_back(e);
  } while (std::next_permutation(occ.begin(), occ.end()));
  std::sort(energies.begin(), energies.end());

  FermionSpectrum out;
  out.energies = Eigen::Map<Eigen::VectorXd>(energies.data(), static_cast<Eigen::Index>(energies.size()));
  out.ground_energy = energies.front();
  return out;
}

Eigen::VectorXd slater_amplitudes(const FermionChain& chain) {
  const Eigen::VectorXd eps = single_particle_levels(chain);
  const StringPatch patch{chain.N, chain.L - chain.N};
  const auto configs = enumerate_shortest_strings(patch);

  // Orbitals filled in order of increasing energy.
  std::vector<int> order(chain.L);
  for (int k = 0; k < chain.L; ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return eps[a] < eps[b]; });

  const double norm = std::sqrt(2.0 / (chain.L + 1));
  Eigen::VectorXd amps(static_cast<Eigen::Index>(configs.size()));
  Eigen::MatrixXd m(chain.N, chain.N);
  for (std::size_t c = 0; c < configs.size(); ++c) {
    if (chain.N == 0) {
      amps[static_cast<Eigen::Index>(c)] = 1.0;
      continue;
    }
    int row = 0;
    for (int j = 0; j < chain.L; ++j) {
      if (!configs[c].moves[j]) continue;
      for (int col = 0; col < chain.N; ++col) {
        const int k = order[col] + 1;
        m(row, col) = norm * std::sin(k * std::numbers::pi * (j + 1) / (chain.L + 1));
      }
      ++row;
    }
    amps[static_cast<Eigen::Index>(c)] = m.determinant();
  }
  return amps;
}

void write_string_model_csv(std::ostream& out, const StringPatch& patch, double J_p) {
  const auto configs = enumerate_shortest_strings(patch);
  const Eigen::VectorXd amps = slater_amplitudes(chain_for(patch, J_p));
  out << "config,corners,amplitude,probability\n";
  out << std::setprecision(15);
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const double a = amps[static_cast<Eigen::Index>(i)];
    out << configs[i].to_string() << ',' << corner_count(configs[i]) << ',' << a << ',' << a * a
        << '\n';
  }
}

}  // namespace z2lgt
