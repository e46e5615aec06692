#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "z2lgt/hamiltonian.hpp"
#include "z2lgt/lattice.hpp"

namespace z2lgt {

/// Rectangle spanned by two charges at opposite corners: l1 links across,
/// l2 links up.
struct StringPatch {
  int l1 = 0;
  int l2 = 0;
  int length() const { return l1 + l2; }
};

void validate_patch(const StringPatch& patch);

/// A shortest string as its sequence of moves, 1 = horizontal, 0 = vertical.
/// Read as an occupation pattern it is a fermion configuration on the chain.
struct StringConfig {
  std::vector<int> moves;

  int length() const { return static_cast<int>(moves.size()); }
  int horizontal() const;
  std::string to_string() const;
  friend bool operator==(const StringConfig&, const StringConfig&) = default;
  friend auto operator<=>(const StringConfig&, const StringConfig&) = default;
};

struct FermionChain {
  int L = 0;        // chain sites
  int N = 0;        // fermions
  double J_p = 1.0; // hopping
};

std::uint64_t binomial(int n, int k);

/// All C(l1+l2, l1) monotone staircases in lexicographic order of the move
/// tuple, starting with (0,...,0,1,...,1).
std::vector<StringConfig> enumerate_shortest_strings(const StringPatch& patch);

/// Links visited by the staircase starting at `origin`. Steps never wrap
/// around a periodic boundary.
std::vector<int> config_to_path(const StringConfig& config, Site origin,
                                const LatticeGeometry& geometry);
BasisState config_to_state(const StringConfig& config, Site origin, const LatticeGeometry& geometry);

/// Number of direction changes along the string.
int corner_count(const StringConfig& config);

/// Plaquette resonances inside the shortest-string manifold: -J_p between
/// configurations related by swapping one adjacent (0,1) / (1,0) pair. The
/// common electric energy is dropped, so the diagonal is zero.
Eigen::MatrixXd string_adjacency_hamiltonian(const StringPatch& patch, double J_p,
                                             std::size_t dense_limit = 20000);

/// eps_k = -2 J_p cos(k pi / (L+1)), k = 1..L, ascending for J_p > 0.
Eigen::VectorXd single_particle_levels(const FermionChain& chain);

struct FermionSpectrum {
  Eigen::VectorXd energies;  // all N-particle energies, ascending
  double ground_energy = 0.0;
};

FermionSpectrum fermion_spectrum(const FermionChain& chain);

/// Ground-state Slater determinant of the N lowest open-chain orbitals,
/// evaluated on every occupation pattern in enumerate_shortest_strings order.
Eigen::VectorXd slater_amplitudes(const FermionChain& chain);

inline FermionChain chain_for(const StringPatch& patch, double J_p) {
  return {patch.length(), patch.l1, J_p};
}

/// CSV: config,corners,amplitude,probability
void write_string_model_csv(std::ostream& out, const StringPatch& patch, double J_p);

}  // namespace z2lgt
