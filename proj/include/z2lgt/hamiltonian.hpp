#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "z2lgt/lattice.hpp"

namespace z2lgt {

/// Link configuration in the electric basis: bit b set <=> sigma^x_b = -1.
using BasisState = std::uint64_t;

/// Energies of the gauge-fixed Hamiltonian
///   H = -J_s sum_r Q_r A_r - J_p sum_p B_p - h_z sum_b sigma^z_b - h_x sum_b sigma^x_b.
struct Couplings {
  double J_s = 1.0;
  double J_p = 1.0;
  double h_z = 0.0;
  double h_x = 0.0;
  /// Optional per-plaquette sign multiplying J_p; empty means uniform +1.
  std::vector<int> plaquette_signs;
};

/// Static background charge Q_r = +1 (empty) or -1 (charge) per site.
class ChargeConfig {
 public:
  explicit ChargeConfig(int num_sites) : q_(num_sites, 1) {}
  explicit ChargeConfig(std::vector<int> q);

  int size() const { return static_cast<int>(q_.size()); }
  int operator[](int site) const { return q_.at(site); }
  void set(int site, int value);
  int num_charges() const;
  const std::vector<int>& values() const { return q_; }

 private:
  std::vector<int> q_;
};

ChargeConfig vacuum_charges(const LatticeGeometry& geometry);
ChargeConfig two_charge_config(const LatticeGeometry& geometry, Site r1, Site r2);

struct SectorCheck {
  bool ok = true;
  std::string violation;
  explicit operator bool() const { return ok; }
};

/// Gauss-law consistency of a charge background. On a torus the product of
/// all star operators is the identity, so only an even number of charges is
/// admissible. Geometries with an open axis accept any background.
SectorCheck validate_sector(const LatticeGeometry& geometry, const ChargeConfig& charges);

inline int star_value(const LatticeGeometry& g, int site, BasisState s) {
  return (std::popcount(s & g.star_mask(site)) & 1) ? -1 : 1;
}

inline int sigma_x(BasisState s, int link) { return ((s >> link) & 1U) ? -1 : 1; }

/// Ordered set of link configurations spanning the operator's Hilbert space.
/// Either the full 2^links space (index == state) or an explicit sorted list.
class Basis {
 public:
  static Basis full(int num_links);
  static Basis listed(std::vector<BasisState> states);

  bool is_full() const { return full_; }
  Eigen::Index dimension() const { return dim_; }
  BasisState state(Eigen::Index i) const {
    return full_ ? static_cast<BasisState>(i) : states_[static_cast<std::size_t>(i)];
  }
  /// Index of `s`, or -1 if the state is not part of this basis.
  Eigen::Index find(BasisState s) const;

 private:
  bool full_ = true;
  int num_links_ = 0;
  Eigen::Index dim_ = 0;
  std::vector<BasisState> states_;
};

/// All link configurations with the prescribed star values A_r = stars[r].
/// Solves the parity constraints over GF(2); returns an empty basis when the
/// constraints are inconsistent.
Basis star_sector(const LatticeGeometry& geometry, const std::vector<int>& stars);

/// Configurations with no dynamical matter (Q_r A_r = +1 everywhere): the
/// sector holding electric strings that end on the static charges.
Basis matter_free_sector(const LatticeGeometry& geometry, const ChargeConfig& charges);

/// Matrix-free real symmetric Hamiltonian in the electric (sigma^x) basis.
///
/// Star and field terms are diagonal; plaquettes flip four bits with
/// amplitude -J_p and the transverse field flips one bit with amplitude
/// -h_z. A restricted basis must be closed under every nonzero flip term.
class HamiltonianOperator {
 public:
  using Scalar = double;
  using Matrix = Eigen::MatrixXd;

  static constexpr int kMaxFullBasisLinks = 28;

  HamiltonianOperator(LatticeGeometry geometry, Couplings couplings, ChargeConfig charges);
  HamiltonianOperator(LatticeGeometry geometry, Couplings couplings, ChargeConfig charges,
                      Basis basis);

  const LatticeGeometry& geometry() const { return geometry_; }
  const Couplings& couplings() const { return couplings_; }
  const ChargeConfig& charges() const { return charges_; }
  const Basis& basis() const { return basis_; }

  Eigen::Index dimension() const { return basis_.dimension(); }

  double diagonal_energy(BasisState state) const;
  /// Diagonal in basis order.
  const Eigen::VectorXd& diagonal() const { return diagonal_; }

  void apply(const Eigen::Ref<const Matrix>& in, Eigen::Ref<Matrix> out) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& in) const;

  /// Gershgorin bound on the spectral radius.
  double norm_bound() const;

  /// Off-diagonal moves as (flip mask, amplitude), zero amplitudes dropped.
  const std::vector<std::pair<BasisState, double>>& flips() const { return flips_; }

 private:
  void init();

  LatticeGeometry geometry_;
  Couplings couplings_;
  ChargeConfig charges_;
  Basis basis_;
  Eigen::VectorXd diagonal_;
  std::vector<std::pair<BasisState, double>> flips_;
  // Neighbour table for listed bases (CSR).
  std::vector<Eigen::Index> row_start_;
  std::vector<Eigen::Index> col_;
  std::vector<double> val_;
};

/// Dense matrix assembled column by column from `apply`.
template <class Op>
Eigen::Matrix<typename Op::Scalar, Eigen::Dynamic, Eigen::Dynamic> assemble_dense(const Op& op) {
  using M = Eigen::Matrix<typename Op::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = op.dimension();
  M identity = M::Identity(n, n);
  M out(n, n);
  op.apply(identity, out);
  return out;
}

/// Indicator mask of a set of links.
BasisState links_to_state(const std::vector<int>& links);

}  // namespace z2lgt
