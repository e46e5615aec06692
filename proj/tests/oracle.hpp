#pragma once

// Test-only reference constructions that do not go through the operator's
// bit-flip kernels.

#include <vector>

#include <Eigen/Dense>

#include "z2lgt/hamiltonian.hpp"

namespace z2lgt::oracle {

/// Dense Hamiltonian from Kronecker products of single-link Pauli matrices.
/// In the electric basis sigma^x = diag(1, -1) and sigma^z = [[0, 1], [1, 0]];
/// link b is bit b of the row index (link 0 is the fastest index).
inline Eigen::MatrixXd kron_hamiltonian(const LatticeGeometry& g, const Couplings& c,
                                        const ChargeConfig& q) {
  const int n = g.num_links();
  Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d X;
  X << 1, 0, 0, -1;
  Eigen::Matrix2d Z;
  Z << 0, 1, 1, 0;

  auto product = [&](const std::vector<char>& which) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Ones(1, 1);
    for (int b = 0; b < n; ++b) {  // m = P_b (x) ... (x) P_0
      const Eigen::Matrix2d& p = which[b] == 'x' ? X : which[b] == 'z' ? Z : I;
      Eigen::MatrixXd next(m.rows() * 2, m.cols() * 2);
      for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s) next.block(r * m.rows(), s * m.cols(), m.rows(), m.cols()) = p(r, s) * m;
      m.swap(next);
    }
    return m;
  };

  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int r = 0; r < g.num_sites(); ++r) {
    std::vector<char> w(n, 'i');
    for (int b : g.star_links(r)) w[b] = 'x';
    h -= c.J_s * q[r] * product(w);
  }
  for (int p = 0; p < g.num_plaquettes(); ++p) {
    std::vector<char> w(n, 'i');
    for (int b : g.plaquette_links(p)) w[b] = 'z';
    const double sign = c.plaquette_signs.empty() ? 1.0 : c.plaquette_signs[p];
    h -= c.J_p * sign * product(w);
  }
  for (int b = 0; b < n; ++b) {
    std::vector<char> w(n, 'i');
    w[b] = 'z';
    h -= c.h_z * product(w);
    w[b] = 'x';
    h -= c.h_x * product(w);
  }
  return h;
}

struct GeometryCase {
  int Lx, Ly;
  Boundary bx, by;
};

/// Every geometry with at most `max_links` links.
inline std::vector<GeometryCase> small_geometries(int max_links) {
  std::vector<GeometryCase> out;
  for (Boundary bx : {Boundary::Open, Boundary::Periodic}) {
    for (Boundary by : {Boundary::Open, Boundary::Periodic}) {
      for (int Lx = 2; Lx <= max_links; ++Lx) {
        for (int Ly = 2; Ly <= max_links; ++Ly) {
          const int links = (bx == Boundary::Periodic ? Lx : Lx - 1) * Ly +
                            Lx * (by == Boundary::Periodic ? Ly : Ly - 1);
          if (links <= max_links) out.push_back({Lx, Ly, bx, by});
        }
      }
    }
  }
  return out;
}

}  // namespace z2lgt::oracle
