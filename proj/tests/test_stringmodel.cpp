#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "z2lgt/stringmodel.hpp"

using namespace z2lgt;

namespace {

Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

const LatticeGeometry open43 = build_geometry(4, 3, Boundary::Open, Boundary::Open);

}  // namespace

TEST_CASE("string counts") {
  CHECK(enumerate_shortest_strings({3, 2}).size() == 10);
  CHECK(enumerate_shortest_strings({2, 2}).size() == 6);
  CHECK(enumerate_shortest_strings({4, 0}).size() == 1);
  CHECK(enumerate_shortest_strings({0, 3}).size() == 1);
  for (int L = 1; L <= 12; ++L) {
    for (int l1 = 0; l1 <= L; ++l1) {
      const auto configs = enumerate_shortest_strings({l1, L - l1});
      CHECK(configs.size() == binomial(L, l1));
      std::set<std::string> distinct;
      for (const auto& c : configs) {
        CHECK(c.length() == L);
        CHECK(c.horizontal() == l1);
        distinct.insert(c.to_string());
      }
      CHECK(distinct.size() == configs.size());
    }
  }
  CHECK_THROWS_AS(enumerate_shortest_strings({0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_shortest_strings({-1, 3}), std::invalid_argument);
}

TEST_CASE("lexicographic order starts vertical-first") {
  const auto c = enumerate_shortest_strings({3, 2});
  CHECK(c.front().to_string() == "00111");
  CHECK(c.back().to_string() == "11100");
  CHECK(std::is_sorted(c.begin(), c.end()));
}

TEST_CASE("paths on the open 4x3 lattice") {
  CHECK(config_to_path({{1, 0, 1, 0, 1}}, {0, 0}, open43) == std::vector<int>{0, 3, 9, 12, 16});
  CHECK(config_to_path({{0, 0, 1, 1, 1}}, {0, 0}, open43) == std::vector<int>{1, 8, 14, 15, 16});
  CHECK(config_to_state({{1, 1}}, {0, 0}, open43) == 0b101);
  // Every staircase is a connected path from corner to corner.
  for (const auto& c : enumerate_shortest_strings({3, 2})) {
    int at = open43.site_index({0, 0});
    for (int id : config_to_path(c, {0, 0}, open43)) {
      const Link l = open43.link(id);
      CHECK(l.base == at);
      at = l.head;
    }
    CHECK(at == open43.site_index({3, 2}));
  }
  CHECK_THROWS_AS(config_to_path({{1, 1, 1, 1}}, {0, 0}, open43), std::out_of_range);
  // No wrapping across a periodic boundary.
  const auto torus = build_geometry(3, 3, Boundary::Periodic, Boundary::Periodic);
  CHECK_THROWS_AS(config_to_path({{1, 1}}, {2, 0}, torus), std::out_of_range);
}

TEST_CASE("corner counts") {
  CHECK(corner_count({{1, 0, 1, 0, 1}}) == 4);
  CHECK(corner_count({{1, 1, 1, 0, 0}}) == 1);
  CHECK(corner_count({{0, 0, 1, 1, 1}}) == 1);
  CHECK(corner_count({{1, 1}}) == 0);
  CHECK(corner_count({{1}}) == 0);
}

TEST_CASE("adjacency Hamiltonian structure") {
  const Eigen::MatrixXd h11 = string_adjacency_hamiltonian({1, 1}, 0.5);
  CHECK(h11.isApprox((Eigen::Matrix2d() << 0, -0.5, -0.5, 0).finished()));

  // Each corner is one flippable plaquette.
  const auto configs = enumerate_shortest_strings({3, 2});
  const Eigen::MatrixXd h = string_adjacency_hamiltonian({3, 2}, 1.0);
  CHECK(h.isApprox(h.transpose()));
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    CHECK(h(r, r) == 0.0);
    CHECK(-h.row(r).sum() == doctest::Approx(corner_count(configs[i])));
  }
  CHECK_THROWS(string_adjacency_hamiltonian({10, 10}, 1.0, 1000));
}

TEST_CASE("single-particle levels and small spectra") {
  const Eigen::VectorXd eps = single_particle_levels({5, 2, 1.0});
  CHECK(eps.size() == 5);
  CHECK(eps[0] == doctest::Approx(-std::sqrt(3.0)));
  CHECK(eps[2] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::is_sorted(eps.begin(), eps.end()));

  CHECK(fermion_spectrum({2, 1, 0.8}).ground_energy == doctest::Approx(-0.8));
  CHECK(fermion_spectrum({5, 2, 1.0}).ground_energy == doctest::Approx(-(std::sqrt(3.0) + 1.0)));
  const auto empty = fermion_spectrum({4, 0, 1.0});
  CHECK(empty.energies.size() == 1);
  CHECK(empty.ground_energy == 0.0);
  const auto full = fermion_spectrum({4, 4, 1.0});
  CHECK(full.energies.size() == 1);
  CHECK(std::abs(full.ground_energy) < 1e-12);
}

TEST_CASE("adjacency spectrum equals free-fermion spectrum") {
  for (int L = 1; L <= 12; ++L) {
    for (int l1 = 0; l1 <= L; ++l1) {
      if (binomial(L, l1) > 3000) continue;
      const StringPatch p{l1, L - l1};
      const Eigen::VectorXd adj = eigenvalues(string_adjacency_hamiltonian(p, 0.3));
      const auto ff = fermion_spectrum(chain_for(p, 0.3));
      REQUIRE(adj.size() == ff.energies.size());
      CHECK((adj - ff.energies).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(ff.ground_energy == doctest::Approx(ff.energies[0]));
    }
  }
}

TEST_CASE("particle-hole symmetry and linear scaling") {
  for (int L = 2; L <= 10; ++L) {
    for (int l1 = 0; l1 <= L; ++l1) {
      const auto a = fermion_spectrum({L, l1, 1.0}).energies;
      const auto b = fermion_spectrum({L, L - l1, 1.0}).energies;
      CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
      const auto c = fermion_spectrum({L, l1, 2.5}).energies;
      CHECK((c - 2.5 * a).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("Slater amplitudes reproduce the adjacency ground vector") {
  for (const StringPatch p : {StringPatch{1, 1}, StringPatch{3, 2}, StringPatch{2, 4}, StringPatch{4, 4}}) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(string_adjacency_hamiltonian(p, 1.0));
    Eigen::VectorXd ref = es.eigenvectors().col(0);
    const Eigen::VectorXd amp = slater_amplitudes(chain_for(p, 1.0));
    CHECK(amp.norm() == doctest::Approx(1.0));
    if (ref.dot(amp) < 0) ref = -ref;
    CHECK((ref - amp).cwiseAbs().maxCoeff() < 1e-10);
  }
  const Eigen::VectorXd two = slater_amplitudes({2, 1, 1.0});
  CHECK(std::abs(two[0]) == doctest::Approx(1.0 / std::numbers::sqrt2));
  CHECK(std::abs(two[1]) == doctest::Approx(1.0 / std::numbers::sqrt2));
}

TEST_CASE("zigzag configuration carries the largest weight") {
  const auto configs = enumerate_shortest_strings({3, 2});
  const Eigen::VectorXd amp = slater_amplitudes(chain_for({3, 2}, 1.0));
  Eigen::Index best = 0;
  amp.cwiseAbs().maxCoeff(&best);
  CHECK(configs[static_cast<std::size_t>(best)].to_string() == "10101");
}

TEST_CASE("string-model CSV") {
  std::ostringstream out;
  write_string_model_csv(out, {3, 2}, 1.0);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "config,corners,amplitude,probability");
  int rows = 0;
  double total = 0.0;
  while (std::getline(in, line)) {
    ++rows;
    total += std::stod(line.substr(line.rfind(',') + 1));
  }
  CHECK(rows == 10);
  CHECK(total == doctest::Approx(1.0));
}
