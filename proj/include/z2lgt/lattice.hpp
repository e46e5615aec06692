#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace z2lgt {

enum class Boundary { Open, Periodic };

enum class Direction : int { X = 0, Y = 1 };

std::string to_string(Boundary bc);
Boundary boundary_from_string(const std::string& name);

struct Site {
  int x = 0;
  int y = 0;
  friend bool operator==(const Site&, const Site&) = default;
};

struct Link {
  int base = 0;       // site the link emanates from
  int head = 0;       // site reached by stepping along `dir`
  Direction dir = Direction::X;
};

/// Rectangular square lattice with a boundary condition per axis.
///
/// Sites are numbered row-major, `site = y * Lx + x`. Links are numbered by
/// walking the sites in order and emitting the x-link before the y-link of
/// each site, skipping links that would leave an open boundary. Plaquettes
/// are labelled by their lower-left site, again row-major, and list their
/// links as (bottom, top, left, right).
class LatticeGeometry {
 public:
  LatticeGeometry(int Lx, int Ly, Boundary bc_x, Boundary bc_y);

  int Lx() const { return Lx_; }
  int Ly() const { return Ly_; }
  Boundary bc_x() const { return bc_x_; }
  Boundary bc_y() const { return bc_y_; }
  bool is_torus() const { return bc_x_ == Boundary::Periodic && bc_y_ == Boundary::Periodic; }

  int num_sites() const { return Lx_ * Ly_; }
  int num_links() const { return static_cast<int>(links_.size()); }
  int num_plaquettes() const { return static_cast<int>(plaquettes_.size()); }

  int site_index(Site s) const;
  int site_index(int x, int y) const { return site_index(Site{x, y}); }
  Site site(int index) const;
  bool contains(Site s) const { return s.x >= 0 && s.x < Lx_ && s.y >= 0 && s.y < Ly_; }

  const Link& link(int index) const;
  /// Link leaving `s` along `dir`, or -1 if it would cross an open boundary.
  int link_index(Site s, Direction dir) const;

  const std::vector<int>& star_links(int site) const;
  const std::array<int, 4>& plaquette_links(int plaquette) const;
  Site plaquette_origin(int plaquette) const;

  std::uint64_t star_mask(int site) const;
  std::uint64_t plaquette_mask(int plaquette) const;

  nlohmann::json to_json() const;

 private:
  int Lx_;
  int Ly_;
  Boundary bc_x_;
  Boundary bc_y_;
  std::vector<Link> links_;
  std::vector<std::array<int, 2>> site_links_;  // [x-link, y-link] per site, -1 if absent
  std::vector<std::vector<int>> stars_;
  std::vector<std::array<int, 4>> plaquettes_;
  std::vector<Site> plaquette_origins_;
  std::vector<std::uint64_t> star_masks_;
  std::vector<std::uint64_t> plaquette_masks_;
};

inline LatticeGeometry build_geometry(int Lx, int Ly, Boundary bc_x, Boundary bc_y) {
  return LatticeGeometry(Lx, Ly, bc_x, bc_y);
}

}  // namespace z2lgt
