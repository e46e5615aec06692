#include "z2lgt/lattice.hpp"

#include <algorithm>
#include <stdexcept>

namespace z2lgt {

std::string to_string(Boundary bc) { return bc == Boundary::Open ? "open" : "periodic"; }

Boundary boundary_from_string(const std::string& name) {
  if (name == "open") return Boundary::Open;
  if (name == "periodic") return Boundary::Periodic;
  throw std::invalid_argument("unknown boundary kind '" + name + "' (expected open|periodic)");
}

LatticeGeometry::LatticeGeometry(int Lx, int Ly, Boundary bc_x, Boundary bc_y)
    : Lx_(Lx), Ly_(Ly), bc_x_(bc_x), bc_y_(bc_y) {
  if (Lx < 2 || Ly < 2) {
    throw std::invalid_argument("lattice extents must be at least 2, got " + std::to_string(Lx) +
                                "x" + std::to_string(Ly));
  }
  const bool px = bc_x == Boundary::Periodic;
  const bool py = bc_y == Boundary::Periodic;

  site_links_.assign(num_sites(), {-1, -1});
  for (int y = 0; y < Ly; ++y) {
    for (int x = 0; x < Lx; ++x) {
      const int s = site_index(x, y);
      if (x + 1 < Lx || px) {
        site_links_[s][0] = static_cast<int>(links_.size());
        links_.push_back({s, site_index((x + 1) % Lx, y), Direction::X});
      }
      if (y + 1 < Ly || py) {
        site_links_[s][1] = static_cast<int>(links_.size());
        links_.push_back({s, site_index(x, (y + 1) % Ly), Direction::Y});
      }
    }
  }
  if (links_.size() > 64) throw std::invalid_argument("lattice has more than 64 links");

  stars_.resize(num_sites());
  for (int b = 0; b < num_links(); ++b) {
    stars_[links_[b].base].push_back(b);
    stars_[links_[b].head].push_back(b);
  }
  for (auto& star : stars_) std::sort(star.begin(), star.end());

  for (int y = 0; y < Ly; ++y) {
    for (int x = 0; x < Lx; ++x) {
      if (!(x + 1 < Lx || px) || !(y + 1 < Ly || py)) continue;
      const int bottom = site_links_[site_index(x, y)][0];
      const int top = site_links_[site_index(x, (y + 1) % Ly)][0];
      const int left = site_links_[site_index(x, y)][1];
      const int right = site_links_[site_index((x + 1) % Lx, y)][1];
      plaquettes_.push_back({bottom, top, left, right});
      plaquette_origins_.push_back({x, y});
    }
  }

  for (const auto& star : stars_) {
    std::uint64_t m = 0;
    for (int b : star) m |= std::uint64_t{1} << b;
    star_masks_.push_back(m);
  }
  for (const auto& p : plaquettes_) {
    std::uint64_t m = 0;
    for (int b : p) m |= std::uint64_t{1} << b;
    plaquette_masks_.push_back(m);
  }
}

int LatticeGeometry::site_index(Site s) const {
  if (!contains(s)) {
    throw std::out_of_range("site (" + std::to_string(s.x) + "," + std::to_string(s.y) +
                            ") outside the lattice");
  }
  return s.y * Lx_ + s.x;
}

Site LatticeGeometry::site(int index) const {
  if (index < 0 || index >= num_sites()) throw std::out_of_range("site index out of range");
  return {index % Lx_, index / Lx_};
}

const Link& LatticeGeometry::link(int index) const {
  if (index < 0 || index >= num_links()) throw std::out_of_range("link index out of range");
  return links_[index];
}

int LatticeGeometry::link_index(Site s, Direction dir) const {
  return site_links_[site_index(s)][static_cast<int>(dir)];
}

const std::vector<int>& LatticeGeometry::star_links(int site) const {
  if (site < 0 || site >= num_sites()) throw std::out_of_range("site index out of range");
  return stars_[site];
}

const std::array<int, 4>& LatticeGeometry::plaquette_links(int plaquette) const {
  if (plaquette < 0 || plaquette >= num_plaquettes()) {
    throw std::out_of_range("plaquette index out of range");
  }
  return plaquettes_[plaquette];
}

Site LatticeGeometry::plaquette_origin(int plaquette) const {
  plaquette_links(plaquette);
  return plaquette_origins_[plaquette];
}

std::uint64_t LatticeGeometry::star_mask(int site) const {
  star_links(site);
  return star_masks_[site];
}

std::uint64_t LatticeGeometry::plaquette_mask(int plaquette) const {
  plaquette_links(plaquette);
  return plaquette_masks_[plaquette];
}

nlohmann::json LatticeGeometry::to_json() const {
  nlohmann::json j;
  j["Lx"] = Lx_;
  j["Ly"] = Ly_;
  j["bc_x"] = to_string(bc_x_);
  j["bc_y"] = to_string(bc_y_);
  j["num_sites"] = num_sites();
  j["num_links"] = num_links();
  j["num_plaquettes"] = num_plaquettes();
  auto links = nlohmann::json::array();
  for (int b = 0; b < num_links(); ++b) {
    const auto& l = links_[b];
    const Site s = site(l.base);
    links.push_back({{"id", b},
                     {"base_x", s.x},
                     {"base_y", s.y},
                     {"direction", l.dir == Direction::X ? "x" : "y"},
                     {"sites", {l.base, l.head}}});
  }
  j["links"] = std::move(links);
  j["stars"] = stars_;
  auto plaqs = nlohmann::json::array();
  for (int p = 0; p < num_plaquettes(); ++p) {
    plaqs.push_back({{"id", p},
                     {"x", plaquette_origins_[p].x},
                     {"y", plaquette_origins_[p].y},
                     {"links", plaquettes_[p]}});
  }
  j["plaquettes"] = std::move(plaqs);
  return j;
}

}  // namespace z2lgt
