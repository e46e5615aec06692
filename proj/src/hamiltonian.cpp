#include "z2lgt/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace z2lgt {

ChargeConfig::ChargeConfig(std::vector<int> q) : q_(std::move(q)) {
  for (int v : q_) {
    if (v != 1 && v != -1) throw std::invalid_argument("charges must be +1 or -1");
  }
}

void ChargeConfig::set(int site, int value) {
  if (value != 1 && value != -1) throw std::invalid_argument("charges must be +1 or -1");
  q_.at(site) = value;
}

int ChargeConfig::num_charges() const {
  return static_cast<int>(std::count(q_.begin(), q_.end(), -1));
}

ChargeConfig vacuum_charges(const LatticeGeometry& geometry) {
  return ChargeConfig(geometry.num_sites());
}

ChargeConfig two_charge_config(const LatticeGeometry& geometry, Site r1, Site r2) {
  const int a = geometry.site_index(r1);
  const int b = geometry.site_index(r2);
  if (a == b) throw std::invalid_argument("static charges must sit on distinct sites");
  ChargeConfig q(geometry.num_sites());
  q.set(a, -1);
  q.set(b, -1);
  return q;
}

SectorCheck validate_sector(const LatticeGeometry& geometry, const ChargeConfig& charges) {
  if (charges.size() != geometry.num_sites()) {
    return {false, "charge configuration has " + std::to_string(charges.size()) +
                       " entries for " + std::to_string(geometry.num_sites()) + " sites"};
  }
  if (geometry.is_torus() && charges.num_charges() % 2 != 0) {
    return {false, "odd number of static charges (" + std::to_string(charges.num_charges()) +
                       ") on a torus violates the global parity constraint"};
  }
  return {};
}

Basis Basis::full(int num_links) {
  if (num_links < 0 || num_links > HamiltonianOperator::kMaxFullBasisLinks) {
    throw std::invalid_argument("full basis over " + std::to_string(num_links) +
                                " links is too large");
  }
  Basis b;
  b.full_ = true;
  b.num_links_ = num_links;
  b.dim_ = Eigen::Index{1} << num_links;
  return b;
}

Basis Basis::listed(std::vector<BasisState> states) {
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  Basis b;
  b.full_ = false;
  b.dim_ = static_cast<Eigen::Index>(states.size());
  b.states_ = std::move(states);
  return b;
}

Eigen::Index Basis::find(BasisState s) const {
  if (full_) return (s >> num_links_) == 0 ? static_cast<Eigen::Index>(s) : -1;
  auto it = std::lower_bound(states_.begin(), states_.end(), s);
  if (it == states_.end() || *it != s) return -1;
  return static_cast<Eigen::Index>(it - states_.begin());
}

Basis star_sector(const LatticeGeometry& geometry, const std::vector<int>& stars) {
  const int n = geometry.num_links();
  if (static_cast<int>(stars.size()) != geometry.num_sites()) {
    throw std::invalid_argument("star pattern size does not match the number of sites");
  }
  // Rows: parity(mask & star_r) = rhs_r. Reduce to echelon form.
  std::vector<std::pair<BasisState, int>> rows;
  for (int r = 0; r < geometry.num_sites(); ++r) {
    rows.emplace_back(geometry.star_mask(r), stars[r] == -1 ? 1 : 0);
  }
  std::vector<int> pivot_cols;
  std::size_t rank = 0;
  for (int col = 0; col < n && rank < rows.size(); ++col) {
    const BasisState bit = BasisState{1} << col;
    std::size_t sel = rank;
    while (sel < rows.size() && !(rows[sel].first & bit)) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[rank], rows[sel]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i != rank && (rows[i].first & bit)) {
        rows[i].first ^= rows[rank].first;
        rows[i].second ^= rows[rank].second;
      }
    }
    pivot_cols.push_back(col);
    ++rank;
  }
  for (std::size_t i = rank; i < rows.size(); ++i) {
    if (rows[i].second) return Basis::listed({});  // inconsistent
  }

  BasisState particular = 0;
  for (std::size_t i = 0; i < rank; ++i) {
    if (rows[i].second) particular |= BasisState{1} << pivot_cols[i];
  }
  BasisState pivots = 0;
  for (int c : pivot_cols) pivots |= BasisState{1} << c;

  // One kernel vector per free column.
  std::vector<BasisState> kernel;
  for (int col = 0; col < n; ++col) {
    const BasisState bit = BasisState{1} << col;
    if (pivots & bit) continue;
    BasisState v = bit;
    for (std::size_t i = 0; i < rank; ++i) {
      if (rows[i].first & bit) v |= BasisState{1} << pivot_cols[i];
    }
    kernel.push_back(v);
  }
  if (kernel.size() > 26) throw std::invalid_argument("star sector too large to enumerate");

  std::vector<BasisState> states;
  states.reserve(std::size_t{1} << kernel.size());
  for (std::uint64_t combo = 0; combo < (std::uint64_t{1} << kernel.size()); ++combo) {
    BasisState s = particular;
    for (std::size_t k = 0; k < kernel.size(); ++k) {
      if ((combo >> k) & 1U) s ^= kernel[k];
    }
    states.push_back(s);
  }
  return Basis::listed(std::move(states));
}

Basis matter_free_sector(const LatticeGeometry& geometry, const ChargeConfig& charges) {
  return star_sector(geometry, charges.values());
}

HamiltonianOperator::HamiltonianOperator(LatticeGeometry geometry, Couplings couplings,
                                         ChargeConfig charges)
    : geometry_(std::move(geometry)),
      couplings_(std::move(couplings)),
      charges_(std::move(charges)),
      basis_(Basis::full(geometry_.num_links())) {
  init();
}

HamiltonianOperator::HamiltonianOperator(LatticeGeometry geometry, Couplings couplings,
                                         ChargeConfig charges, Basis basis)
    : geometry_(std::move(geometry)),
      couplings_(std::move(couplings)),
      charges_(std::move(charges)),
      basis_(std::move(basis)) {
  init();
}

void HamiltonianOperator::init() {
  if (charges_.size() != geometry_.num_sites()) {
    throw std::invalid_argument("charge configuration does not match the geometry");
  }
  for (double c : {couplings_.J_s, couplings_.J_p, couplings_.h_z, couplings_.h_x}) {
    if (!std::isfinite(c)) throw std::invalid_argument("couplings must be finite");
  }
  const auto& signs = couplings_.plaquette_signs;
  if (!signs.empty() && static_cast<int>(signs.size()) != geometry_.num_plaquettes()) {
    throw std::invalid_argument("plaquette_signs needs one entry per plaquette");
  }
  for (int s : signs) {
    if (s != 1 && s != -1) throw std::invalid_argument("plaquette signs must be +1 or -1");
  }

  if (couplings_.J_p != 0.0) {
    for (int p = 0; p < geometry_.num_plaquettes(); ++p) {
      const double sign = signs.empty() ? 1.0 : signs[p];
      flips_.emplace_back(geometry_.plaquette_mask(p), -couplings_.J_p * sign);
    }
  }
  if (couplings_.h_z != 0.0) {
    for (int b = 0; b < geometry_.num_links(); ++b) {
      flips_.emplace_back(BasisState{1} << b, -couplings_.h_z);
    }
  }

  const Eigen::Index dim = basis_.dimension();
  diagonal_.resize(dim);
  for (Eigen::Index i = 0; i < dim; ++i) diagonal_[i] = diagonal_energy(basis_.state(i));

  if (!basis_.is_full()) {
    row_start_.reserve(static_cast<std::size_t>(dim) + 1);
    row_start_.push_back(0);
    for (Eigen::Index i = 0; i < dim; ++i) {
      const BasisState s = basis_.state(i);
      for (const auto& [mask, amp] : flips_) {
        const Eigen::Index j = basis_.find(s ^ mask);
        if (j < 0) {
          throw std::invalid_argument(
              "restricted basis is not closed under the Hamiltonian's off-diagonal terms");
        }
        col_.push_back(j);
        val_.push_back(amp);
      }
      row_start_.push_back(static_cast<Eigen::Index>(col_.size()));
    }
  }
}

double HamiltonianOperator::diagonal_energy(BasisState state) const {
  double e = 0.0;
  for (int r = 0; r < geometry_.num_sites(); ++r) {
    e -= couplings_.J_s * charges_[r] * star_value(geometry_, r, state);
  }
  const int lines = std::popcount(state);
  e -= couplings_.h_x * (geometry_.num_links() - 2 * lines);
  return e;
}

void HamiltonianOperator::apply(const Eigen::Ref<const Matrix>& in, Eigen::Ref<Matrix> out) const {
  const Eigen::Index dim = dimension();
  if (in.rows() != dim || out.rows() != dim || in.cols() != out.cols()) {
    throw std::invalid_argument("apply: vector length " + std::to_string(in.rows()) +
                                " does not match operator dimension " + std::to_string(dim));
  }
  for (Eigen::Index c = 0; c < in.cols(); ++c) {
    const double* x = in.col(c).data();
    double* y = out.col(c).data();
    if (basis_.is_full()) {
      for (Eigen::Index i = 0; i < dim; ++i) {
        double acc = diagonal_[i] * x[i];
        for (const auto& [mask, amp] : flips_) acc += amp * x[i ^ static_cast<Eigen::Index>(mask)];
        y[i] = acc;
      }
    } else {
      for (Eigen::Index i = 0; i < dim; ++i) {
        double acc = diagonal_[i] * x[i];
        for (Eigen::Index k = row_start_[i]; k < row_start_[i + 1]; ++k) acc += val_[k] * x[col_[k]];
        y[i] = acc;
      }
    }
  }
}

Eigen::VectorXd HamiltonianOperator::apply(const Eigen::VectorXd& in) const {
  Eigen::VectorXd out(in.size());
  apply(in, out);
  return out;
}

double HamiltonianOperator::norm_bound() const {
  double off = 0.0;
  for (const auto& f : flips_) off += std::abs(f.second);
  return diagonal_.cwiseAbs().maxCoeff() + off;
}

BasisState links_to_state(const std::vector<int>& links) {
  BasisState s = 0;
  for (int b : links) {
    if (b < 0 || b >= 64) throw std::out_of_range("link index out of range");
    s |= BasisState{1} << b;
  }
  return s;
}

}  // namespace z2lgt
