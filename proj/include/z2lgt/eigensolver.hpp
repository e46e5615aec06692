#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <cstdint>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace z2lgt {

/// Anything that can multiply a block of column vectors by a fixed
/// Hermitian matrix of size dimension() x dimension().
template <class Op>
concept HermitianOperator = requires(const Op& op,
                                     const Eigen::Matrix<typename Op::Scalar, Eigen::Dynamic,
                                                         Eigen::Dynamic>& x,
                                     Eigen::Matrix<typename Op::Scalar, Eigen::Dynamic,
                                                   Eigen::Dynamic>& y) {
  typename Op::Scalar;
  { op.dimension() } -> std::convertible_to<Eigen::Index>;
  op.apply(x, y);
};

struct SolverOptions {
  double tol = 1e-10;          // absolute residual bound ||H psi - E psi||
  int max_iter = 2000;         // operator applications per column, summed over the block
  std::uint64_t seed = 12345;  // start block drawn from mt19937_64(seed)
  Eigen::Index dense_limit = 4096;
  double gap_tol = 1e-8;
  int block_size = 0;          // 0: chosen from the number of requested levels
  int krylov_dim = 0;          // 0: chosen from block size and level count
  std::ostream* log = nullptr; // CSV convergence log: iteration,ritz_value,residual
};

template <class Scalar>
struct GroundStateResult {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  double energy = 0.0;
  Vector state;
  double residual = 0.0;
  int iterations = 0;
  bool degenerate = false;
  bool converged = false;
  /// Estimated distance to the next level, or +inf for a 1-dimensional space.
  double gap = 0.0;
};

template <class Scalar>
struct SpectrumResult {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::VectorXd energies;  // ascending, with multiplicity
  Matrix vectors;            // column i belongs to energies[i]
  Eigen::VectorXd residuals;
  int iterations = 0;
  bool converged = false;
};

/// Wraps a dense self-adjoint matrix as an operator.
template <class ScalarT>
class DenseOperator {
 public:
  using Scalar = ScalarT;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  explicit DenseOperator(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("DenseOperator needs a square matrix");
  }
  Eigen::Index dimension() const { return m_.rows(); }
  void apply(const Eigen::Ref<const Matrix>& x, Eigen::Ref<Matrix> y) const { y.noalias() = m_ * x; }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

namespace detail {

/// Uniform in [-1, 1) from the raw 64-bit stream; independent of the
/// standard library's distribution implementations.
inline double uniform_pm1(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-52 - 1.0;
}

template <class Scalar>
Scalar random_scalar(std::mt19937_64& gen) {
  if constexpr (Eigen::NumTraits<Scalar>::IsComplex) {
    using Real = typename Eigen::NumTraits<Scalar>::Real;
    const Real re = static_cast<Real>(uniform_pm1(gen));
    const Real im = static_cast<Real>(uniform_pm1(gen));
    return Scalar(re, im);
  } else {
    return static_cast<Scalar>(uniform_pm1(gen));
  }
}

template <class Matrix>
void fill_random(Eigen::DenseBase<Matrix>& m, std::mt19937_64& gen) {
  using Scalar = typename Matrix::Scalar;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = random_scalar<Scalar>(gen);
  }
}

template <class Op>
SpectrumResult<typename Op::Scalar> dense_spectrum(const Op& op, Eigen::Index k) {
  using Scalar = typename Op::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = op.dimension();
  Matrix h(n, n);
  {
    Matrix id = Matrix::Identity(n, n);
    op.apply(id, h);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  SpectrumResult<Scalar> out;
  out.energies = es.eigenvalues().head(k).template cast<double>();
  out.vectors = es.eigenvectors().leftCols(k);
  out.residuals.resize(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    out.residuals[i] = static_cast<double>(
        (h * out.vectors.col(i) - es.eigenvalues()[i] * out.vectors.col(i)).norm());
  }
  out.iterations = static_cast<int>(n);
  out.converged = true;
  return out;
}

/// Block Lanczos with full reorthogonalization and thick restart.
///
/// The projected matrix is kept dense: every new block is projected against
/// the whole basis (classical Gram-Schmidt, two passes), so after a restart
/// the Ritz vectors' couplings to the next block are recovered without
/// bookkeeping. The first `nconv` of the `nev` lowest Ritz pairs must reach
/// the residual bound.
template <class Op>
SpectrumResult<typename Op::Scalar> block_lanczos(const Op& op, Eigen::Index nev,
                                                   Eigen::Index nconv, const SolverOptions& opt) {
  using Scalar = typename Op::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using RealVector = Eigen::Matrix<typename Eigen::NumTraits<Scalar>::Real, Eigen::Dynamic, 1>;

  const Eigen::Index n = op.dimension();
  Eigen::Index b = opt.block_size > 0 ? opt.block_size : std::min<Eigen::Index>(nev, 32);
  b = std::max<Eigen::Index>(1, std::min(b, n));
  Eigen::Index m = opt.krylov_dim > 0 ? opt.krylov_dim
                                      : std::max<Eigen::Index>(2 * nev + 4 * b, 30);
  m = std::min(m, n);
  if (m < nev + b && m < n) {
    throw std::invalid_argument("krylov_dim too small for the requested levels and block size");
  }
  const Eigen::Index keep = std::min(m - b, std::max(nev, (m - b) / 2));

  std::mt19937_64 gen(opt.seed);
  Matrix V(n, m);
  Matrix T = Matrix::Zero(m, m);
  double anorm = 0.0;

  // Orthonormalize the columns of `block` against V[:, 0:j] and each other.
  // With `projected` set the block is already orthogonal to V, and V is only
  // revisited when the in-block projection cancels most of a column.
  // Columns that collapse are replaced by fresh random directions.
  auto orthonormalize = [&](Matrix& block, Eigen::Index j, bool projected) {
    for (Eigen::Index c = 0; c < block.cols(); ++c) {
      for (int attempt = 0;; ++attempt) {
        auto v = block.col(c);
        const double before = static_cast<double>(v.norm());
        const bool skip_v = projected && attempt == 0;
        for (int pass = 0; pass < 2; ++pass) {
          if (j > 0 && !skip_v) v -= V.leftCols(j) * (V.leftCols(j).adjoint() * v);
          if (c > 0) v -= block.leftCols(c) * (block.leftCols(c).adjoint() * v);
        }
        if (skip_v && j > 0 && static_cast<double>(v.norm()) < 0.5 * before) {
          for (int pass = 0; pass < 2; ++pass) {
            v -= V.leftCols(j) * (V.leftCols(j).adjoint() * v);
            if (c > 0) v -= block.leftCols(c) * (block.leftCols(c).adjoint() * v);
          }
        }
        const double nrm = static_cast<double>(v.norm());
        const double floor = 1e-13 * std::max({anorm, before, 1e-300});
        if (nrm > floor && nrm > 0.0) {
          v /= static_cast<typename Eigen::NumTraits<Scalar>::Real>(nrm);
          break;
        }
        if (attempt > 8 || j + c >= n) throw std::runtime_error("block_lanczos: basis exhausted");
        for (Eigen::Index r = 0; r < n; ++r) v[r] = random_scalar<Scalar>(gen);
      }
    }
  };

  Matrix start(n, b);
  fill_random(start, gen);
  orthonormalize(start, 0, false);
  V.leftCols(b) = start;
  Eigen::Index act = 0;  // first column of the active block
  Eigen::Index j = b;    // basis size

  SpectrumResult<Scalar> out;
  int matvecs = 0;
  int step = 0;
  Matrix W(n, b);
  Eigen::SelfAdjointEigenSolver<Matrix> es;
  RealVector theta;
  Matrix S;
  Eigen::VectorXd res;

  auto collect = [&](bool converged) {
    const Eigen::Index k = std::min<Eigen::Index>(nev, j);
    out.energies = theta.head(k).template cast<double>();
    out.vectors = V.leftCols(j) * S.leftCols(k);
    out.residuals = res.head(k);
    out.iterations = matvecs;
    out.converged = converged;
  };

  while (true) {
    const Eigen::Index bs = j - act;
    W.resize(n, bs);
    op.apply(V.middleCols(act, bs), W);
    matvecs += static_cast<int>(bs);

    Matrix h = V.leftCols(j).adjoint() * W;
    W.noalias() -= V.leftCols(j) * h;
    Matrix h2 = V.leftCols(j).adjoint() * W;
    W.noalias() -= V.leftCols(j) * h2;
    h += h2;
    T.block(0, act, j, bs) = h;
    T.block(act, 0, bs, j) = h.adjoint();
    T.block(act, act, bs, bs) = (h.bottomRows(bs) + h.bottomRows(bs).adjoint()) / Scalar(2);

    es.compute(T.topLeftCorner(j, j));
    theta = es.eigenvalues();
    S = es.eigenvectors();
    anorm = std::max({anorm, std::abs(static_cast<double>(theta[0])),
                      std::abs(static_cast<double>(theta[j - 1]))});

    const Matrix gram = W.adjoint() * W;
    const Eigen::Index nres = std::min<Eigen::Index>(nev, j);
    res.resize(nres);
    for (Eigen::Index i = 0; i < nres; ++i) {
      const auto s = S.col(i).segment(act, bs);
      res[i] = std::sqrt(std::max(0.0, static_cast<double>(std::real((s.adjoint() * gram * s)(0, 0)))));
    }
    ++step;
    if (opt.log) *opt.log << step << ',' << static_cast<double>(theta[0]) << ',' << res[0] << '\n';

    const bool enough = j >= nev || j >= n;
    const Eigen::Index need = std::min(nconv, nres);
    bool done = enough && (res.head(need).array() <= opt.tol).all();
    if (done) {
      collect(true);
      // Confirm with true residuals; the recurrence estimate can drift.
      Matrix hv(n, out.vectors.cols());
      op.apply(out.vectors, hv);
      for (Eigen::Index i = 0; i < out.vectors.cols(); ++i) {
        out.residuals[i] = static_cast<double>(
            (hv.col(i) - static_cast<Scalar>(out.energies[i]) * out.vectors.col(i)).norm());
      }
      if ((out.residuals.head(need).array() <= opt.tol).all()) return out;
      done = false;
    }
    if (j >= n) {
      // Whole space spanned: Ritz pairs are exact up to rounding.
      collect(true);
      return out;
    }
    if (matvecs >= opt.max_iter) {
      collect(false);
      return out;
    }

    Matrix next = W;
    if (j + bs > m) {
      V.leftCols(keep) = V.leftCols(j) * S.leftCols(keep);
      T.setZero();
      T.topLeftCorner(keep, keep).diagonal() = theta.head(keep).template cast<Scalar>();
      j = keep;
    }
    const Eigen::Index nb = std::min(bs, n - j);
    next.conservativeResize(n, nb);
    orthonormalize(next, j, true);
    V.middleCols(j, nb) = next;
    act = j;
    j += nb;
  }
}

}  // namespace detail

/// Lowest `k` eigenpairs, repeated eigenvalues included with multiplicity
/// (resolved as long as the block size is at least the multiplicity).
/// Dense diagonalization is used up to `dense_limit`.
template <HermitianOperator Op>
SpectrumResult<typename Op::Scalar> low_spectrum(const Op& op, Eigen::Index k,
                                                 const SolverOptions& opt = {}) {
  const Eigen::Index n = op.dimension();
  if (k < 1 || k > n) {
    throw std::invalid_argument("low_spectrum: requested " + std::to_string(k) +
                                " levels of a " + std::to_string(n) + "-dimensional operator");
  }
  if (!(opt.tol > 0.0)) throw std::invalid_argument("low_spectrum: tol must be positive");
  if (n <= opt.dense_limit) return detail::dense_spectrum(op, k);
  SolverOptions o = opt;
  if (o.block_size == 0) o.block_size = static_cast<int>(std::min<Eigen::Index>(k, 32));
  return detail::block_lanczos(op, k, k, o);
}

/// Ground state with a two-column block so that an exactly degenerate
/// ground space is detected.
template <HermitianOperator Op>
GroundStateResult<typename Op::Scalar> ground_state(const Op& op, const SolverOptions& opt = {}) {
  using Scalar = typename Op::Scalar;
  const Eigen::Index n = op.dimension();
  if (n < 1) throw std::invalid_argument("ground_state: empty operator");
  if (!(opt.tol > 0.0)) throw std::invalid_argument("ground_state: tol must be positive");

  const Eigen::Index levels = std::min<Eigen::Index>(2, n);
  SpectrumResult<Scalar> spec;
  if (n <= opt.dense_limit) {
    spec = detail::dense_spectrum(op, levels);
  } else {
    SolverOptions o = opt;
    if (o.block_size == 0) o.block_size = 2;
    spec = detail::block_lanczos(op, levels, 1, o);
  }
  GroundStateResult<Scalar> r;
  r.energy = spec.energies[0];
  r.state = spec.vectors.col(0);
  r.residual = spec.residuals[0];
  r.iterations = spec.iterations;
  r.converged = spec.converged;
  r.gap = levels > 1 ? spec.energies[1] - spec.energies[0]
                     : std::numeric_limits<double>::infinity();
  r.degenerate = r.gap < opt.gap_tol;
  return r;
}

}  // namespace z2lgt
