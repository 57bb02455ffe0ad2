// superop.hpp — vectorized superoperator algebra on finite Hilbert spaces
//
// Convention (fixed for the whole library): operators are vectorized by
// column stacking, vec(X)[i + j*d] = X(i, j). Under this convention the map
// X -> A X B has matrix kron(B^T, A). Bipartite operators live on A ⊗ B with
// the A index major: (X_A ⊗ X_B)(iA*dB + iB, jA*dB + jB) = X_A(iA,jA) X_B(iB,jB).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "aecp/errors.hpp"
#include "aecp/tolerances.hpp"

namespace aecp {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using Operator = Eigen::MatrixXcd;
using OpVector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx>;
using Triplet = Eigen::Triplet<cplx>;

inline constexpr cplx kI{0.0, 1.0};

inline OpVector vectorize(const Operator& X) {
  if (X.rows() != X.cols()) {
    throw DimensionMismatch("vectorize: operator is not square");
  }
  return Eigen::Map<const OpVector>(X.data(), X.size());
}

inline Operator devectorize(const Eigen::Ref<const OpVector>& v, Index dim) {
  if (dim <= 0 || v.size() != dim * dim) {
    throw DimensionMismatch("devectorize: vector length " + std::to_string(v.size()) +
                            " is not " + std::to_string(dim) + "^2");
  }
  return Eigen::Map<const Operator>(v.data(), dim, dim);
}

/// Matrix unit |i><j| on a d-dimensional space.
inline Operator matrix_unit(Index d, Index i, Index j) {
  Operator E = Operator::Zero(d, d);
  E(i, j) = 1.0;
  return E;
}

inline SparseMatrix to_sparse(const Eigen::MatrixXcd& m, double drop = 0.0) {
  SparseMatrix s = m.sparseView(1.0, drop);
  s.makeCompressed();
  return s;
}

/// Linear map between operator spaces, stored as a sparse matrix acting on
/// column-stacked operators. dim_in/dim_out are Hilbert-space dimensions;
/// the matrix is dim_out^2 x dim_in^2.
class SuperOperator {
 public:
  SuperOperator() = default;

  SuperOperator(Index dim_in, Index dim_out, SparseMatrix m)
      : dim_in_(dim_in), dim_out_(dim_out), m_(std::move(m)) {
    if (m_.rows() != dim_out_ * dim_out_ || m_.cols() != dim_in_ * dim_in_) {
      throw DimensionMismatch("SuperOperator: matrix shape does not match operator dims");
    }
    m_.makeCompressed();
  }

  static SuperOperator from_dense(Index dim_in, Index dim_out, const Eigen::MatrixXcd& m) {
    return {dim_in, dim_out, to_sparse(m)};
  }

  /// Square map on a d-dimensional Hilbert space.
  static SuperOperator from_dense(Index dim, const Eigen::MatrixXcd& m) {
    return from_dense(dim, dim, m);
  }

  static SuperOperator identity(Index dim) {
    SparseMatrix id(dim * dim, dim * dim);
    id.setIdentity();
    return {dim, dim, std::move(id)};
  }

  static SuperOperator zero(Index dim_in, Index dim_out) {
    return {dim_in, dim_out, SparseMatrix(dim_out * dim_out, dim_in * dim_in)};
  }

  Index dim_in() const { return dim_in_; }
  Index dim_out() const { return dim_out_; }
  Index space_in() const { return dim_in_ * dim_in_; }
  Index space_out() const { return dim_out_ * dim_out_; }
  bool is_square() const { return dim_in_ == dim_out_; }

  const SparseMatrix& matrix() const { return m_; }
  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(m_); }

  OpVector apply(const OpVector& v) const {
    if (v.size() != space_in()) throw DimensionMismatch("SuperOperator::apply: input size");
    return m_ * v;
  }

  Operator apply(const Operator& X) const {
    if (X.rows() != dim_in_ || X.cols() != dim_in_) {
      throw DimensionMismatch("SuperOperator::apply: operator dims");
    }
    return devectorize(m_ * vectorize(X), dim_out_);
  }

  /// Frobenius norm of the matrix representation.
  double norm() const { return m_.norm(); }

  SuperOperator& operator+=(const SuperOperator& o) {
    check_same(o);
    m_ += o.m_;
    return *this;
  }
  SuperOperator& operator-=(const SuperOperator& o) {
    check_same(o);
    m_ -= o.m_;
    return *this;
  }
  SuperOperator& operator*=(cplx c) {
    m_ *= c;
    return *this;
  }

  friend SuperOperator operator+(SuperOperator a, const SuperOperator& b) { return a += b; }
  friend SuperOperator operator-(SuperOperator a, const SuperOperator& b) { return a -= b; }
  friend SuperOperator operator*(cplx c, SuperOperator a) { return a *= c; }
  friend SuperOperator operator*(double c, SuperOperator a) { return a *= cplx(c, 0.0); }

  /// Composition: (a * b)(X) = a(b(X)).
  friend SuperOperator operator*(const SuperOperator& a, const SuperOperator& b) {
    if (a.dim_in_ != b.dim_out_) throw DimensionMismatch("SuperOperator composition");
    SparseMatrix m = (a.m_ * b.m_).pruned();
    return {b.dim_in_, a.dim_out_, std::move(m)};
  }

 private:
  void check_same(const SuperOperator& o) const {
    if (dim_in_ != o.dim_in_ || dim_out_ != o.dim_out_) {
      throw DimensionMismatch("SuperOperator: mismatched operands");
    }
  }

  Index dim_in_ = 0;
  Index dim_out_ = 0;
  SparseMatrix m_;
};

namespace detail {

inline SparseMatrix sparse_kron(const SparseMatrix& a, const SparseMatrix& b) {
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(a.nonZeros() * b.nonZeros()));
  for (Index ka = 0; ka < a.outerSize(); ++ka) {
    for (SparseMatrix::InnerIterator ia(a, ka); ia; ++ia) {
      for (Index kb = 0; kb < b.outerSize(); ++kb) {
        for (SparseMatrix::InnerIterator ib(b, kb); ib; ++ib) {
          trips.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
                             ia.value() * ib.value());
        }
      }
    }
  }
  SparseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

inline void require_square(const Operator& X, const char* where) {
  if (X.rows() != X.cols()) throw DimensionMismatch(std::string(where) + ": operator not square");
}

}  // namespace detail

/// Kronecker product of dense operators, A index major.
inline Operator kron(const Operator& a, const Operator& b) {
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// X -> A X B.
inline SuperOperator sandwich_superop(const Operator& A, const Operator& B) {
  detail::require_square(A, "sandwich_superop");
  detail::require_square(B, "sandwich_superop");
  if (A.rows() != B.rows()) throw DimensionMismatch("sandwich_superop: A and B differ in size");
  const SparseMatrix bt = to_sparse(B.transpose());
  const SparseMatrix a = to_sparse(A);
  return {A.rows(), A.rows(), detail::sparse_kron(bt, a)};
}

/// H^×(X) = H X - X H. The -i of a Hamiltonian term is applied by callers.
inline SuperOperator commutator_superop(const Operator& H) {
  detail::require_square(H, "commutator_superop");
  const Operator id = Operator::Identity(H.rows(), H.cols());
  return sandwich_superop(H, id) - sandwich_superop(id, H);
}

/// D[L](X) = L X L† - (L†L X + X L†L)/2.
inline SuperOperator dissipator_superop(const Operator& L) {
  detail::require_square(L, "dissipator_superop");
  const Operator id = Operator::Identity(L.rows(), L.cols());
  const Operator LdL = L.adjoint() * L;
  SuperOperator out = sandwich_superop(L, L.adjoint());
  out -= 0.5 * sandwich_superop(LdL, id);
  out -= 0.5 * sandwich_superop(id, LdL);
  return out;
}

/// -i H^×.
inline SuperOperator hamiltonian_superop(const Operator& H) {
  return cplx(0.0, -1.0) * commutator_superop(H);
}

/// Index bookkeeping for the bipartite space A ⊗ B.
struct Bipartite {
  Index dim_A;
  Index dim_B;

  Index dim() const { return dim_A * dim_B; }

  /// Position of |iA iB><jA jB| in the composite column-stacked vector.
  Index vec_index(Index iA, Index jA, Index iB, Index jB) const {
    const Index row = iA * dim_B + iB;
    const Index col = jA * dim_B + jB;
    return row + col * dim();
  }
};

/// S ⊗ I_B.
inline SuperOperator lift_A(const SuperOperator& S, Index dim_B) {
  if (!S.is_square()) throw DimensionMismatch("lift_A: map must be square");
  const Bipartite bp{S.dim_in(), dim_B};
  const Index dA = bp.dim_A;
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(S.matrix().nonZeros() * dim_B * dim_B));
  const SparseMatrix& m = S.matrix();
  for (Index k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      const Index iA = it.row() % dA, jA = it.row() / dA;
      const Index kA = it.col() % dA, lA = it.col() / dA;
      for (Index jB = 0; jB < dim_B; ++jB) {
        for (Index iB = 0; iB < dim_B; ++iB) {
          trips.emplace_back(bp.vec_index(iA, jA, iB, jB), bp.vec_index(kA, lA, iB, jB),
                             it.value());
        }
      }
    }
  }
  SparseMatrix out(bp.dim() * bp.dim(), bp.dim() * bp.dim());
  out.setFromTriplets(trips.begin(), trips.end());
  return {bp.dim(), bp.dim(), std::move(out)};
}

/// I_A ⊗ S.
inline SuperOperator lift_B(const SuperOperator& S, Index dim_A) {
  if (!S.is_square()) throw DimensionMismatch("lift_B: map must be square");
  const Bipartite bp{dim_A, S.dim_in()};
  const Index dB = bp.dim_B;
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(S.matrix().nonZeros() * dim_A * dim_A));
  const SparseMatrix& m = S.matrix();
  for (Index k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      const Index iB = it.row() % dB, jB = it.row() / dB;
      const Index kB = it.col() % dB, lB = it.col() / dB;
      for (Index jA = 0; jA < dim_A; ++jA) {
        for (Index iA = 0; iA < dim_A; ++iA) {
          trips.emplace_back(bp.vec_index(iA, jA, iB, jB), bp.vec_index(iA, jA, kB, lB),
                             it.value());
        }
      }
    }
  }
  SparseMatrix out(bp.dim() * bp.dim(), bp.dim() * bp.dim());
  out.setFromTriplets(trips.begin(), trips.end());
  return {bp.dim(), bp.dim(), std::move(out)};
}

/// tr_A: composite operators -> operators on B.
inline SuperOperator partial_trace_A(Index dim_A, Index dim_B) {
  if (dim_A <= 0 || dim_B <= 0) throw DimensionMismatch("partial_trace_A: dims must be positive");
  const Bipartite bp{dim_A, dim_B};
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(dim_A * dim_B * dim_B));
  for (Index jB = 0; jB < dim_B; ++jB) {
    for (Index iB = 0; iB < dim_B; ++iB) {
      for (Index k = 0; k < dim_A; ++k) {
        trips.emplace_back(iB + jB * dim_B, bp.vec_index(k, k, iB, jB), 1.0);
      }
    }
  }
  SparseMatrix out(dim_B * dim_B, bp.dim() * bp.dim());
  out.setFromTriplets(trips.begin(), trips.end());
  return {bp.dim(), dim_B, std::move(out)};
}

/// X_B -> rho_A ⊗ X_B.
inline SuperOperator attach_state_A(const Operator& rho_A, Index dim_B) {
  detail::require_square(rho_A, "attach_state_A");
  const Bipartite bp{rho_A.rows(), dim_B};
  std::vector<Triplet> trips;
  for (Index jB = 0; jB < dim_B; ++jB) {
    for (Index iB = 0; iB < dim_B; ++iB) {
      for (Index jA = 0; jA < bp.dim_A; ++jA) {
        for (Index iA = 0; iA < bp.dim_A; ++iA) {
          if (rho_A(iA, jA) != cplx(0.0)) {
            trips.emplace_back(bp.vec_index(iA, jA, iB, jB), iB + jB * dim_B, rho_A(iA, jA));
          }
        }
      }
    }
  }
  SparseMatrix out(bp.dim() * bp.dim(), dim_B * dim_B);
  out.setFromTriplets(trips.begin(), trips.end());
  return {dim_B, bp.dim(), std::move(out)};
}

/// Row vector v with v · vec(X) = tr X.
inline OpVector trace_functional(Index dim) {
  OpVector v = OpVector::Zero(dim * dim);
  for (Index k = 0; k < dim; ++k) v(k + k * dim) = 1.0;
  return v;
}

/// max_X |tr S(X)| over matrix units, relative to ‖S‖.
inline double trace_annihilation_defect(const SuperOperator& S) {
  const OpVector t = trace_functional(S.dim_out());
  const Eigen::RowVectorXcd row = t.transpose() * S.matrix();
  return row.cwiseAbs().maxCoeff();
}

inline bool is_trace_annihilating(const SuperOperator& S, double rel_tol = 1e-12) {
  return trace_annihilation_defect(S) <= rel_tol * std::max(1.0, S.norm());
}

inline bool is_trace_preserving(const SuperOperator& S, double tol = 1e-10) {
  const OpVector tin = trace_functional(S.dim_in());
  const OpVector tout = trace_functional(S.dim_out());
  const Eigen::RowVectorXcd row = tout.transpose() * S.matrix();
  return (row - tin.transpose()).cwiseAbs().maxCoeff() <= tol;
}

/// max over matrix units of ‖S(E_ij)† - S(E_ji)‖, which vanishes iff S(X†) = S(X)†.
inline double hermiticity_defect(const SuperOperator& S) {
  const Index d = S.dim_in();
  double worst = 0.0;
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < d; ++i) {
      const Operator a = S.apply(matrix_unit(d, i, j)).adjoint();
      const Operator b = S.apply(matrix_unit(d, j, i));
      worst = std::max(worst, (a - b).norm());
    }
  }
  return worst;
}

inline bool is_hermiticity_preserving(const SuperOperator& S, double rel_tol = 1e-10) {
  return hermiticity_defect(S) <= rel_tol * std::max(1.0, S.norm());
}

// ---------------------------------------------------------------------------
// Spectra

struct SpectralData {
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd right_eigenvectors;  // columns
  std::optional<Index> zero_index;
  Index zero_count = 0;
};

/// Dense eigendecomposition. With require_simple_zero, exactly one eigenvalue
/// within tol.zero·‖S‖ of zero is demanded and every other one must satisfy
/// Re λ < -tol.gap·‖S‖.
inline SpectralData spectrum(const SuperOperator& S, bool require_simple_zero = false,
                             const Tolerances& tol = default_tolerances()) {
  if (!S.is_square()) throw DimensionMismatch("spectrum: map must be square");
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(S.dense(), true);
  if (es.info() != Eigen::Success) throw Error("spectrum: eigensolver did not converge");
  SpectralData out{es.eigenvalues(), es.eigenvectors(), std::nullopt, 0};
  const double scale = std::max(S.dense().norm(), 1e-300);
  double best = std::numeric_limits<double>::infinity();
  bool gap_ok = true;
  for (Index k = 0; k < out.eigenvalues.size(); ++k) {
    const double mag = std::abs(out.eigenvalues(k));
    if (mag <= tol.zero * scale) {
      ++out.zero_count;
      if (mag < best) {
        best = mag;
        out.zero_index = k;
      }
    } else if (out.eigenvalues(k).real() >= -tol.gap * scale) {
      gap_ok = false;
    }
  }
  if (require_simple_zero && (out.zero_count != 1 || !gap_ok)) {
    throw ZeroNotSimple("spectrum: " + std::to_string(out.zero_count) +
                        " eigenvalues near zero" + (gap_ok ? "" : ", spectral gap violated"));
  }
  return out;
}

/// Spectral projector onto the zero eigenvector, r ℓ† with ℓ† r = 1, where ℓ
/// is the corresponding row of the inverse eigenvector matrix.
inline Eigen::MatrixXcd kernel_projector(const SpectralData& sd) {
  if (!sd.zero_index) throw ZeroNotSimple("kernel_projector: no zero eigenvalue");
  const Index z = *sd.zero_index;
  const Eigen::MatrixXcd inv = sd.right_eigenvectors.inverse();
  return sd.right_eigenvectors.col(z) * inv.row(z);
}

/// Least-squares solve of S X = Y followed by removal of the component
/// selected by `projector` (X <- X - projector(X)). The projector must map
/// into ker S so that the residual is unchanged.
template <class Projector>
OpVector constrained_solve(const SuperOperator& S, const OpVector& Y, Projector&& projector,
                           const Tolerances& tol = default_tolerances()) {
  if (Y.size() != S.space_out()) throw DimensionMismatch("constrained_solve: rhs size");
  const double ynorm = Y.norm();
  if (ynorm == 0.0) return OpVector::Zero(S.space_in());
  const Eigen::MatrixXcd dense = S.dense();
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(dense);
  cod.setThreshold(tol.zero);
  OpVector X = cod.solve(Y);
  X -= projector(X);
  const double res = (dense * X - Y).norm();
  if (!(res <= tol.residual * ynorm)) {
    throw NotSolvable("constrained_solve: residual " + std::to_string(res) + " exceeds " +
                      std::to_string(tol.residual * ynorm));
  }
  return X;
}

inline OpVector constrained_solve(const SuperOperator& S, const OpVector& Y,
                                  const Eigen::MatrixXcd& projector,
                                  const Tolerances& tol = default_tolerances()) {
  return constrained_solve(
      S, Y, [&](const OpVector& x) -> OpVector { return projector * x; }, tol);
}

/// Sparse solver for a trace-annihilating generator with a simple zero
/// eigenvalue. Factorizes the bordered matrix [[S, t], [t^T, 0]] where t is
/// the trace functional; this is non-singular exactly when the kernel of S is
/// one-dimensional and its element has non-zero trace.
///   steady_state(): S x = 0, tr x = 1
///   solve(y):       S x = y, tr x = 0   (requires tr y = 0)
class TraceConstrainedSolver {
 public:
  explicit TraceConstrainedSolver(const SuperOperator& S,
                                  const Tolerances& tol = default_tolerances())
      : S_(S.matrix()), dim_(S.dim_in()), tol_(tol) {
    if (!S.is_square()) throw DimensionMismatch("TraceConstrainedSolver: map must be square");
    const Index n = S.space_in();
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(S_.nonZeros() + 2 * dim_));
    for (Index k = 0; k < S_.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(S_, k); it; ++it) {
        trips.emplace_back(it.row(), it.col(), it.value());
      }
    }
    for (Index k = 0; k < dim_; ++k) {
      trips.emplace_back(k + k * dim_, n, 1.0);
      trips.emplace_back(n, k + k * dim_, 1.0);
    }
    bordered_.resize(n + 1, n + 1);
    bordered_.setFromTriplets(trips.begin(), trips.end());
    bordered_.makeCompressed();
    lu_.analyzePattern(bordered_);
    lu_.factorize(bordered_);
    if (lu_.info() != Eigen::Success) {
      throw ZeroNotSimple("TraceConstrainedSolver: bordered generator is singular");
    }
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n + 1);
    rhs(n) = 1.0;
    const Eigen::VectorXcd sol = lu_.solve(rhs);
    steady_ = sol.head(n);
    const double res = (S_ * steady_).norm();
    const double scale = std::max(S_.norm(), 1e-300);
    if (!std::isfinite(steady_.norm()) || res > tol_.residual * scale * steady_.norm() ||
        std::abs(sol(n)) > tol_.residual * scale) {
      throw ZeroNotSimple("TraceConstrainedSolver: kernel is not one-dimensional");
    }
  }

  Index dim() const { return dim_; }
  const OpVector& steady_state() const { return steady_; }

  OpVector solve(const OpVector& y) const {
    const Index n = y.size();
    if (n != dim_ * dim_) throw DimensionMismatch("TraceConstrainedSolver::solve: rhs size");
    const double ynorm = y.norm();
    if (ynorm == 0.0) return OpVector::Zero(n);
    Eigen::VectorXcd rhs(n + 1);
    rhs.head(n) = y;
    rhs(n) = 0.0;
    const Eigen::VectorXcd sol = lu_.solve(rhs);
    OpVector x = sol.head(n);
    const double res = (S_ * x - y).norm();
    if (!(res <= tol_.residual * ynorm)) {
      std::ostringstream msg;
      msg << "TraceConstrainedSolver::solve: residual " << res << " exceeds " << tol_.residual * ynorm
          << " (trace of rhs " << std::abs(rhs.head(n).dot(trace_functional(dim_))) << ", multiplier "
          << std::abs(sol(n)) << ")";
      throw NotSolvable(msg.str());
    }
    return x;
  }

 private:
  SparseMatrix S_;
  Index dim_;
  Tolerances tol_;
  SparseMatrix bordered_;
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
  OpVector steady_;
};

/// Solves (S ⊗ I_B) X = Y blockwise with tr_A X = 0, using a solver for S.
/// Both X and Y are column-stacked composite operators on A ⊗ B.
inline OpVector solve_lifted(const TraceConstrainedSolver& solver, Index dim_B,
                             const OpVector& Y) {
  const Bipartite bp{solver.dim(), dim_B};
  if (Y.size() != bp.dim() * bp.dim()) throw DimensionMismatch("solve_lifted: rhs size");
  const Index dA = bp.dim_A;
  OpVector X = OpVector::Zero(Y.size());
  OpVector block(dA * dA);
  // blocks at rounding level relative to Y are zero up to noise with
  // non-zero trace, which the bordered solve cannot absorb
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * Y.norm();
  for (Index jB = 0; jB < dim_B; ++jB) {
    for (Index iB = 0; iB < dim_B; ++iB) {
      for (Index jA = 0; jA < dA; ++jA) {
        for (Index iA = 0; iA < dA; ++iA) block(iA + jA * dA) = Y(bp.vec_index(iA, jA, iB, jB));
      }
      if (block.norm() <= floor) continue;
      const OpVector xb = solver.solve(block);
      for (Index jA = 0; jA < dA; ++jA) {
        for (Index iA = 0; iA < dA; ++iA) X(bp.vec_index(iA, jA, iB, jB)) = xb(iA + jA * dA);
      }
    }
  }
  return X;
}

/// Induced 2-norm of a dense matrix, via the smaller Gram matrix.
inline double operator_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  const Eigen::MatrixXcd gram = (m.cols() <= m.rows()) ? Eigen::MatrixXcd(m.adjoint() * m)
                                                       : Eigen::MatrixXcd(m * m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

/// Smallest eigenvalue of the Hermitian part of X.
inline double min_eigenvalue(const Operator& X) {
  const Operator h = 0.5 * (X + X.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline bool is_hermitian(const Operator& X, double rel_tol = 1e-10) {
  return (X - X.adjoint()).norm() <= rel_tol * std::max(1.0, X.norm());
}

}  // namespace aecp
