#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "evans/errors.hpp"

namespace evans {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

// Split M into Hermitian part H = (M+M*)/2 and skew-Hermitian part K = (M-M*)/2.
inline std::pair<CMatrix, CMatrix> hermitian_split(const CMatrix& M) {
  if (M.rows() != M.cols())
    throw DimensionError("hermitian_split: matrix must be square");
  CMatrix H = 0.5 * (M + M.adjoint());
  CMatrix K = M - H;
  return {std::move(H), std::move(K)};
}

struct ThinQR {
  CMatrix Q;  // n x k, orthonormal columns
  CMatrix R;  // k x k upper triangular, diag(R) real and nonnegative
};

// Thin QR factorization with a fixed gauge: the diagonal of R is real >= 0.
inline ThinQR thin_qr(const CMatrix& W) {
  const Eigen::Index n = W.rows(), k = W.cols();
  if (n < k) throw DimensionError("thin_qr: need rows >= cols");
  Eigen::HouseholderQR<CMatrix> qr(W);
  CMatrix Q = qr.householderQ() * CMatrix::Identity(n, k);
  CMatrix R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  const double scale = W.norm();
  for (Eigen::Index i = 0; i < k; ++i) {
    const double d = std::abs(R(i, i));
    if (d <= 1e-13 * scale)
      throw RankError("thin_qr: input is rank deficient (|R(" + std::to_string(i) +
                      "," + std::to_string(i) + ")| = " + std::to_string(d) + ")");
    const Complex phase = R(i, i) / d;
    Q.col(i) *= phase;
    R.row(i) *= std::conj(phase);
    R(i, i) = d;
  }
  return {std::move(Q), std::move(R)};
}

// Determinant via pivoted LU. Singular input returns a value of ~zero magnitude.
inline Complex det(const CMatrix& M) {
  if (M.rows() != M.cols()) throw DimensionError("det: matrix must be square");
  if (M.rows() == 0) return Complex(1.0, 0.0);
  return M.determinant();
}

// Moore-Penrose inverse (Omega* Omega)^{-1} Omega* of a full-column-rank matrix.
inline CMatrix generalized_inverse(const CMatrix& Omega) {
  Eigen::JacobiSVD<CMatrix> svd(Omega, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const Eigen::Index k = s.size();
  if (k == 0 || s(0) <= 0.0 || s(k - 1) <= 1e-13 * s(0))
    throw RankError("generalized_inverse: rank-deficient input");
  return svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
}

// Squared Frobenius distance of Omega*Omega from the identity.
inline double stiefel_error(const CMatrix& Omega) {
  const Eigen::Index k = Omega.cols();
  return (Omega.adjoint() * Omega - CMatrix::Identity(k, k)).squaredNorm();
}

enum class Half { stable, unstable };

struct SubspaceFrame {
  CMatrix basis;             // n x m, orthonormal columns spanning the invariant subspace
  CMatrix left;              // m x n dual rows, left * basis = I_m
  Complex trace_restriction; // sum of the eigenvalues of the restriction
};

namespace detail {

// Swap the adjacent diagonal entries p, p+1 of a complex Schur form (T, U)
// by a unitary similarity that keeps T upper triangular.
inline void schur_swap(CMatrix& T, CMatrix& U, Eigen::Index p) {
  const Complex l1 = T(p, p), l2 = T(p + 1, p + 1), t = T(p, p + 1);
  Complex v0 = t, v1 = l2 - l1;
  const double nv = std::sqrt(std::norm(v0) + std::norm(v1));
  if (nv == 0.0) return;  // equal eigenvalues: nothing to move
  v0 /= nv;
  v1 /= nv;
  Eigen::Matrix2cd G;
  G << v0, -std::conj(v1),
       v1, std::conj(v0);
  T.middleRows(p, 2) = (G.adjoint() * T.middleRows(p, 2)).eval();
  T.middleCols(p, 2) = (T.middleCols(p, 2) * G).eval();
  U.middleCols(p, 2) = (U.middleCols(p, 2) * G).eval();
  T(p + 1, p) = 0.0;
}

inline bool in_half(const Complex& mu, Half half) {
  return half == Half::stable ? mu.real() < 0.0 : mu.real() > 0.0;
}

struct HalfBasis {
  CMatrix basis;    // n x m orthonormal
  Complex eig_sum;  // sum of the selected eigenvalues
};

// Orthonormal basis of the invariant subspace of A associated with the
// eigenvalues in the chosen open half plane, via a reordered Schur form.
inline HalfBasis schur_half_basis(const CMatrix& A, Half half, double gap_tol) {
  if (A.rows() != A.cols())
    throw DimensionError("invariant_subspace: matrix must be square");
  Eigen::ComplexSchur<CMatrix> schur(A, /*computeU=*/true);
  if (schur.info() != Eigen::Success)
    throw EigenFailure("invariant_subspace: Schur iteration did not converge");
  CMatrix T = schur.matrixT();
  CMatrix U = schur.matrixU();
  const Eigen::Index n = A.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(T(i, i).real()) < gap_tol)
      throw SpectralSeparationFailure(
          "invariant_subspace: eigenvalue with |Re mu| = " +
          std::to_string(std::abs(T(i, i).real())) + " below gap tolerance " +
          std::to_string(gap_tol));
  }
  // Bubble the selected eigenvalues to the leading diagonal positions.
  Eigen::Index front = 0;
  while (true) {
    Eigen::Index j = front;
    while (j < n && !in_half(T(j, j), half)) ++j;
    if (j == n) break;
    for (Eigen::Index q = j; q > front; --q) schur_swap(T, U, q - 1);
    ++front;
  }
  Complex sum(0.0, 0.0);
  for (Eigen::Index i = 0; i < front; ++i) sum += T(i, i);
  return {U.leftCols(front), sum};
}

}  // namespace detail

// Basis of the stable (Re mu < 0) or unstable (Re mu > 0) invariant subspace of A,
// together with the dual left basis and the trace of the restriction. Eigenvalues
// with |Re mu| < gap_tol violate consistent splitting and fail loudly.
inline SubspaceFrame invariant_subspace(const CMatrix& A, Half half,
                                        double gap_tol = 1e-8) {
  detail::HalfBasis right = detail::schur_half_basis(A, half, gap_tol);
  detail::HalfBasis leftb =
      detail::schur_half_basis(CMatrix(A.adjoint()), half, gap_tol);
  if (leftb.basis.cols() != right.basis.cols())
    throw EigenFailure("invariant_subspace: left/right dimension mismatch");
  SubspaceFrame frame;
  frame.basis = std::move(right.basis);
  frame.trace_restriction = right.eig_sum;
  if (frame.basis.cols() > 0) {
    CMatrix M = leftb.basis.adjoint() * frame.basis;
    frame.left = M.partialPivLu().solve(leftb.basis.adjoint());
  } else {
    frame.left = CMatrix::Zero(0, A.rows());
  }
  return frame;
}

}  // namespace evans
