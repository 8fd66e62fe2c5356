#pragma once

#include <utility>
#include <vector>

#include "evans/linalg.hpp"

namespace evans {

// Ordered sample points of a path in lambda; closed paths connect the last
// point back to the first.
struct LambdaPath {
  std::vector<Complex> points;
  bool closed = false;
};

// One node of an analytically continued family: the eigenprojection P at
// lambda and a frame W whose columns span Range P.
struct AnalyticFrame {
  Complex lambda;
  CMatrix W;
  CMatrix P;
};

// Spectral projection onto the stable/unstable invariant subspace,
// P = R (L* R)^{-1} L* with R, L orthonormal bases of the right and left
// invariant subspaces.
inline CMatrix eigenprojection(const CMatrix& A, Half half, double gap_tol = 1e-8) {
  detail::HalfBasis right = detail::schur_half_basis(A, half, gap_tol);
  detail::HalfBasis leftb =
      detail::schur_half_basis(CMatrix(A.adjoint()), half, gap_tol);
  const Eigen::Index n = A.rows();
  if (right.basis.cols() == 0) return CMatrix::Zero(n, n);
  CMatrix M = leftb.basis.adjoint() * right.basis;
  Eigen::JacobiSVD<CMatrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  // With orthonormal L and R, sigma_max <= 1 and ||P|| = 1/sigma_min, so the
  // pairing condition is 1/sigma_min.
  if (s(s.size() - 1) <= 1e-12 * std::max(1.0, s(0)))
    throw ProjectionConditionError(
        "eigenprojection: left/right pairing is ill conditioned");
  return right.basis * svd.solve(leftb.basis.adjoint());
}

// One first-order Kato step from the frame W at projection P0 to the
// projection P1: W1 = W + [dP, P0] W, optionally re-projected onto Range P1.
inline CMatrix kato_step(const CMatrix& W, const CMatrix& P0, const CMatrix& P1,
                         bool reproject = true) {
  CMatrix dP = P1 - P0;
  const double gap = dP.norm();
  if (gap >= 0.5)
    throw ProjectionGapError("kato_step: projection increment >= 0.5; path too coarse");
  if (gap == 0.0) return W;
  CMatrix W1 = W + (dP * P0 - P0 * dP) * W;
  if (reproject) W1 = P1 * W1;
  return W1;
}

// Continue W from (lam0, P0) to (lam1, P1), bisecting the segment in lambda
// until every projection increment is comfortably below the kato_step gap
// bound. proj(lambda) supplies fresh projections at inserted points. A genuine
// discontinuity (eigenvalue collision between the halves) exhausts the depth
// and surfaces as ProjectionGapError from the final kato_step.
template <class ProjFn>
CMatrix kato_segment(const CMatrix& W, const CMatrix& P0, Complex lam0,
                     const CMatrix& P1, Complex lam1, ProjFn&& proj,
                     bool reproject = true, int depth = 0) {
  if ((P1 - P0).norm() < 0.35 || depth >= 16)
    return kato_step(W, P0, P1, reproject);
  const Complex lm = 0.5 * (lam0 + lam1);
  const CMatrix Pm = proj(lm);
  const CMatrix Wm = kato_segment(W, P0, lam0, Pm, lm, proj, reproject, depth + 1);
  return kato_segment(Wm, Pm, lm, P1, lam1, proj, reproject, depth + 1);
}

// Euler continuation of a frame along a sequence of projections. The output
// frame sequence has the same length as the input and starts at R0.
inline std::vector<CMatrix> kato_continue(const std::vector<CMatrix>& projections,
                                          const CMatrix& R0, bool reproject = true) {
  if (projections.empty())
    throw ParameterError("kato_continue: need at least one projection");
  std::vector<CMatrix> frames;
  frames.reserve(projections.size());
  frames.push_back(R0);
  for (std::size_t j = 0; j + 1 < projections.size(); ++j)
    frames.push_back(kato_step(frames.back(), projections[j], projections[j + 1],
                               reproject));
  return frames;
}

// Deterministic orthonormal frame spanning Range P; real whenever P is real,
// so the Evans function stays real along real-axis scans of real systems.
inline CMatrix initial_frame(const CMatrix& P) {
  const Eigen::Index n = P.rows();
  const auto m = static_cast<Eigen::Index>(std::llround(P.trace().real()));
  if (m <= 0 || m > n) throw RankError("initial_frame: projection rank out of range");
  if (P.imag().norm() <= 1e-12 * P.norm()) {
    Eigen::ColPivHouseholderQR<RMatrix> qr(P.real());
    RMatrix Q = qr.householderQ() * RMatrix::Identity(n, m);
    return thin_qr(Q.cast<Complex>()).Q;
  }
  Eigen::ColPivHouseholderQR<CMatrix> qr(P);
  CMatrix Q = qr.householderQ() * CMatrix::Identity(n, m);
  return thin_qr(Q).Q;
}

}  // namespace evans
