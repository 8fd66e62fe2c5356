#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "evans/continuation.hpp"
#include "evans/linalg.hpp"
#include "evans/ode.hpp"
#include "evans/systems.hpp"
#include "evans/wedge.hpp"

namespace evans {

enum class Variant { drury, davey, damped_drury, damped_davey, bridges_reich, exterior };
enum class Side { minus, plus };

inline bool davey_family(Variant v) {
  return v == Variant::davey || v == Variant::damped_davey;
}

inline std::string variant_name(Variant v) {
  switch (v) {
    case Variant::drury: return "drury";
    case Variant::davey: return "davey";
    case Variant::damped_drury: return "damped-drury";
    case Variant::damped_davey: return "damped-davey";
    case Variant::bridges_reich: return "bridges-reich";
    case Variant::exterior: return "exterior";
  }
  return "?";
}

struct SchemeConfig {
  Variant variant = Variant::drury;
  double c = 0.0;          // damping constant, >= 0
  double abs_tol = 1e-8;
  double rel_tol = 1e-6;
  double drift_tol = 1e-6; // max allowed Stiefel error at x = 0
  bool drift_fatal = true; // throw (true) or record-and-continue (false)
};

// Per-side initialization data at the numerical infinity.
struct SideInit {
  Side side = Side::minus;
  CMatrix W_frame;    // analytic frame spanning the relevant subspace of A+-
  CMatrix omega_inf;  // orthonormal frame for the same subspace
  CMatrix alpha_inf;  // omega_inf^* W_frame
  Complex gamma_inf;  // det(alpha_inf)
  Complex mu_inf;     // trace(omega_inf^* A+- omega_inf): the rescale exponent
};

struct PolarState {
  CMatrix omega;
  Complex gamma_tilde;
};

struct EvansSample {
  Complex lambda;
  Complex D;
  int mesh_minus = 0;
  int mesh_plus = 0;
  double stiefel_minus = 0.0;
  double stiefel_plus = 0.0;
  SchemeConfig scheme;
};

inline Half side_half(Side s) {
  // minus side carries the unstable subspace of A-, plus side the stable of A+.
  return s == Side::minus ? Half::unstable : Half::stable;
}

inline int side_dim(const SpectralProblem& prob, Side s) {
  return s == Side::minus ? prob.n - prob.k : prob.k;
}

inline CMatrix side_limit(const SpectralProblem& prob, Complex lambda, Side s) {
  return s == Side::minus ? prob.A_minus(lambda) : prob.A_plus(lambda);
}

// Orthonormalize the analytic frame and record the connector alpha, radius
// gamma and the frozen rescale exponent mu.
inline SideInit init_side(const SpectralProblem& prob, Complex lambda, Side side,
                          const CMatrix& W_frame) {
  if (W_frame.rows() != prob.n || W_frame.cols() != side_dim(prob, side))
    throw DimensionError("init_side: frame has wrong shape");
  SideInit init;
  init.side = side;
  init.W_frame = W_frame;
  try {
    init.omega_inf = thin_qr(W_frame).Q;
  } catch (const RankError&) {
    throw InitError("init_side: frame does not span a subspace of full dimension");
  }
  init.alpha_inf = init.omega_inf.adjoint() * W_frame;
  init.gamma_inf = det(init.alpha_inf);
  const CMatrix Apm = side_limit(prob, lambda, side);
  init.mu_inf = (init.omega_inf.adjoint() * Apm * init.omega_inf).trace();
  return init;
}

// Angular right-hand side for each orthogonalization variant. All variants
// coincide on the Stiefel manifold Omega*Omega = I.
inline CMatrix omega_rhs(Variant v, const CMatrix& A, const CMatrix& Omega, double c) {
  const Eigen::Index m = Omega.cols();
  switch (v) {
    case Variant::drury: {
      CMatrix AO = A * Omega;
      return AO - Omega * (Omega.adjoint() * AO);
    }
    case Variant::davey: {
      CMatrix AO = A * Omega;
      return AO - Omega * (generalized_inverse(Omega) * AO);
    }
    case Variant::damped_drury: {
      CMatrix AO = A * Omega;
      return AO - Omega * (Omega.adjoint() * AO) +
             c * Omega * (CMatrix::Identity(m, m) - Omega.adjoint() * Omega);
    }
    case Variant::damped_davey: {
      CMatrix AO = A * Omega;
      return AO - Omega * (generalized_inverse(Omega) * AO) +
             c * Omega * (CMatrix::Identity(m, m) - Omega.adjoint() * Omega);
    }
    case Variant::bridges_reich: {
      // M = (I - Omega Omega*) A; skew part applied to Omega, sign fixed so the
      // flow matches Drury on the manifold.
      CMatrix M = A - Omega * (Omega.adjoint() * A);
      return (M - M.adjoint()) * Omega +
             c * Omega * (CMatrix::Identity(m, m) - Omega.adjoint() * Omega);
    }
    case Variant::exterior:
      throw ParameterError("omega_rhs: exterior scheme has no angular equation");
  }
  throw ParameterError("omega_rhs: unknown variant");
}

// Rescaled radial equation gamma' = (trace(O A Omega) - mu_inf) gamma, with
// O = Omega* for the Drury family and the generalized inverse for Davey.
inline Complex gamma_rhs(Variant v, const CMatrix& A, const CMatrix& Omega,
                         Complex mu_inf, Complex gamma) {
  CMatrix AO = A * Omega;
  Complex tr;
  if (davey_family(v))
    tr = (generalized_inverse(Omega) * AO).trace();
  else
    tr = (Omega.adjoint() * AO).trace();
  return (tr - mu_inf) * gamma;
}

struct OmegaSample {
  double x;
  CMatrix omega;
};

struct SideShot {
  PolarState state;
  int mesh_points = 0;
  int rejected_steps = 0;
  double min_step = 0.0;
  double stiefel = 0.0;
};

namespace detail {

inline CVector pack_polar(const CMatrix& Omega, Complex gamma) {
  const Eigen::Index nm = Omega.size();
  CVector y(nm + 1);
  Eigen::Map<CMatrix>(y.data(), Omega.rows(), Omega.cols()) = Omega;
  y(nm) = gamma;
  return y;
}

}  // namespace detail

// Integrate the stacked polar state (Omega, gamma~) from x = -+M to 0.
// Omega and gamma~ share one adaptive mesh, so the mesh count matches the
// per-side cost of the scheme. The damping constant is oriented with the
// integration direction: the plus side traverses decreasing x, where the
// written +c term would repel from the Stiefel manifold instead of attracting.
inline SideShot shoot_side(const SpectralProblem& prob, Complex lambda, Side side,
                           const SchemeConfig& cfg, const SideInit& init,
                           std::vector<OmegaSample>* trajectory = nullptr) {
  const int n = prob.n;
  const auto m = init.omega_inf.cols();
  const double x_start = (side == Side::minus) ? -prob.M : prob.M;
  const double c_oriented = (side == Side::minus) ? cfg.c : -cfg.c;
  const CVector y0 = detail::pack_polar(init.omega_inf, init.gamma_inf);
  const Complex mu = init.mu_inf;

  auto rhs = [&](double x, const CVector& y) -> CVector {
    Eigen::Map<const CMatrix> Omega(y.data(), n, m);
    const CMatrix A = prob.A(x, lambda);
    CMatrix dOmega = omega_rhs(cfg.variant, A, Omega, c_oriented);
    Complex dgamma = gamma_rhs(cfg.variant, A, Omega, mu, y(n * m));
    return detail::pack_polar(dOmega, dgamma);
  };
  auto observe = [&](double x, const CVector& y) {
    if (trajectory)
      trajectory->push_back({x, CMatrix(Eigen::Map<const CMatrix>(y.data(), n, m))});
  };

  IntegrationResult r =
      integrate_adaptive(rhs, x_start, 0.0, y0, cfg.abs_tol, cfg.rel_tol, observe);

  SideShot shot;
  shot.state.omega = Eigen::Map<const CMatrix>(r.final_state.data(), n, m);
  shot.state.gamma_tilde = r.final_state(n * m);
  shot.mesh_points = r.mesh_points;
  shot.rejected_steps = r.rejected_steps;
  shot.min_step = r.min_step;
  shot.stiefel = stiefel_error(shot.state.omega);
  if (shot.stiefel > cfg.drift_tol && cfg.drift_fatal)
    throw StiefelDrift("shoot_side: Stiefel error " + std::to_string(shot.stiefel) +
                       " above drift tolerance at x = 0");
  return shot;
}

// Evans value by the polar-coordinate method:
// D = gamma~+ gamma~- det(Omega+ | Omega-) at x = 0.
inline EvansSample evans_polar(const SpectralProblem& prob, Complex lambda,
                               const SchemeConfig& cfg, const CMatrix& W_minus,
                               const CMatrix& W_plus) {
  if (W_minus.cols() + W_plus.cols() != prob.n)
    throw DimensionError("evans_polar: frame column counts must sum to n");
  const SideInit init_m = init_side(prob, lambda, Side::minus, W_minus);
  const SideInit init_p = init_side(prob, lambda, Side::plus, W_plus);
  const SideShot shot_m = shoot_side(prob, lambda, Side::minus, cfg, init_m);
  const SideShot shot_p = shoot_side(prob, lambda, Side::plus, cfg, init_p);

  CMatrix block(prob.n, prob.n);
  block << shot_p.state.omega, shot_m.state.omega;
  EvansSample sample;
  sample.lambda = lambda;
  sample.D = shot_p.state.gamma_tilde * shot_m.state.gamma_tilde * det(block);
  sample.mesh_minus = shot_m.mesh_points;
  sample.mesh_plus = shot_p.mesh_points;
  sample.stiefel_minus = shot_m.stiefel;
  sample.stiefel_plus = shot_p.stiefel;
  sample.scheme = cfg;
  return sample;
}

// Evans value by the exterior-product baseline: integrate the compound-lifted
// system with the same frozen rescale exponent and pair the two sides at x = 0.
inline EvansSample evans_exterior(const SpectralProblem& prob, Complex lambda,
                                  const SchemeConfig& cfg, const CMatrix& W_minus,
                                  const CMatrix& W_plus) {
  if (W_minus.cols() + W_plus.cols() != prob.n)
    throw DimensionError("evans_exterior: frame column counts must sum to n");
  EvansSample sample;
  sample.lambda = lambda;
  sample.scheme = cfg;

  CVector y_at_zero[2];
  for (Side side : {Side::minus, Side::plus}) {
    const CMatrix& W = (side == Side::minus) ? W_minus : W_plus;
    const SideInit init = init_side(prob, lambda, side, W);
    const int m = static_cast<int>(W.cols());
    const Complex mu = init.mu_inf;
    const double x_start = (side == Side::minus) ? -prob.M : prob.M;
    const CVector y0 = minors_vector(W).coords;
    auto rhs = [&](double x, const CVector& y) -> CVector {
      return compound_lift(prob.A(x, lambda), m) * y - mu * y;
    };
    IntegrationResult r =
        integrate_adaptive(rhs, x_start, 0.0, y0, cfg.abs_tol, cfg.rel_tol);
    y_at_zero[side == Side::minus ? 0 : 1] = r.final_state;
    (side == Side::minus ? sample.mesh_minus : sample.mesh_plus) = r.mesh_points;
  }
  WedgeVector u{prob.n, prob.k, y_at_zero[1]};
  WedgeVector v{prob.n, prob.n - prob.k, y_at_zero[0]};
  sample.D = wedge_pair(u, v);
  return sample;
}

inline EvansSample evans_eval(const SpectralProblem& prob, Complex lambda,
                              const SchemeConfig& cfg, const CMatrix& W_minus,
                              const CMatrix& W_plus) {
  return cfg.variant == Variant::exterior
             ? evans_exterior(prob, lambda, cfg, W_minus, W_plus)
             : evans_polar(prob, lambda, cfg, W_minus, W_plus);
}

// Radial variable by quadrature instead of the ODE: composite Simpson on the
// stored mesh for gamma~(0) = exp(int trace(Omega* A Omega) - mu_inf dx) gamma_inf.
// The mesh runs from +-M toward 0, so the signed spacing carries the
// orientation of the integral.
inline Complex radial_quadrature(const std::vector<OmegaSample>& trajectory,
                                 const SpectralProblem& prob, Complex lambda,
                                 Side /*side*/, const SideInit& init) {
  const std::size_t N = trajectory.size();
  if (N < 3) throw QuadratureError("radial_quadrature: need at least 3 samples");
  std::vector<Complex> f(N);
  for (std::size_t i = 0; i < N; ++i) {
    const CMatrix& O = trajectory[i].omega;
    f[i] = (O.adjoint() * prob.A(trajectory[i].x, lambda) * O).trace() - init.mu_inf;
  }
  Complex integral(0.0, 0.0);
  std::size_t i = 0;
  while (i + 2 < N) {
    const double h0 = trajectory[i + 1].x - trajectory[i].x;
    const double h1 = trajectory[i + 2].x - trajectory[i + 1].x;
    integral += (h0 + h1) / 6.0 *
                ((2.0 - h1 / h0) * f[i] +
                 (h0 + h1) * (h0 + h1) / (h0 * h1) * f[i + 1] +
                 (2.0 - h0 / h1) * f[i + 2]);
    i += 2;
  }
  if (i + 1 < N) {
    const double h = trajectory[i + 1].x - trajectory[i].x;
    integral += 0.5 * h * (f[i] + f[i + 1]);
  }
  return init.gamma_inf * std::exp(integral);
}

}  // namespace evans
