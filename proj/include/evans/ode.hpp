#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "evans/linalg.hpp"

namespace evans {

struct IntegrationResult {
  CVector final_state;
  int mesh_points = 0;     // accepted steps + 1
  int rejected_steps = 0;
  double min_step = 0.0;   // smallest accepted |h|
};

namespace detail {

// Dormand-Prince 5(4) embedded pair. The 5th-order solution is propagated;
// the weight differences e[] estimate the 4th-order local error. FSAL: the
// 7th stage at (x+h, y5) doubles as k1 of the next step.
struct Dopri5 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

template <class Rhs>
void dopri5_stages(Rhs&& rhs, double x, double h, const CVector& y, const CVector& k1,
                   CVector& k2, CVector& k3, CVector& k4, CVector& k5, CVector& k6,
                   CVector& k7, CVector& y5, CVector& errvec) {
  using T = Dopri5;
  k2 = rhs(x + T::c2 * h, (y + h * T::a21 * k1).eval());
  k3 = rhs(x + T::c3 * h, (y + h * (T::a31 * k1 + T::a32 * k2)).eval());
  k4 = rhs(x + T::c4 * h, (y + h * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3)).eval());
  k5 = rhs(x + T::c5 * h,
           (y + h * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4)).eval());
  k6 = rhs(x + h, (y + h * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 + T::a64 * k4 +
                            T::a65 * k5))
                      .eval());
  y5 = y + h * (T::b1 * k1 + T::b3 * k3 + T::b4 * k4 + T::b5 * k5 + T::b6 * k6);
  k7 = rhs(x + h, y5);
  errvec = h * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 + T::e6 * k6 +
                T::e7 * k7);
}

// Max over flattened real/imaginary components of |err| / (atol + rtol |y|).
inline double mixed_error_norm(const CVector& errvec, const CVector& ynew,
                               double abs_tol, double rel_tol) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < errvec.size(); ++i) {
    const double re = std::abs(errvec(i).real()) /
                      (abs_tol + rel_tol * std::abs(ynew(i).real()));
    const double im = std::abs(errvec(i).imag()) /
                      (abs_tol + rel_tol * std::abs(ynew(i).imag()));
    worst = std::max(worst, std::max(re, im));
  }
  return worst;
}

struct NullObserver {
  void operator()(double, const CVector&) const {}
};

}  // namespace detail

// Adaptive embedded 4(5) Runge-Kutta from x0 to exactly x1 (either direction).
// The local error per step obeys the component-wise mixed criterion
// abs_tol + rel_tol*|y|, applied to real and imaginary parts separately.
// The observer is called at x0 and after every accepted step.
template <class Rhs, class Observer>
IntegrationResult integrate_adaptive(Rhs&& rhs, double x0, double x1, const CVector& y0,
                                     double abs_tol, double rel_tol,
                                     Observer&& observe) {
  if (x0 == x1) throw ParameterError("integrate_adaptive: empty interval");
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
    throw ParameterError("integrate_adaptive: tolerances must be positive");
  const double dir = (x1 > x0) ? 1.0 : -1.0;
  const double span = std::abs(x1 - x0);

  CVector y = y0;
  double x = x0;
  double h = dir * span / 100.0;
  IntegrationResult res;
  res.rejected_steps = 0;
  res.min_step = std::numeric_limits<double>::infinity();
  int accepted = 0;

  observe(x, y);
  CVector k1 = rhs(x, y), k2, k3, k4, k5, k6, k7, y5, errvec;
  if (!k1.allFinite()) throw NonFiniteState("integrate_adaptive: rhs returned NaN/Inf");

  while (true) {
    if (std::abs(h) < 1e-14 * span)
      throw StepSizeUnderflow("integrate_adaptive: step size below 1e-14 * interval");
    bool last = false;
    if (dir * (x + h - x1) >= 0.0) {
      h = x1 - x;
      last = true;
    }
    detail::dopri5_stages(rhs, x, h, y, k1, k2, k3, k4, k5, k6, k7, y5, errvec);
    if (!k7.allFinite() || !y5.allFinite())
      throw NonFiniteState("integrate_adaptive: rhs returned NaN/Inf");
    const double err = detail::mixed_error_norm(errvec, y5, abs_tol, rel_tol);
    const double factor =
        std::clamp(0.75 * std::pow(std::max(err, 1e-300), -0.2), 0.2, 5.0);
    if (err <= 1.0) {
      x = last ? x1 : x + h;
      y.swap(y5);
      k1.swap(k7);  // FSAL
      ++accepted;
      res.min_step = std::min(res.min_step, std::abs(h));
      observe(x, y);
      if (last) break;
      h *= factor;
    } else {
      ++res.rejected_steps;
      h *= std::min(factor, 1.0);
    }
  }
  res.final_state = std::move(y);
  res.mesh_points = accepted + 1;
  return res;
}

template <class Rhs>
IntegrationResult integrate_adaptive(Rhs&& rhs, double x0, double x1, const CVector& y0,
                                     double abs_tol, double rel_tol) {
  return integrate_adaptive(std::forward<Rhs>(rhs), x0, x1, y0, abs_tol, rel_tol,
                            detail::NullObserver{});
}

// Fixed-step driver over the same 5th-order update (test hook for order checks).
template <class Rhs>
CVector integrate_fixed(Rhs&& rhs, double x0, double x1, const CVector& y0, int steps) {
  if (steps < 1) throw ParameterError("integrate_fixed: need at least one step");
  const double h = (x1 - x0) / steps;
  CVector y = y0, k1, k2, k3, k4, k5, k6, k7, y5, errvec;
  double x = x0;
  for (int i = 0; i < steps; ++i) {
    k1 = rhs(x, y);
    detail::dopri5_stages(rhs, x, h, y, k1, k2, k3, k4, k5, k6, k7, y5, errvec);
    y.swap(y5);
    x = x0 + (i + 1) * h;
  }
  return y;
}

}  // namespace evans
