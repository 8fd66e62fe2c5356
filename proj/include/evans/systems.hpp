#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>

#include "evans/linalg.hpp"

namespace evans {

// An asymptotically constant-coefficient eigenvalue ODE W_x = A(x, lambda) W,
// with stable-subspace dimension k at +infinity and truncation point +-M.
struct SpectralProblem {
  int n = 0;
  int k = 0;
  double M = 0.0;
  std::function<CMatrix(double, Complex)> A;
  std::function<CMatrix(Complex)> A_minus;
  std::function<CMatrix(Complex)> A_plus;
  std::map<std::string, double> params;
};

struct BoussinesqParams {
  double s = 0.4;  // wave speed, |s| < 1
};

struct ProfileValues {
  double u;
  double ux;
  double uxx;
};

inline void check_wave_speed(double s) {
  if (!(std::abs(s) < 1.0))
    throw ParameterError("boussinesq: wave speed must satisfy |s| < 1, got s = " +
                         std::to_string(s));
}

// Solitary-wave profile u(xi) = (3/2)(1-s^2) sech^2(sqrt(1-s^2) xi / 2) and its
// first two derivatives in closed form.
inline ProfileValues boussinesq_profile(double xi, double s) {
  check_wave_speed(s);
  const double a = 1.5 * (1.0 - s * s);
  const double b = 0.5 * std::sqrt(1.0 - s * s);
  const double sech = 1.0 / std::cosh(b * xi);
  const double th = std::tanh(b * xi);
  ProfileValues p;
  p.u = a * sech * sech;
  p.ux = -2.0 * a * b * sech * sech * th;
  p.uxx = -2.0 * a * b * b * sech * sech * (sech * sech - 2.0 * th * th);
  return p;
}

// First-order companion form of the linearized good Boussinesq operator:
// rows 1-3 shift, bottom row (-l^2 - 2 u_xx, 2 l s - 4 u_x, (1-s^2) - 2 u, 0).
inline CMatrix boussinesq_A(double x, Complex lambda, double s) {
  const ProfileValues p = boussinesq_profile(x, s);
  CMatrix A = CMatrix::Zero(4, 4);
  A(0, 1) = 1.0;
  A(1, 2) = 1.0;
  A(2, 3) = 1.0;
  A(3, 0) = -lambda * lambda - 2.0 * p.uxx;
  A(3, 1) = 2.0 * lambda * s - 4.0 * p.ux;
  A(3, 2) = (1.0 - s * s) - 2.0 * p.u;
  return A;
}

inline CMatrix boussinesq_A_limit(Complex lambda, double s) {
  check_wave_speed(s);
  CMatrix A = CMatrix::Zero(4, 4);
  A(0, 1) = 1.0;
  A(1, 2) = 1.0;
  A(2, 3) = 1.0;
  A(3, 0) = -lambda * lambda;
  A(3, 1) = 2.0 * lambda * s;
  A(3, 2) = 1.0 - s * s;
  return A;
}

inline SpectralProblem boussinesq_problem(double s) {
  check_wave_speed(s);
  SpectralProblem prob;
  prob.n = 4;
  prob.k = 2;
  prob.M = 8.0;
  prob.A = [s](double x, Complex lambda) { return boussinesq_A(x, lambda, s); };
  prob.A_minus = [s](Complex lambda) { return boussinesq_A_limit(lambda, s); };
  prob.A_plus = prob.A_minus;
  prob.params["s"] = s;
  return prob;
}

// Constant-coefficient fixture: A(x, lambda) = A0 - lambda I for all x.
inline SpectralProblem constant_problem(const CMatrix& A0, int k) {
  if (A0.rows() != A0.cols())
    throw DimensionError("constant_problem: matrix must be square");
  const int n = static_cast<int>(A0.rows());
  if (k < 1 || k > n - 1)
    throw ParameterError("constant_problem: need 1 <= k <= n-1");
  SpectralProblem prob;
  prob.n = n;
  prob.k = k;
  prob.M = 8.0;
  auto limit = [A0](Complex lambda) -> CMatrix {
    return A0 - lambda * CMatrix::Identity(A0.rows(), A0.cols());
  };
  prob.A = [limit](double, Complex lambda) { return limit(lambda); };
  prob.A_minus = limit;
  prob.A_plus = limit;
  return prob;
}

// CLI registry. "constant" is a test fixture with a fixed separated spectrum.
inline SpectralProblem make_system(const std::string& name,
                                   const std::map<std::string, double>& params) {
  if (name == "boussinesq") {
    double s = 0.4;
    if (auto it = params.find("s"); it != params.end()) s = it->second;
    return boussinesq_problem(s);
  }
  if (name == "constant") {
    CMatrix A0 = CMatrix::Zero(4, 4);
    A0(0, 0) = -1.0;
    A0(1, 1) = -2.0;
    A0(2, 2) = 1.0;
    A0(3, 3) = 2.0;
    return constant_problem(A0, 2);
  }
  throw ParameterError("unknown system '" + name + "' (available: boussinesq, constant)");
}

}  // namespace evans
