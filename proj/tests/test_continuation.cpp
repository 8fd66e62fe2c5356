#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "evans/continuation.hpp"
#include "test_util.hpp"

using namespace evans;
using test_util::random_matrix;
using test_util::with_eigenvalues;

namespace {

// Rank-one rotating orthogonal projector onto span{(cos t, sin t)}.
CMatrix rotating_projector(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  CMatrix P(2, 2);
  P << c * c, c * s,
       c * s, s * s;
  return P;
}

std::vector<CMatrix> rotating_path(double theta0, double theta1, int steps) {
  std::vector<CMatrix> P;
  P.reserve(static_cast<std::size_t>(steps) + 1);
  for (int j = 0; j <= steps; ++j)
    P.push_back(rotating_projector(theta0 + (theta1 - theta0) * j / steps));
  return P;
}

// Analytic 4x4 family with separated spectrum on |lambda| <= 0.5.
CMatrix loop_matrix(const CMatrix& A1, Complex lambda) {
  CMatrix A0 = CMatrix::Zero(4, 4);
  A0(0, 0) = -1.0;
  A0(1, 1) = -2.0;
  A0(2, 2) = 1.0;
  A0(3, 3) = 1.5;
  return A0 + lambda * A1;
}

}  // namespace

TEST_CASE("eigenprojection basics") {
  CMatrix A = CMatrix::Zero(2, 2);
  A(0, 0) = -1.0;
  A(1, 1) = 2.0;
  const CMatrix P = eigenprojection(A, Half::stable);
  CMatrix expect = CMatrix::Zero(2, 2);
  expect(0, 0) = 1.0;
  CHECK((P - expect).norm() < 1e-13);
}

TEST_CASE("eigenprojection residuals and rank on random diagonalizable matrices") {
  for (int rep = 0; rep < 8; ++rep) {
    std::vector<Complex> eigs = {{-1.2, 0.4}, {-0.9, -1.1}, {1.4, 0.2}, {2.2, -0.6}, {0.7, 1.0}};
    const CMatrix A = with_eigenvalues(eigs);
    const CMatrix P = eigenprojection(A, Half::unstable);
    CHECK((P * P - P).norm() <= 1e-10);
    CHECK((A * P - P * A).norm() <= 1e-8 * A.norm());
    CHECK(std::abs(P.trace() - Complex(3.0, 0.0)) < 1e-8);  // rank = 3 unstable modes
  }
}

TEST_CASE("eigenprojection reports a tangent left/right pairing") {
  // eigenvalues +-eps with nearly parallel eigenvectors: cond(L*R) ~ 1/(2 eps)
  const double eps = 1e-13;
  CMatrix A(2, 2);
  A << -eps, 1.0,
       0.0, eps;
  CHECK_THROWS_AS(eigenprojection(A, Half::unstable, 1e-15), ProjectionConditionError);
}

TEST_CASE("kato_step rejects coarse paths") {
  const CMatrix P0 = rotating_projector(0.0);
  const CMatrix P1 = rotating_projector(1.2);  // ||dP|| > 0.5
  CMatrix W = P0.leftCols(1);
  CHECK_THROWS_AS(kato_step(W, P0, P1), ProjectionGapError);
}

TEST_CASE("kato_continue is exact for a constant projector family") {
  const CMatrix P = rotating_projector(0.7);
  CMatrix R0(2, 1);
  R0 << std::cos(0.7), std::sin(0.7);
  std::vector<CMatrix> path(50, P);
  const auto frames = kato_continue(path, R0);
  for (const auto& W : frames) CHECK((W - R0).norm() == 0.0);
}

TEST_CASE("kato_continue matches the closed-form rotating solution") {
  const double theta1 = std::numbers::pi / 4.0;
  const auto path = rotating_path(0.0, theta1, 1000);
  CMatrix R0(2, 1);
  R0 << 1.0, 0.0;
  const auto frames = kato_continue(path, R0);
  CMatrix expect(2, 1);
  expect << std::cos(theta1), std::sin(theta1);
  CHECK((frames.back() - expect).norm() <= 1e-3);

  // bare Euler (reprojection off) is also first-order accurate
  const auto bare = kato_continue(path, R0, /*reproject=*/false);
  CHECK((bare.back() - expect).norm() <= 1e-2);
}

TEST_CASE("closed-loop monodromy is trivial on a simply connected domain") {
  const CMatrix A1 = 0.4 * random_matrix(4, 4);
  const int N = 1000;
  std::vector<CMatrix> path;
  path.reserve(N + 1);
  for (int j = 0; j <= N; ++j) {
    const double t = 2.0 * std::numbers::pi * j / N;
    path.push_back(eigenprojection(loop_matrix(A1, 0.5 * std::exp(Complex(0.0, t))),
                                   Half::stable));
  }
  const CMatrix R0 = initial_frame(path.front());
  const auto frames = kato_continue(path, R0);
  CHECK((frames.back() - R0).norm() <= 1e-3 * R0.norm());
}

TEST_CASE("halving the path spacing improves the Euler error by >= 1.8") {
  const double theta1 = std::numbers::pi / 4.0;
  CMatrix R0(2, 1);
  R0 << 1.0, 0.0;
  CMatrix expect(2, 1);
  expect << std::cos(theta1), std::sin(theta1);
  const double dev200 =
      (kato_continue(rotating_path(0.0, theta1, 200), R0).back() - expect).norm();
  const double dev400 =
      (kato_continue(rotating_path(0.0, theta1, 400), R0).back() - expect).norm();
  CHECK(dev200 / dev400 >= 1.8);
}

TEST_CASE("discrete first-order normalization: L (W_{j+1} - W_j) = O(||dP||^2)") {
  const CMatrix A1 = 0.4 * random_matrix(4, 4);
  auto run = [&](int N) {
    std::vector<CMatrix> path;
    std::vector<CMatrix> lefts;
    for (int j = 0; j <= N; ++j) {
      const Complex lam = 0.5 * std::exp(Complex(0.0, 1.5 * j / N));
      const CMatrix A = loop_matrix(A1, lam);
      path.push_back(eigenprojection(A, Half::stable));
      lefts.push_back(invariant_subspace(A, Half::stable).left);
    }
    const auto frames = kato_continue(path, initial_frame(path.front()));
    double worst = 0.0;
    for (std::size_t j = 0; j + 1 < frames.size(); ++j) {
      const double num = (lefts[j] * (frames[j + 1] - frames[j])).norm();
      const double den = (path[j + 1] - path[j]).squaredNorm();
      worst = std::max(worst, num / den);
    }
    return worst;
  };
  const double c100 = run(100);
  const double c200 = run(200);
  CHECK(c100 <= 50.0);
  CHECK(c200 <= 2.0 * c100 + 0.1);  // the constant is step-independent
}

TEST_CASE("projector identity P dP P = O(||dP||^2)") {
  auto run_rotating = [&](int N) {
    double worst = 0.0;
    const auto path = rotating_path(0.0, 1.0, N);
    for (std::size_t j = 0; j + 1 < path.size(); ++j) {
      const CMatrix dP = path[j + 1] - path[j];
      worst = std::max(worst, (path[j] * dP * path[j]).norm() / dP.squaredNorm());
    }
    return worst;
  };
  const double r100 = run_rotating(100);
  const double r200 = run_rotating(200);
  CHECK(r100 <= 5.0);
  CHECK(r200 <= 2.0 * r100 + 0.1);

  const CMatrix A1 = 0.4 * random_matrix(4, 4);
  auto run_generic = [&](int N) {
    double worst = 0.0;
    CMatrix prev = eigenprojection(loop_matrix(A1, 0.5), Half::stable);
    for (int j = 1; j <= N; ++j) {
      const Complex lam = 0.5 * std::exp(Complex(0.0, 1.5 * j / N));
      const CMatrix cur = eigenprojection(loop_matrix(A1, lam), Half::stable);
      const CMatrix dP = cur - prev;
      worst = std::max(worst, (prev * dP * prev).norm() / dP.squaredNorm());
      prev = cur;
    }
    return worst;
  };
  const double g100 = run_generic(100);
  const double g200 = run_generic(200);
  CHECK(g100 <= 50.0);
  CHECK(g200 <= 2.0 * g100 + 0.1);
}

TEST_CASE("initial_frame: orthonormal, spans Range P, real for real projectors") {
  const CMatrix P = rotating_projector(0.9);
  const CMatrix R0 = initial_frame(P);
  REQUIRE(R0.cols() == 1);
  CHECK(R0.imag().norm() == 0.0);
  CHECK(std::abs(R0.norm() - 1.0) < 1e-13);
  CHECK(((CMatrix::Identity(2, 2) - P) * R0).norm() < 1e-13);

  const CMatrix A1 = 0.4 * random_matrix(4, 4);
  const CMatrix Pc = eigenprojection(loop_matrix(A1, Complex(0.2, 0.4)), Half::stable);
  const CMatrix Rc = initial_frame(Pc);
  REQUIRE(Rc.cols() == 2);
  CHECK((Rc.adjoint() * Rc - CMatrix::Identity(2, 2)).norm() < 1e-12);
  CHECK(((CMatrix::Identity(4, 4) - Pc) * Rc).norm() < 1e-10 * Pc.norm());
}

TEST_CASE("analytic frame invariants hold along a continued path") {
  const CMatrix A1 = 0.4 * random_matrix(4, 4);
  std::vector<CMatrix> path;
  const int N = 60;
  for (int j = 0; j <= N; ++j)
    path.push_back(eigenprojection(
        loop_matrix(A1, 0.5 * std::exp(Complex(0.0, 1.0 * j / N))), Half::stable));
  const auto frames = kato_continue(path, initial_frame(path.front()));
  for (std::size_t j = 0; j < frames.size(); ++j) {
    const CMatrix& P = path[j];
    CHECK((P * P - P).norm() <= 1e-10);
    CHECK(((CMatrix::Identity(4, 4) - P) * frames[j]).norm() <=
          1e-8 * frames[j].norm());
  }
}
