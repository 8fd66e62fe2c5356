#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "evans/analysis.hpp"
#include "test_util.hpp"

using namespace evans;

TEST_CASE("contour spec validation") {
  SchemeConfig cfg;
  const SpectralProblem prob = make_system("constant", {});
  CHECK_THROWS_AS(evaluate_contour(prob, {Complex(0, 0), -1.0, 20}, cfg), ParameterError);
  CHECK_THROWS_AS(evaluate_contour(prob, {Complex(0, 0), 0.1, 4}, cfg), ParameterError);
}

TEST_CASE("synthetic winding by the argument principle") {
  const Complex root(0.3, 0.1);
  auto linear = [&](Complex lam) { return lam - root; };
  CHECK(contour_winding(linear, {root, 0.2, 20}).winding == 1);
  CHECK(contour_winding(linear, {root + Complex(1.0, 0.0), 0.2, 20}).winding == 0);

  auto dbl = [&](Complex lam) { return (lam - root) * (lam - root); };
  CHECK(contour_winding(dbl, {root, 0.2, 20}).winding == 2);
}

TEST_CASE("winding of a product is the sum of windings") {
  const Complex r1(0.1, 0.0), r2(0.25, 0.05);
  auto d1 = [&](Complex lam) { return lam - r1; };
  auto d2 = [&](Complex lam) { return (lam - r2) * (lam - r2); };
  auto prod = [&](Complex lam) { return d1(lam) * d2(lam); };
  const ContourSpec spec{Complex(0.15, 0.0), 0.3, 24};
  const int w1 = contour_winding(d1, spec).winding;
  const int w2 = contour_winding(d2, spec).winding;
  const int wp = contour_winding(prod, spec).winding;
  CHECK(w1 == 1);
  CHECK(w2 == 2);
  CHECK(wp == w1 + w2);
}

TEST_CASE("winding is stable under sample-count doubling") {
  const Complex root(0.0, 0.0);
  auto f = [&](Complex lam) { return (lam - root) * (lam - Complex(3.0, 0.0)); };
  const int w20 = contour_winding(f, {root, 1.0, 20}).winding;
  const int w40 = contour_winding(f, {root, 1.0, 40}).winding;
  CHECK(w20 == 1);
  CHECK(w40 == 1);
}

TEST_CASE("refinement inserts midpoints until increments are below pi/2") {
  // winding 3 sampled at only 8 base points: base increments are 3*2pi/8 > pi/2
  auto f = [](Complex lam) { return lam * lam * lam; };
  const ContourResult res = contour_winding(f, {Complex(0.0, 0.0), 1.0, 8});
  CHECK(res.winding == 3);
  CHECK(res.refinements > 0);
}

TEST_CASE("near-zero and refinement-depth failures") {
  auto on_contour = [](Complex lam) { return lam - Complex(1.0, 0.0); };
  CHECK_THROWS_AS(contour_winding(on_contour, {Complex(0.0, 0.0), 1.0, 16}),
                  NearZeroOnContour);

  // unit-modulus phase singularity at a non-dyadic contour point: the
  // straddling segment keeps a ~pi increment at every refinement depth
  const ContourSpec spec{Complex(0.0, 0.0), 1.0, 16};
  const Complex p = spec.at((0.5 + 1.0 / 3.0) / 16.0);
  auto singular = [&](Complex lam) {
    const Complex d = lam - p;
    return d / std::abs(d);
  };
  CHECK_THROWS_AS(contour_winding(singular, spec), RefinementDepthExceeded);
}

TEST_CASE("bisect_root refines a synthetic linear root") {
  const double root = bisect_root([](double x) { return x - 0.1; }, 0.0, 0.2, -0.1);
  CHECK(std::abs(root - 0.1) <= 1e-4);
}

TEST_CASE("Boussinesq winding on the Fig 1(b) contour, both methods") {
  const SpectralProblem prob = boussinesq_problem(0.4);
  const ContourSpec spec{Complex(0.16, 0.0), 0.05, 20};
  SchemeConfig drury;
  const ContourResult rp = evaluate_contour(prob, spec, drury);
  CHECK(rp.winding == 1);
  SchemeConfig ext;
  ext.variant = Variant::exterior;
  const ContourResult re = evaluate_contour(prob, spec, ext);
  CHECK(re.winding == 1);
}

TEST_CASE("scan_real finds the Boussinesq root and skips the lambda = 0 endpoint") {
  const SpectralProblem prob = boussinesq_problem(0.4);
  SchemeConfig cfg;
  const ScanResult res = scan_real(prob, 0.0, 0.2, 41, cfg);
  REQUIRE(res.skipped.size() == 1);
  CHECK(res.skipped.front() == 0.0);
  CHECK(res.samples.size() == 40);
  REQUIRE(res.brackets.size() == 1);
  REQUIRE(res.roots.size() == 1);
  CHECK(res.roots.front() >= 0.14);
  CHECK(res.roots.front() <= 0.17);
  CHECK(res.brackets.front().second - res.brackets.front().first <=
        0.2 / 40.0 + 1e-12);
}

TEST_CASE("scan_real sees no sign change for the stable wave s = 0.6") {
  const SpectralProblem prob = boussinesq_problem(0.6);
  SchemeConfig cfg;
  const ScanResult res = scan_real(prob, 0.01, 0.2, 41, cfg);
  CHECK(res.skipped.empty());
  CHECK(res.brackets.empty());
  CHECK(res.roots.empty());
}

TEST_CASE("scan_real input validation and realness check") {
  const SpectralProblem prob = make_system("constant", {});
  SchemeConfig cfg;
  CHECK_THROWS_AS(scan_real(prob, 0.2, 0.0, 5, cfg), ParameterError);
  CHECK_THROWS_AS(scan_real(prob, 0.0, 0.2, 1, cfg), ParameterError);

  // complex eigenvectors make D complex on the axis (diagonal complex
  // matrices would still have real projectors)
  const CMatrix A0 = test_util::with_eigenvalues(
      {Complex(-1.0, 0.0), Complex(-2.0, 0.0), Complex(1.0, 0.0), Complex(2.0, 0.0)});
  const SpectralProblem cplx = constant_problem(A0, 2);
  CHECK_THROWS_AS(scan_real(cplx, 0.05, 0.15, 5, cfg), ImaginaryResidueError);
}

TEST_CASE("compare_methods: reference against itself is exact") {
  const SpectralProblem prob = make_system("constant", {});
  const ContourSpec spec{Complex(0.0, 0.0), 0.25, 8};
  SchemeConfig self;
  self.variant = Variant::exterior;
  self.abs_tol = 1e-12;
  self.rel_tol = 1e-10;
  const auto rows = compare_methods(prob, spec, {self});
  REQUIRE(rows.size() == 1);
  CHECK(rows.front().abs_diff == 0.0);
  CHECK(rows.front().rel_diff == 0.0);
  CHECK(rows.front().method == "exterior");
}

TEST_CASE("compare_methods reports drift, mesh and differences per scheme") {
  const SpectralProblem prob = boussinesq_problem(0.4);
  const ContourSpec spec{Complex(0.16, 0.0), 0.05, 8};
  SchemeConfig drury;
  SchemeConfig davey;
  davey.variant = Variant::davey;
  const auto rows = compare_methods(prob, spec, {drury, davey});
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    CHECK(row.stiefel_err <= 1e-8);
    CHECK(row.mesh >= 10.0);
    CHECK(row.mesh <= 200.0);
    CHECK(row.abs_diff >= 0.0);
    CHECK(row.rel_diff <= 1e-3);
  }
}

TEST_CASE("continue_frames rejects degenerate paths") {
  const SpectralProblem prob = make_system("constant", {});
  CHECK_THROWS_AS(continue_frames(prob, {}), ParameterError);
  CHECK_THROWS_AS(
      continue_frames(prob, {Complex(0.1, 0.0), Complex(0.1, 0.0)}),
      ParameterError);
}
