#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "evans/continuation.hpp"
#include "evans/parallel.hpp"
#include "evans/shooting.hpp"

namespace evans {

// Circular contour lambda(t) = center + radius e^{2 pi i t}, t in [0,1).
struct ContourSpec {
  Complex center;
  double radius = 0.0;
  int points = 20;

  Complex at(double t) const {
    return center + radius * std::exp(Complex(0.0, 2.0 * std::numbers::pi * t));
  }
};

inline void validate(const ContourSpec& spec) {
  if (!(spec.radius > 0.0)) throw ParameterError("contour: radius must be positive");
  if (spec.points < 8) throw ParameterError("contour: need at least 8 points");
}

struct ContourPoint {
  double t = 0.0;
  bool inserted = false;  // true for adaptively inserted midpoints
  EvansSample sample;
};

struct ContourResult {
  std::vector<ContourPoint> samples;  // in path order, t ascending, without the wrap node
  int winding = 0;
  int refinements = 0;  // inserted midpoints
};

// Frames for both sides continued along a lambda path (shared by every scheme).
struct FrameSet {
  std::vector<Complex> lambdas;
  std::vector<CMatrix> Pm, Pp;  // eigenprojections, minus/plus side
  std::vector<CMatrix> Wm, Wp;  // analytic frames
};

namespace detail {

inline CMatrix minus_projection(const SpectralProblem& prob, Complex lambda,
                                double gap_tol = 1e-8) {
  return eigenprojection(prob.A_minus(lambda), Half::unstable, gap_tol);
}

inline CMatrix plus_projection(const SpectralProblem& prob, Complex lambda,
                               double gap_tol = 1e-8) {
  return eigenprojection(prob.A_plus(lambda), Half::stable, gap_tol);
}

}  // namespace detail

inline FrameSet continue_frames(const SpectralProblem& prob,
                                std::vector<Complex> lambdas,
                                double gap_tol = 1e-8) {
  if (lambdas.empty()) throw ParameterError("continue_frames: empty path");
  for (std::size_t i = 0; i + 1 < lambdas.size(); ++i)
    if (lambdas[i] == lambdas[i + 1])
      throw ParameterError("continue_frames: consecutive path points must be distinct");
  FrameSet fs;
  fs.lambdas = std::move(lambdas);
  const std::size_t N = fs.lambdas.size();
  fs.Pm.resize(N);
  fs.Pp.resize(N);
  parallel_for(N, [&](std::size_t i) {
    fs.Pm[i] = detail::minus_projection(prob, fs.lambdas[i], gap_tol);
    fs.Pp[i] = detail::plus_projection(prob, fs.lambdas[i], gap_tol);
  });
  fs.Wm.resize(N);
  fs.Wp.resize(N);
  fs.Wm[0] = initial_frame(fs.Pm[0]);
  fs.Wp[0] = initial_frame(fs.Pp[0]);
  // anchors can be coarser than the 0.5 projection-gap bound; kato_segment
  // inserts intermediate continuation points as needed
  for (std::size_t i = 0; i + 1 < N; ++i) {
    fs.Wm[i + 1] = kato_segment(
        fs.Wm[i], fs.Pm[i], fs.lambdas[i], fs.Pm[i + 1], fs.lambdas[i + 1],
        [&](Complex lm) { return detail::minus_projection(prob, lm, gap_tol); });
    fs.Wp[i + 1] = kato_segment(
        fs.Wp[i], fs.Pp[i], fs.lambdas[i], fs.Pp[i + 1], fs.lambdas[i + 1],
        [&](Complex lm) { return detail::plus_projection(prob, lm, gap_tol); });
  }
  return fs;
}

// Evaluates D at stored path anchors, or between two anchors by a single
// incremental continuation step from the left anchor.
class AnchoredEvaluator {
 public:
  AnchoredEvaluator(const SpectralProblem& prob, const SchemeConfig& cfg,
                    const FrameSet& fs)
      : prob_(prob), cfg_(cfg), fs_(fs) {}

  EvansSample at_anchor(std::size_t j) const {
    return evans_eval(prob_, fs_.lambdas[j], cfg_, fs_.Wm[j], fs_.Wp[j]);
  }

  EvansSample off_anchor(std::size_t j, Complex lambda) const {
    const CMatrix Pm = detail::minus_projection(prob_, lambda);
    const CMatrix Pp = detail::plus_projection(prob_, lambda);
    const CMatrix Wm =
        kato_segment(fs_.Wm[j], fs_.Pm[j], fs_.lambdas[j], Pm, lambda,
                     [&](Complex lm) { return detail::minus_projection(prob_, lm); });
    const CMatrix Wp =
        kato_segment(fs_.Wp[j], fs_.Pp[j], fs_.lambdas[j], Pp, lambda,
                     [&](Complex lm) { return detail::plus_projection(prob_, lm); });
    return evans_eval(prob_, lambda, cfg_, Wm, Wp);
  }

 private:
  const SpectralProblem& prob_;
  const SchemeConfig& cfg_;
  const FrameSet& fs_;
};

namespace detail {

// Winding core over any sample source. eval(anchor, t) must return the Evans
// sample at lambda = spec.at(t), continued from base anchor `anchor`; the base
// grid itself is anchors 0..points-1 at t = j/points.
template <class Eval>
ContourResult contour_core(const ContourSpec& spec, Eval&& eval) {
  validate(spec);
  const int N = spec.points;
  std::vector<ContourPoint> base(static_cast<std::size_t>(N));
  parallel_for(static_cast<std::size_t>(N), [&](std::size_t j) {
    const double t = static_cast<double>(j) / N;
    base[j] = {t, false, eval(j, t)};
  });

  for (const auto& p : base)
    if (std::abs(p.sample.D) == 0.0)
      throw NearZeroOnContour("contour: |D| vanished at a contour sample");

  ContourResult res;
  res.samples.push_back(base[0]);
  auto refine = [&](auto&& self, std::size_t anchor, const ContourPoint& a,
                    const ContourPoint& b, int depth) -> void {
    const double incr = std::arg(b.sample.D / a.sample.D);
    if (std::abs(incr) <= 0.5 * std::numbers::pi) {
      res.samples.push_back(b);
      return;
    }
    if (depth >= 12)
      throw RefinementDepthExceeded(
          "contour: phase increment still above pi/2 at depth 12 "
          "(possible root on or near the contour)");
    const double tm = 0.5 * (a.t + b.t);
    ContourPoint m{tm, true, eval(anchor, tm)};
    if (std::abs(m.sample.D) == 0.0)
      throw NearZeroOnContour("contour: |D| vanished at a refinement point");
    ++res.refinements;
    self(self, anchor, a, m, depth + 1);
    self(self, anchor, m, b, depth + 1);
  };
  for (int j = 0; j < N; ++j) {
    const ContourPoint& a = res.samples.back();
    ContourPoint b = (j + 1 < N) ? base[static_cast<std::size_t>(j + 1)]
                                 : ContourPoint{1.0, false, base[0].sample};
    refine(refine, static_cast<std::size_t>(j), a, b, 0);
  }

  double max_abs = 0.0;
  for (const auto& p : res.samples) max_abs = std::max(max_abs, std::abs(p.sample.D));
  for (const auto& p : res.samples)
    if (std::abs(p.sample.D) < 1e-12 * max_abs)
      throw NearZeroOnContour("contour: |D| below 1e-12 * max|D|; root on contour?");

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < res.samples.size(); ++i)
    total += std::arg(res.samples[i + 1].sample.D / res.samples[i].sample.D);
  const double two_pi = 2.0 * std::numbers::pi;
  res.winding = static_cast<int>(std::llround(total / two_pi));
  if (std::abs(total - two_pi * res.winding) > 1e-6)
    throw Error("contour: accumulated phase is not an integer multiple of 2 pi");
  res.samples.pop_back();  // drop the wrap duplicate of the first node
  return res;
}

}  // namespace detail

// Contour evaluation with frames continued along the contour, followed by
// winding-number extraction with adaptive midpoint refinement.
inline ContourResult evaluate_contour(const SpectralProblem& prob,
                                      const ContourSpec& spec,
                                      const SchemeConfig& cfg) {
  validate(spec);
  std::vector<Complex> lambdas(static_cast<std::size_t>(spec.points));
  for (int j = 0; j < spec.points; ++j)
    lambdas[static_cast<std::size_t>(j)] = spec.at(static_cast<double>(j) / spec.points);
  const FrameSet fs = continue_frames(prob, std::move(lambdas));
  const AnchoredEvaluator ev(prob, cfg, fs);
  return detail::contour_core(spec, [&](std::size_t anchor, double t) {
    if (t == static_cast<double>(anchor) / spec.points) return ev.at_anchor(anchor);
    return ev.off_anchor(anchor, spec.at(t));
  });
}

// Winding of a plain complex-valued function on a contour (synthetic inputs,
// argument-principle tests).
template <class F>
ContourResult contour_winding(F&& D_of_lambda, const ContourSpec& spec) {
  return detail::contour_core(spec, [&](std::size_t, double t) {
    EvansSample s;
    s.lambda = spec.at(t);
    s.D = D_of_lambda(s.lambda);
    return s;
  });
}

struct ScanResult {
  std::vector<EvansSample> samples;                // ascending lambda
  std::vector<double> skipped;                     // endpoint samples skipped
  std::vector<std::pair<double, double>> brackets; // sign-change brackets
  std::vector<double> roots;                       // bisection-refined to width 1e-4
};

// Bisection on a bracketing interval down to the given width; returns the
// final interval midpoint.
template <class F>
double bisect_root(F&& f, double lo, double hi, double flo, double width = 1e-4) {
  auto sgn = [](double v) { return (v > 0.0) - (v < 0.0); };
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (sgn(fmid) == sgn(flo)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Real-axis scan of D with sign-change bracketing and bisection refinement.
// Samples at the interval ends that violate consistent splitting (the
// essential-spectrum boundary, e.g. lambda = 0 for Boussinesq) are skipped
// and reported; interior separation failures propagate.
inline ScanResult scan_real(const SpectralProblem& prob, double a, double b,
                            int points, const SchemeConfig& cfg) {
  if (!(b > a)) throw ParameterError("scan_real: need a < b");
  if (points < 2) throw ParameterError("scan_real: need at least 2 points");

  ScanResult res;
  std::vector<Complex> lambdas;
  for (int i = 0; i < points; ++i) {
    const double lam = a + (b - a) * i / (points - 1);
    try {
      detail::minus_projection(prob, Complex(lam, 0.0));
      detail::plus_projection(prob, Complex(lam, 0.0));
      lambdas.emplace_back(lam, 0.0);
    } catch (const SpectralSeparationFailure&) {
      if (i == 0 || i == points - 1)
        res.skipped.push_back(lam);
      else
        throw;
    }
  }
  if (lambdas.size() < 2)
    throw SpectralSeparationFailure("scan_real: fewer than 2 separated samples");

  const FrameSet fs = continue_frames(prob, std::move(lambdas));
  const AnchoredEvaluator ev(prob, cfg, fs);

  const std::size_t N = fs.lambdas.size();
  res.samples.resize(N);
  parallel_for(N, [&](std::size_t i) { res.samples[i] = ev.at_anchor(i); });

  double max_abs = 0.0;
  for (const auto& s : res.samples) max_abs = std::max(max_abs, std::abs(s.D));
  for (const auto& s : res.samples) {
    if (std::abs(s.D) < 1e-12 * max_abs) continue;  // numerically zero sample
    if (std::abs(s.D.imag()) > 1e-6 * std::abs(s.D))
      throw ImaginaryResidueError(
          "scan_real: D is not real on the axis (|Im D| > 1e-6 |D|)");
  }

  auto sgn = [](double v) { return (v > 0.0) - (v < 0.0); };
  for (std::size_t i = 0; i + 1 < N; ++i) {
    const int s0 = sgn(res.samples[i].D.real());
    const int s1 = sgn(res.samples[i + 1].D.real());
    if (s0 == 0) {
      res.roots.push_back(fs.lambdas[i].real());
      continue;
    }
    if (s0 * s1 >= 0) continue;
    const double lo = fs.lambdas[i].real(), hi = fs.lambdas[i + 1].real();
    res.brackets.emplace_back(lo, hi);
    res.roots.push_back(bisect_root(
        [&](double lam) { return ev.off_anchor(i, Complex(lam, 0.0)).D.real(); },
        lo, hi, res.samples[i].D.real()));
  }
  if (!res.samples.empty()) {
    const int slast = sgn(res.samples[N - 1].D.real());
    if (slast == 0) res.roots.push_back(fs.lambdas[N - 1].real());
  }
  return res;
}

struct ComparisonRow {
  std::string method;
  double c = 0.0;
  double stiefel_err = 0.0;   // max over contour points and sides
  double mesh = 0.0;          // median over contour points and sides
  double time_seconds = 0.0;  // informational, never asserted
  double abs_diff = 0.0;      // max |D - D_ref| over the contour
  double rel_diff = 0.0;      // max |D - D_ref| / |D_ref|
};

namespace detail {

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

// Method-comparison harness: evaluates each scheme on the contour samples and
// reports drift, mesh and difference against a high-accuracy exterior-product
// reference (tolerances 1e-12 / 1e-10).
inline std::vector<ComparisonRow> compare_methods(
    const SpectralProblem& prob, const ContourSpec& spec,
    const std::vector<SchemeConfig>& methods) {
  validate(spec);
  std::vector<Complex> lambdas(static_cast<std::size_t>(spec.points));
  for (int j = 0; j < spec.points; ++j)
    lambdas[static_cast<std::size_t>(j)] = spec.at(static_cast<double>(j) / spec.points);
  const FrameSet fs = continue_frames(prob, std::move(lambdas));
  const std::size_t N = fs.lambdas.size();

  SchemeConfig ref_cfg;
  ref_cfg.variant = Variant::exterior;
  ref_cfg.abs_tol = 1e-12;
  ref_cfg.rel_tol = 1e-10;
  std::vector<Complex> ref(N);
  {
    const AnchoredEvaluator ev(prob, ref_cfg, fs);
    parallel_for(N, [&](std::size_t j) { ref[j] = ev.at_anchor(j).D; });
  }

  std::vector<ComparisonRow> rows;
  rows.reserve(methods.size());
  for (const SchemeConfig& cfg : methods) {
    const AnchoredEvaluator ev(prob, cfg, fs);
    std::vector<EvansSample> samples(N);
    const auto t0 = std::chrono::steady_clock::now();
    parallel_for(N, [&](std::size_t j) { samples[j] = ev.at_anchor(j); });
    const auto t1 = std::chrono::steady_clock::now();

    ComparisonRow row;
    row.method = variant_name(cfg.variant);
    row.c = cfg.c;
    row.time_seconds = std::chrono::duration<double>(t1 - t0).count();
    std::vector<double> meshes;
    meshes.reserve(2 * N);
    for (std::size_t j = 0; j < N; ++j) {
      const EvansSample& s = samples[j];
      row.stiefel_err = std::max({row.stiefel_err, s.stiefel_minus, s.stiefel_plus});
      meshes.push_back(static_cast<double>(s.mesh_minus));
      meshes.push_back(static_cast<double>(s.mesh_plus));
      const double d = std::abs(s.D - ref[j]);
      row.abs_diff = std::max(row.abs_diff, d);
      const double r = std::abs(ref[j]);
      if (r > 0.0) row.rel_diff = std::max(row.rel_diff, d / r);
    }
    row.mesh = detail::median(std::move(meshes));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace evans
