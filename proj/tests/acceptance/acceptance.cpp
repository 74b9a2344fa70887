#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "minkperi/convex_geometry.hpp"
#include "minkperi/grid_geometry.hpp"
#include "minkperi/optimizer.hpp"
#include "minkperi/riesz.hpp"
#include "minkperi/verification.hpp"
#include "oracles.hpp"

namespace minkperi {
namespace {

using oracle::kPi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Grid with the same cells at a scaled spacing and origin.
GridSet scaled_copy(const GridSet& g, double factor) {
  const auto& geo = g.geometry();
  const GridGeometry big(geo.dim(), geo.spacing() * factor, factor * geo.origin(), geo.dims());
  return GridSet(big, std::vector<std::uint8_t>(g.cells().begin(), g.cells().end()));
}

std::vector<ConvexPolytope> unit_area_test_shapes() {
  std::vector<ConvexPolytope> shapes{
      rectangle({0, 0, 0}, {1, 1, 0}),       regular_polygon(3, 1.0),
      regular_polygon(6, 1.0),               ellipse_polygon(256, 1.5, 1.0),
      rectangle({0, 0, 0}, {4, 1, 0}),
  };
  for (std::size_t i = 0; i < 20; ++i) {
    shapes.push_back(std::get<ConvexPolytope>(generate_shape(Family::kRandomHulls, 42, i, 20).shape));
  }
  for (auto& s : shapes) s = rescale_to_volume(s, 1.0);
  return shapes;
}

Outcome ball_oracle() {
  const double grid = minkowski_perimeter(rasterize_ball(2, {0, 0, 0}, 1.0, 0.01), 0.5);
  const double exact = perimeter_convex_exact(regular_polygon(256, 1.0), 0.5);
  return {rel(grid, 2 * kPi) <= 0.02 && rel(exact, 2 * kPi) <= 1e-3,
          fmt("grid %.6f (err %.2e), exact 256-gon %.8f (err %.2e)", grid, rel(grid, 2 * kPi),
              exact, rel(exact, 2 * kPi))};
}

Outcome square_closed_form() {
  const auto sq = rectangle({0, 0, 0}, {1, 1, 0});
  const double exact = perimeter_convex_exact(sq, 0.1);
  const double grid = minkowski_perimeter(rasterize(sq, 0.005), 0.1);
  return {rel(exact, oracle::kSquarePer01) <= 1e-13 && rel(grid, oracle::kSquarePer01) <= 0.02,
          fmt("exact %.15f (err %.1e), grid h=0.005 %.6f (err %.2e)", exact,
              rel(exact, oracle::kSquarePer01), grid, rel(grid, oracle::kSquarePer01))};
}

Outcome small_r_consistency() {
  // Per_r(B_1) = 2 pi for all r < 1; on a grid the deviation is a bias of
  // about 0.4 h / r, so the band is 0.5 h / r and the extrapolation removes
  // the bias by fitting Per_r against h / r.
  const double h = 0.00125;
  const auto disk = rasterize_ball(2, {0, 0, 0}, 1.0, h);
  const double radii[] = {0.2, 0.1, 0.05, 0.025};
  std::vector<double> ratio, values;
  bool in_band = true, monotone = true;
  double prev_err = 0.0;
  for (double r : radii) {
    values.push_back(minkowski_perimeter(disk, r));
    ratio.push_back(h / r);
    const double err = rel(values.back(), 2 * kPi);
    const double band = 0.5 * h / r;
    if (err > band) in_band = false;
    if (values.size() > 1 && err > prev_err + band) monotone = false;
    prev_err = err;
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    mx += ratio[i] / values.size();
    my += values[i] / values.size();
  }
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sxx += (ratio[i] - mx) * (ratio[i] - mx);
    sxy += (ratio[i] - mx) * (values[i] - my);
  }
  const double extrapolated = my - sxy / sxx * mx;
  const double ext_err = rel(extrapolated, 2 * kPi);

  // Exact path: Per_r of a 256-gon decreases to its boundary length.
  const auto poly = regular_polygon(256, 1.0);
  const double length = boundary_measure(poly);
  bool exact_monotone = true;
  double prev_gap = 1e9, last = 0.0;
  for (double r : radii) {
    last = perimeter_convex_exact(poly, r);
    if (std::abs(last - length) >= prev_gap) exact_monotone = false;
    prev_gap = std::abs(last - length);
  }
  return {in_band && monotone && ext_err < 5e-3 && exact_monotone &&
              rel(last, 2 * kPi) < 1e-3,
          fmt("grid h=%.5f: Per_r = %.5f %.5f %.5f %.5f, in band %d, monotone %d, "
              "extrapolated %.5f (err %.2e); exact 256-gon monotone %d, Per_0.025 err %.1e",
              h, values[0], values[1], values[2], values[3], in_band, monotone, extrapolated,
              ext_err, exact_monotone, rel(last, 2 * kPi))};
}

Outcome riesz_cross_validation() {
  const double h = 0.025;
  const double alphas[] = {0.5, 1.0, 1.5};
  double worst = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < 21; ++i) {
    const auto shape = std::get<ConvexPolytope>(generate_shape(Family::kRandomHulls, 4, i, 21).shape);
    const auto g = rasterize(shape, h);
    const auto k = RieszKernel::make(2, alphas[i % 3], h);
    worst = std::max(worst, rel(riesz_energy_fast(g, k), riesz_energy_direct(g, k)));
    ++count;
  }
  const auto k = RieszKernel::make(2, 1.0, 0.01);
  const double disk = rel(riesz_energy_fast(rasterize_ball(2, {0, 0, 0}, 1.0, 0.01), k),
                          oracle::kDiskPhi1DirectH001);
  worst = std::max(worst, disk);
  ++count;
  return {count >= 20 && worst <= 1e-6, fmt("%d shapes, worst relative gap %.2e", count, worst)};
}

Outcome riesz_scaling() {
  const auto shape = std::get<ConvexPolytope>(generate_shape(Family::kRandomHulls, 42, 0, 1).shape);
  const auto g = rasterize(shape, 0.02);
  double worst = 0.0;
  std::string detail;
  for (double alpha : {0.5, 1.0, 1.5}) {
    const double target = std::pow(2.0, riesz_scaling_exponent(2, alpha));
    const double grid = riesz_energy_fast(scaled_copy(g, 2.0), RieszKernel::make(2, alpha, 0.04)) /
                        riesz_energy_fast(g, RieszKernel::make(2, alpha, 0.02));
    const double exact =
        riesz_energy_polygon(scale(shape, 2.0), alpha) / riesz_energy_polygon(shape, alpha);
    worst = std::max({worst, rel(grid, target), rel(exact, target)});
    detail += fmt("a=%.1f: %.6f/%.6f (target %.4f) ", alpha, grid, exact, target);
  }
  return {worst <= 1e-3, detail + fmt("worst %.1e", worst)};
}

Outcome riesz_rearrangement() {
  const auto shapes = unit_area_test_shapes();
  double smallest_gap = 1e9;
  for (double alpha : {0.5, 1.0}) {
    const double disk = riesz_energy_disk(1 / std::sqrt(kPi), alpha);
    for (const auto& s : shapes) {
      smallest_gap = std::min(smallest_gap, (disk - riesz_energy_polygon(s, alpha)) / disk);
    }
  }
  return {smallest_gap > 1e-3,
          fmt("%zu shapes x 2 exponents, smallest relative gap %.4f", shapes.size(), smallest_gap)};
}

std::string iso_fingerprint;

Outcome quantitative_iso() {
  const auto rep = check_quantitative_iso(Family::kRandomHulls, 0.1, 200, 42);
  iso_fingerprint = deficit_csv(rep.records);
  const double c = rep.summary.min_constant.value_or(0.0);
  return {rep.summary.violations == 0 && c > 0 && c >= oracle::kIsoConstantLock,
          fmt("200 hulls, %zu violations, C_hat %.6f (lock %.4f), proof normalization %.6f",
              rep.summary.violations, c, oracle::kIsoConstantLock,
              rep.min_proof_constant.value_or(0.0))};
}

Outcome quantitative_bm() {
  const auto rep = check_bm_family(Family::kRandomHulls, 1.0, 200, 42);
  double min_lhs = 1e9;
  for (const auto& rec : rep.records) min_lhs = std::min(min_lhs, rec.lhs);
  return {rep.summary.violations == 0 && rep.equality_outliers == 0 && min_lhs >= -1e-3,
          fmt("K = B_1, min lhs %.4f, %zu violations, %zu equality cases with asymmetry >= 0.1, "
              "C_hat %.4f",
              min_lhs, rep.summary.violations, rep.equality_outliers,
              rep.summary.min_constant.value_or(0.0))};
}

Outcome pointwise_bound() {
  std::size_t shapes = 0, failures = 0;
  for (double alpha : {0.5, 1.0, 1.5}) {
    for (auto family : {Family::kRandomHulls, Family::kEllipseSweep, Family::kBoxes,
                        Family::kThinRectangles}) {
      const auto rep = check_bounds_family(family, 0.1, alpha, 50, 42);
      for (const auto& rec : rep.records) {
        if (rec.tag != BoundTag::kRiesz1) continue;
        ++shapes;
        if (!(rec.lhs >= rec.rhs)) ++failures;
      }
    }
  }
  return {failures == 0 && shapes > 0,
          fmt("%zu shape/exponent pairs, %zu violations", shapes, failures)};
}

Outcome potential_gap() {
  std::size_t shapes = 0, failures = 0;
  double worst_ratio = 0.0;
  for (double alpha : {0.5, 1.0}) {
    const double c = potential_gap_constant(2, alpha);
    for (auto family : {Family::kRandomHulls, Family::kEllipseSweep, Family::kBoxes}) {
      const auto rep = check_potential_gap_family(family, alpha, family == Family::kRandomHulls ? 200 : 30, 42);
      shapes += rep.records.size();
      failures += rep.summary.violations;
      for (const auto& rec : rep.records) {
        if (rec.observed_constant) worst_ratio = std::max(worst_ratio, *rec.observed_constant / c);
      }
    }
  }
  return {failures == 0, fmt("%zu shapes, %zu violations, largest observed/explicit %.3f", shapes,
                             failures, worst_ratio)};
}

std::string small_fingerprint;

Outcome small_volume() {
  OptimizerConfig cfg;
  cfg.m = 1e-4;
  cfg.alpha = 0.5;
  cfg.r = 0.1;
  cfg.seed = 7;
  cfg.steps = 1000;
  const auto trace = minimize(cfg);
  small_fingerprint = trace_ndjson(trace);
  const auto& poly = trace.best.polytope;
  const double asym = fraenkel_asymmetry(poly).value;
  const double dh = hausdorff_to_ball_translated(poly, 1 / std::sqrt(kPi)).distance;
  const auto sweep = small_volume_sweep({1, 1e-1, 1e-2, 1e-3, 1e-4}, cfg);
  return {asym <= 0.05 && dh <= 0.05 && sweep.monotone && sweep.ball_at_smallest,
          fmt("m=1e-4: asymmetry %.3e, d_H %.3e, energy %.7f vs disk %.7f; sweep monotone %d, "
              "ball at smallest %d",
              asym, dh, trace.best_energy, ball_energy(cfg), sweep.monotone,
              sweep.ball_at_smallest)};
}

std::string large_fingerprint;

Outcome large_volume() {
  OptimizerConfig cfg;
  cfg.alpha = 0.5;
  cfg.r = 0.1;
  cfg.seed = 7;
  cfg.steps = 1000;
  const auto rep = large_volume_sweep({1e2, 1e3, 1e4, 1e5}, cfg);
  large_fingerprint = sweep_csv(rep.points);
  const double target = 5.0 / 6.0;
  const double lam = rep.lambda1_fit.slope;
  const bool lambda_ok = lam >= -1.25 * target && lam <= -0.75 * target;
  const bool diam_ok = rep.diameter_fit.slope >= 0.708 && rep.diameter_fit.slope <= 0.958;
  return {diam_ok && lambda_ok,
          fmt("diameter slope %.4f +- %.4f in [0.708, 0.958]; lambda1 slope %.4f in [%.4f, %.4f]",
              rep.diameter_fit.slope, rep.diameter_fit.std_error, lam, -1.25 * target,
              -0.75 * target)};
}

Outcome cylinders() {
  const auto rep = check_cylinders({4, 8, 16, 32}, 0.5, 0.5, 2, 0.2);
  std::string values;
  for (const auto& rec : rep.records) {
    values += fmt("%s %.3f ", std::string(to_string(rec.tag)).c_str(),
                  rec.observed_constant.value_or(0.0));
  }
  return {rep.stable, fmt("r=0.5: %sspreads %.3f / %.3f (limit 1.5)", values.c_str(),
                          rep.perc1_spread, rep.phic_spread)};
}

Outcome determinism() {
  const std::string iso_first = iso_fingerprint, small_first = small_fingerprint,
                    large_first = large_fingerprint;
  ::setenv("MINKPERI_THREADS", "3", 1);
  quantitative_iso();
  small_volume();
  large_volume();
  ::unsetenv("MINKPERI_THREADS");
  const bool iso_same = !iso_first.empty() && iso_first == iso_fingerprint;
  const bool small_same = !small_first.empty() && small_first == small_fingerprint;
  const bool large_same = !large_first.empty() && large_first == large_fingerprint;
  return {iso_same && small_same && large_same,
          fmt("rerun with 3 workers: iso records %s, optimizer trace %s, large sweep %s",
              iso_same ? "identical" : "DIFFER", small_same ? "identical" : "DIFFER",
              large_same ? "identical" : "DIFFER")};
}

}  // namespace
}  // namespace minkperi

int main() {
  using namespace minkperi;
  std::setvbuf(stdout, nullptr, _IONBF, 0);
  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "ball perimeter oracle", 5, ball_oracle},
      {2, "square closed form", 0, square_closed_form},
      {3, "small-r consistency", 0, small_r_consistency},
      {4, "Riesz fast vs direct", 120, riesz_cross_validation},
      {5, "Riesz scaling law", 0, riesz_scaling},
      {6, "Riesz rearrangement", 0, riesz_rearrangement},
      {7, "quantitative isoperimetric suite", 300, quantitative_iso},
      {8, "quantitative Brunn-Minkowski", 0, quantitative_bm},
      {9, "pointwise Riesz-diameter bound", 0, pointwise_bound},
      {10, "potential Lipschitz gap", 0, potential_gap},
      {11, "small-volume minimizers", 600, small_volume},
      {12, "large-volume elongation", 600, large_volume},
      {13, "cylinder comparison", 0, cylinders},
      {14, "determinism", 0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && seconds > c.budget_seconds) {
      out.pass = false;
      out.detail += " [over time budget]";
    }
    if (!out.pass) ++failed;
    std::printf("%s criterion %d: %s: %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", c.id, c.name,
                out.detail.c_str(), seconds);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
