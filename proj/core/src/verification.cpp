#include "minkperi/verification.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "minkperi/errors.hpp"
#include "minkperi/grid_geometry.hpp"
#include "minkperi/io.hpp"
#include "minkperi/parallel.hpp"
#include "minkperi/riesz.hpp"

namespace minkperi {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kTagCount = 8;

void finish_constants(DeficitRecord& rec) {
  rec.min_factor = std::min(rec.radius / rec.r, 1.0);
  if (rec.asymmetry > 0.0) {
    const double a2 = rec.asymmetry * rec.asymmetry;
    rec.implied_constant = rec.deficit / (rec.min_factor * a2);
    if (rec.radius >= rec.r) rec.proof_constant = 2.0 * rec.deficit / a2;
  }
}

std::optional<double> ratio(double lhs, double rhs) {
  if (rhs > 0.0 && std::isfinite(lhs / rhs)) return lhs / rhs;
  return std::nullopt;
}

// Seeds depend on the family too, so two suites sharing a seed still draw
// unrelated shapes.
std::mt19937_64 trial_engine(Family family, std::uint64_t seed, std::size_t index) {
  const auto idx = static_cast<std::uint64_t>(index);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32),
                    static_cast<std::uint32_t>(family)};
  return std::mt19937_64(seq);
}

// Regular k-gon with area pi R^2.
ConvexPolytope polygonal_ball(int k, double radius, Vec3 center) {
  const double circumradius = radius * std::sqrt(2.0 * kPi / (k * std::sin(2.0 * kPi / k)));
  return regular_polygon(k, circumradius, center);
}

void require_trials(std::size_t trials) {
  if (trials < 1) throw InvalidArgument("trials must be at least 1");
}

const ConvexPolytope& polygon_of(const ShapeSample& s) {
  if (const auto* p = std::get_if<ConvexPolytope>(&s.shape)) return *p;
  throw InvalidArgument("shape '" + s.id + "' has no polygon form");
}

std::string cell(const std::optional<double>& x) { return x ? format_double(*x) : std::string(); }

SuiteSummary make_summary(Family family, std::uint64_t seed, std::size_t trials) {
  return {std::string(to_string(family)), seed, trials, std::nullopt, 0};
}

void fold_min(std::optional<double>& acc, const std::optional<double>& x) {
  if (x && (!acc || *x < *acc)) acc = x;
}

}  // namespace

std::string_view to_string(Method m) { return m == Method::kExact ? "exact" : "grid"; }

std::string_view to_string(BoundTag t) {
  switch (t) {
    case BoundTag::kDiam: return "diam";
    case BoundTag::kRiesz1: return "riesz1";
    case BoundTag::kRiesz2: return "riesz2";
    case BoundTag::kPerc: return "perc";
    case BoundTag::kBm1: return "bm1";
    case BoundTag::kContopot: return "contopot";
    case BoundTag::kPerc1: return "perc1";
    case BoundTag::kPhic: return "phic";
  }
  return "?";
}

std::string_view to_string(Family f) {
  switch (f) {
    case Family::kBalls: return "balls";
    case Family::kRandomHulls: return "random-hulls";
    case Family::kEllipseSweep: return "ellipse-sweep";
    case Family::kBoxes: return "boxes";
    case Family::kFarUnions: return "far-unions";
    case Family::kCylinders: return "cylinders";
    case Family::kThinRectangles: return "thin-rectangles";
  }
  return "?";
}

std::optional<Family> family_from_string(std::string_view name) {
  for (Family f : {Family::kBalls, Family::kRandomHulls, Family::kEllipseSweep, Family::kBoxes,
                   Family::kFarUnions, Family::kCylinders, Family::kThinRectangles}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

DeficitRecord isoperimetric_deficit(const ConvexPolytope& p, double r, std::string shape_id) {
  if (!(r > 0.0)) throw InvalidArgument("r must be positive");
  if (p.dim() != 2) return isoperimetric_deficit(rasterize(p, r / 10.0), r, std::move(shape_id));
  const double vol = volume_polytope(p);
  if (!(vol > 0.0)) throw InvalidArgument("isoperimetric deficit needs |E| > 0");
  DeficitRecord rec;
  rec.shape_id = std::move(shape_id);
  rec.r = r;
  rec.radius = ball_radius_for_volume(2, vol);
  rec.per_r_shape = perimeter_convex_exact(p, r);
  rec.per_r_ball = ball_perimeter_analytic(rec.radius, r, 2);
  rec.deficit = (rec.per_r_shape - rec.per_r_ball) / rec.per_r_ball;
  rec.asymmetry = fraenkel_asymmetry(p).value;
  rec.method = Method::kExact;
  finish_constants(rec);
  return rec;
}

DeficitRecord isoperimetric_deficit(const GridSet& set, double r, std::string shape_id) {
  if (!(r > 0.0)) throw InvalidArgument("r must be positive");
  const double vol = volume(set);
  if (!(vol > 0.0)) throw InvalidArgument("isoperimetric deficit needs |E| > 0");
  const int n = set.dim();
  const double h = set.spacing();
  DeficitRecord rec;
  rec.shape_id = std::move(shape_id);
  rec.r = r;
  rec.radius = ball_radius_for_volume(n, vol);
  if (h > rec.radius / 4.0) {
    throw ResolutionError("grid too coarse for the reference ball", rec.radius / 4.0);
  }
  rec.per_r_shape = minkowski_perimeter(set, r);
  rec.per_r_ball = minkowski_perimeter(rasterize_ball(n, {}, rec.radius, h), r);
  rec.deficit = (rec.per_r_shape - rec.per_r_ball) / rec.per_r_ball;
  rec.asymmetry = fraenkel_asymmetry(set, rec.radius, AsymmetrySearch::kExhaustive).value;
  rec.method = Method::kGrid;
  finish_constants(rec);
  return rec;
}

DeficitRecord isoperimetric_deficit(const Shape& shape, double r, std::string shape_id) {
  return std::visit(
      [&](const auto& s) { return isoperimetric_deficit(s, r, std::move(shape_id)); }, shape);
}

ShapeSample generate_shape(Family family, std::uint64_t seed, std::size_t index,
                           std::size_t trials, const FamilyOptions& options) {
  auto eng = trial_engine(family, seed, index);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::string id = std::string(to_string(family)) + "-" + std::to_string(index);
  const int k = options.smooth_vertices;
  switch (family) {
    case Family::kBalls: {
      const double radius = 0.05 + 1.95 * unit(eng);
      const Vec3 c{2.0 * unit(eng) - 1.0, 2.0 * unit(eng) - 1.0, 0};
      return {id, polygonal_ball(k, radius, c)};
    }
    case Family::kRandomHulls: {
      std::uniform_int_distribution<int> count(5, 30);
      // Redraw until the points span an area (almost surely on the first try).
      for (;;) {
        std::vector<Vec3> pts(count(eng));
        for (auto& q : pts) {
          const double rad = std::sqrt(unit(eng));
          const double t = 2.0 * kPi * unit(eng);
          q = {rad * std::cos(t), rad * std::sin(t), 0};
        }
        try {
          const auto hull = convex_hull(pts, 2);
          if (hull.size() >= 3 && volume_polytope(hull) > 1e-3) {
            return {id, rescale_to_volume(hull, kPi)};
          }
        } catch (const DegenerateInput&) {
        }
      }
    }
    case Family::kEllipseSweep: {
      const double aspect =
          trials > 1 ? 1.0 + 9.0 * static_cast<double>(index) / static_cast<double>(trials - 1)
                     : 1.0;
      const double a = std::sqrt(aspect);
      return {id, rescale_to_volume(ellipse_polygon(k, a, 1.0 / a), kPi)};
    }
    case Family::kBoxes: {
      const double aspect = 1.0 + 9.0 * unit(eng);
      const double w = std::sqrt(kPi * aspect);
      return {id, rectangle({0, 0, 0}, {w, kPi / w, 0})};
    }
    case Family::kFarUnions: {
      const double radius = std::sqrt(0.5);
      const double d = 2.0 + 2.0 * unit(eng);
      const double t = 2.0 * kPi * unit(eng);
      const Vec3 a{0.5 * d * std::cos(t), 0.5 * d * std::sin(t), 0};
      const Vec3 b = -1.0 * a;
      const double ext = 0.5 * d + radius;
      auto inside = [&](Vec3 x) {
        const Vec3 da = x - a, db = x - b;
        return dot(da, da) < radius * radius || dot(db, db) < radius * radius;
      };
      return {id, rasterize(2, {-ext, -ext, 0}, {ext, ext, 0}, options.h, inside)};
    }
    case Family::kCylinders: {
      const double len = 4.0 * static_cast<double>(1u << (index % 4));
      return {id, rectangle({0, 0, 0}, {len, 1.0 / len, 0})};
    }
    case Family::kThinRectangles: {
      const double len = 2.0 + 18.0 * unit(eng);
      return {id, rectangle({0, 0, 0}, {len, 0.1, 0})};
    }
  }
  throw InvalidArgument("unknown shape family");
}

IsoReport check_quantitative_iso(Family family, double r, std::size_t trials, std::uint64_t seed,
                                 const IsoOptions& options) {
  require_trials(trials);
  IsoReport report;
  report.records.resize(trials);
  parallel_for(trials, [&](std::size_t i) {
    const auto sample = generate_shape(family, seed, i, trials, options.family);
    report.records[i] = isoperimetric_deficit(sample.shape, r, sample.id);
  });
  report.summary = make_summary(family, seed, trials);
  for (std::size_t i = 0; i < trials; ++i) {
    const auto& rec = report.records[i];
    if (rec.deficit < -options.tolerance) report.violating.push_back(i);
    fold_min(report.summary.min_constant, rec.implied_constant);
    fold_min(report.min_proof_constant, rec.proof_constant);
    if (rec.deficit < 1e-2 && rec.asymmetry >= 0.1) ++report.equality_outliers;
  }
  report.summary.violations = report.violating.size();
  return report;
}

BoundRecord check_bm_quantitative(const ConvexPolytope& f, double r, std::string shape_id) {
  if (!(r > 0.0)) throw InvalidArgument("r must be positive");
  if (f.dim() != 2) return check_bm_quantitative(rasterize(f, r / 10.0), r, std::move(shape_id));
  const double vol = volume_polytope(f);
  if (!(vol > 0.0)) throw InvalidArgument("Brunn-Minkowski check needs |F| > 0");
  const double k_vol = kPi * r * r;
  BoundRecord rec;
  rec.shape_id = std::move(shape_id);
  rec.tag = BoundTag::kBm1;
  rec.lhs = std::sqrt(outer_parallel_volume(f, r)) - std::sqrt(vol) - std::sqrt(k_vol);
  const double asym = fraenkel_asymmetry(f).value;
  rec.asymmetry = asym;
  rec.rhs = std::min(std::sqrt(vol), std::sqrt(k_vol)) * asym * asym;
  rec.observed_constant = ratio(rec.lhs, rec.rhs);
  rec.holds = rec.lhs >= -1e-3;
  return rec;
}

BoundRecord check_bm_quantitative(const GridSet& f, double r, std::string shape_id) {
  if (!(r > 0.0)) throw InvalidArgument("r must be positive");
  const double vol = volume(f);
  if (!(vol > 0.0)) throw InvalidArgument("Brunn-Minkowski check needs |F| > 0");
  const int n = f.dim();
  const double inv_n = 1.0 / n;
  const double k_vol = ball_volume(n, r);
  BoundRecord rec;
  rec.shape_id = std::move(shape_id);
  rec.tag = BoundTag::kBm1;
  rec.lhs = std::pow(volume(dilate(f, r)), inv_n) - std::pow(vol, inv_n) - std::pow(k_vol, inv_n);
  const double asym =
      fraenkel_asymmetry(f, ball_radius_for_volume(n, vol), AsymmetrySearch::kExhaustive).value;
  rec.asymmetry = asym;
  rec.rhs = std::min(std::pow(vol, inv_n), std::pow(k_vol, inv_n)) * asym * asym;
  rec.observed_constant = ratio(rec.lhs, rec.rhs);
  rec.holds = rec.lhs >= -1e-3;
  return rec;
}

BoundRecord check_bm_quantitative(const Shape& f, double r, std::string shape_id) {
  return std::visit([&](const auto& s) { return check_bm_quantitative(s, r, std::move(shape_id)); },
                    f);
}

BmReport check_bm_family(Family family, double r, std::size_t trials, std::uint64_t seed,
                         const BmOptions& options) {
  require_trials(trials);
  BmReport report;
  report.records.resize(trials);
  parallel_for(trials, [&](std::size_t i) {
    const auto sample = generate_shape(family, seed, i, trials, options.family);
    report.records[i] = check_bm_quantitative(sample.shape, r, sample.id);
  });
  report.summary = make_summary(family, seed, trials);
  for (std::size_t i = 0; i < trials; ++i) {
    auto& rec = report.records[i];
    rec.holds = rec.lhs >= -options.tolerance;
    if (!rec.holds) report.violating.push_back(i);
    if (std::abs(rec.lhs) < options.equality_band && rec.asymmetry &&
        *rec.asymmetry >= options.equality_asymmetry) {
      ++report.equality_outliers;
    }
    fold_min(report.summary.min_constant, rec.observed_constant);
  }
  report.summary.violations = report.violating.size();
  return report;
}

std::vector<BoundRecord> check_convex_bounds(const ConvexPolytope& p, double r, double alpha,
                                             std::string shape_id) {
  if (p.dim() != 2) throw Unsupported("convex bounds are implemented for planar polygons");
  if (!(r > 0.0)) throw InvalidArgument("r must be positive");
  if (!(alpha > 0.0) || !(alpha < 2.0)) throw InvalidArgument("alpha must lie in (0, 2)");
  const double vol = volume_polytope(p);
  const double diam = diameter(p);
  const double per = perimeter_convex_exact(p, r);
  const double phi = riesz_energy_polygon(p, alpha, 1e-10);
  const BoxProfile box = john_box(p);

  std::vector<BoundRecord> out(4);
  for (auto& rec : out) rec.shape_id = shape_id;

  out[0].tag = BoundTag::kDiam;
  out[0].lhs = diam;
  out[0].rhs = per;  // Per_r^{n-1} |E|^{2-n} with n = 2

  out[1].tag = BoundTag::kRiesz1;
  out[1].lhs = phi * std::pow(diam, alpha);
  out[1].rhs = vol * vol;
  out[1].holds = out[1].lhs >= out[1].rhs;

  out[2].tag = BoundTag::kRiesz2;
  out[2].lhs = box.lambdas[0];
  out[2].rhs = std::pow(vol, 1.0 - 2.0 / alpha) * std::pow(phi, 1.0 / alpha);

  out[3].tag = BoundTag::kPerc;
  out[3].lhs = per;
  out[3].rhs = std::max(box.lambdas[1], r);

  for (auto& rec : out) {
    rec.observed_constant = ratio(rec.lhs, rec.rhs);
    if (rec.tag != BoundTag::kRiesz1) {
      rec.holds = rec.observed_constant.has_value() && *rec.observed_constant > 0.0;
    }
  }
  return out;
}

namespace {

BoundsReport collect_bounds(std::vector<std::vector<BoundRecord>> per_trial, Family family,
                            std::uint64_t seed, std::size_t trials, BoundTag summary_tag) {
  BoundsReport report;
  report.summary = make_summary(family, seed, trials);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  report.constant_range.assign(kTagCount, {kInf, -kInf});
  for (std::size_t i = 0; i < per_trial.size(); ++i) {
    bool ok = true;
    for (auto& rec : per_trial[i]) {
      ok = ok && rec.holds;
      if (rec.observed_constant) {
        auto& range = report.constant_range[static_cast<std::size_t>(rec.tag)];
        range.first = std::min(range.first, *rec.observed_constant);
        range.second = std::max(range.second, *rec.observed_constant);
        if (rec.tag == summary_tag) fold_min(report.summary.min_constant, rec.observed_constant);
      }
      report.records.push_back(std::move(rec));
    }
    if (!ok) report.violating.push_back(i);
  }
  report.summary.violations = report.violating.size();
  return report;
}

}  // namespace

BoundsReport check_bounds_family(Family family, double r, double alpha, std::size_t trials,
                                 std::uint64_t seed, const FamilyOptions& options) {
  require_trials(trials);
  std::vector<std::vector<BoundRecord>> per_trial(trials);
  parallel_for(trials, [&](std::size_t i) {
    const auto sample = generate_shape(family, seed, i, trials, options);
    per_trial[i] = check_convex_bounds(polygon_of(sample), r, alpha, sample.id);
  });
  return collect_bounds(std::move(per_trial), family, seed, trials, BoundTag::kRiesz1);
}

BoundRecord check_potential_gap(const ConvexPolytope& p, double alpha, std::string shape_id) {
  if (!(alpha > 0.0) || !(alpha < 2.0)) throw InvalidArgument("alpha must lie in (0, 2)");
  const ConvexPolytope unit = rescale_to_volume(p, 1.0);
  const double phi_e = riesz_energy_polygon(unit, alpha, 1e-12);
  const double phi_b = riesz_energy_disk(ball_radius_for_volume(2, 1.0), alpha);
  const double asym = fraenkel_asymmetry(unit).value;
  BoundRecord rec;
  rec.shape_id = std::move(shape_id);
  rec.tag = BoundTag::kContopot;
  rec.lhs = std::abs(phi_b - phi_e);
  rec.rhs = asym;  // inf_x |E xor B(x)| with |E| = |B| = 1
  rec.asymmetry = asym;
  rec.observed_constant = ratio(rec.lhs, rec.rhs);
  // Quadrature error of both energies is far below 1e-10 relative.
  rec.holds = rec.lhs <= potential_gap_constant(2, alpha) * rec.rhs + 1e-10 * phi_b;
  return rec;
}

BoundsReport check_potential_gap_family(Family family, double alpha, std::size_t trials,
                                        std::uint64_t seed, const FamilyOptions& options) {
  require_trials(trials);
  std::vector<std::vector<BoundRecord>> per_trial(trials);
  parallel_for(trials, [&](std::size_t i) {
    const auto sample = generate_shape(family, seed, i, trials, options);
    per_trial[i] = {check_potential_gap(polygon_of(sample), alpha, sample.id)};
  });
  return collect_bounds(std::move(per_trial), family, seed, trials, BoundTag::kContopot);
}

std::pair<BoundRecord, BoundRecord> cylinder_energy_bounds(double length, double r, double alpha,
                                                           int n, const CylinderOptions& options) {
  if (n != 2 && n != 3) throw InvalidArgument("cylinder bounds support n = 2 and n = 3");
  if (!(r > 0.0)) throw InvalidArgument("r must be positive");
  if (!(alpha > 0.0) || !(alpha < n - 1.0)) {
    throw InvalidArgument("cylinder bounds need 0 < alpha < n - 1");
  }
  // Cross-section radius from w_{n-1} R^{n-1} L = 1.
  const double radius = std::pow(1.0 / (unit_ball_volume(n - 1) * length), 1.0 / (n - 1));
  if (!(length >= std::max({radius, r, 1.0}))) {
    std::ostringstream msg;
    msg << "cylinder length " << length << " is below max(R, r, 1) = "
        << std::max({radius, r, 1.0});
    throw InvalidArgument(msg.str());
  }
  double per = 0.0, phi = 0.0;
  if (n == 2) {
    const auto rect = rectangle({0, 0, 0}, {length, 2.0 * radius, 0});
    per = perimeter_convex_exact(rect, r);
    phi = riesz_energy_polygon(rect, alpha, 1e-10);
  } else {
    const double h = options.h > 0.0 ? options.h : std::min(r, radius) / 8.0;
    const auto grid = rasterize(
        3, {-radius, -radius, 0}, {radius, radius, length}, h,
        [&](Vec3 x) { return x.x * x.x + x.y * x.y < radius * radius && x.z < length; });
    per = minkowski_perimeter(grid, r);
    phi = riesz_energy_fast(grid, RieszKernel::make(3, alpha, h));
  }
  const std::string id = "cylinder-L" + format_double(length);
  BoundRecord perc1, phic;
  perc1.shape_id = phic.shape_id = id;
  perc1.tag = BoundTag::kPerc1;
  perc1.lhs = per;
  perc1.rhs = std::pow(length, 1.0 / (n - 1));
  phic.tag = BoundTag::kPhic;
  phic.lhs = phi;
  phic.rhs = std::pow(length, -alpha);
  for (auto* rec : {&perc1, &phic}) {
    rec->observed_constant = ratio(rec->lhs, rec->rhs);
    rec->holds = rec->observed_constant.has_value() && *rec->observed_constant > 0.0;
  }
  return {perc1, phic};
}

CylinderReport check_cylinders(const std::vector<double>& lengths, double r, double alpha, int n,
                               double band, const CylinderOptions& options) {
  if (lengths.empty()) throw InvalidArgument("no cylinder lengths given");
  std::vector<std::pair<BoundRecord, BoundRecord>> pairs(lengths.size());
  parallel_for(lengths.size(), [&](std::size_t i) {
    pairs[i] = cylinder_energy_bounds(lengths[i], r, alpha, n, options);
  });
  CylinderReport report;
  auto spread = [&](auto member) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& pr : pairs) {
      const double c = *(pr.*member).observed_constant;
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    return hi / lo;
  };
  report.perc1_spread = spread(&std::pair<BoundRecord, BoundRecord>::first);
  report.phic_spread = spread(&std::pair<BoundRecord, BoundRecord>::second);
  const double limit = (1.0 + band) / (1.0 - band);
  report.stable = report.perc1_spread <= limit && report.phic_spread <= limit;
  for (auto& pr : pairs) {
    report.records.push_back(std::move(pr.first));
    report.records.push_back(std::move(pr.second));
  }
  return report;
}

std::string deficit_csv(const std::vector<DeficitRecord>& records) {
  std::ostringstream out;
  out << "shape_id,r,R,per_r_shape,per_r_ball,deficit,asymmetry,min_factor,implied_constant,"
         "proof_constant,method\n";
  for (const auto& rec : records) {
    out << rec.shape_id << ',' << format_double(rec.r) << ',' << format_double(rec.radius) << ','
        << format_double(rec.per_r_shape) << ',' << format_double(rec.per_r_ball) << ','
        << format_double(rec.deficit) << ',' << format_double(rec.asymmetry) << ','
        << format_double(rec.min_factor) << ',' << cell(rec.implied_constant) << ','
        << cell(rec.proof_constant) << ',' << to_string(rec.method) << '\n';
  }
  return out.str();
}

std::string bound_csv(const std::vector<BoundRecord>& records) {
  std::ostringstream out;
  out << "shape_id,tag,lhs,rhs,observed_constant,asymmetry,holds\n";
  for (const auto& rec : records) {
    out << rec.shape_id << ',' << to_string(rec.tag) << ',' << format_double(rec.lhs) << ','
        << format_double(rec.rhs) << ',' << cell(rec.observed_constant) << ','
        << cell(rec.asymmetry) << ',' << (rec.holds ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string deficit_scatter_csv(const std::vector<DeficitRecord>& records) {
  std::ostringstream out;
  out << "x,y\n";
  for (const auto& rec : records) {
    out << format_double(rec.min_factor * rec.asymmetry * rec.asymmetry) << ','
        << format_double(rec.deficit) << '\n';
  }
  return out.str();
}

std::string summary_json(const SuiteSummary& summary,
                         const std::vector<std::pair<std::string, std::string>>& extra) {
  nlohmann::ordered_json doc;
  doc["family"] = summary.family;
  doc["seed"] = summary.seed;
  doc["trials"] = summary.trials;
  doc["min_constant"] = nullptr;
  if (summary.min_constant) doc["min_constant"] = *summary.min_constant;
  doc["violations"] = summary.violations;
  for (const auto& [key, raw] : extra) doc[key] = nlohmann::ordered_json::parse(raw);
  return doc.dump(2) + "\n";
}

}  // namespace minkperi
