#include "minkperi/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "minkperi/errors.hpp"
#include "minkperi/io.hpp"
#include "minkperi/parallel.hpp"
#include "minkperi/riesz.hpp"

namespace minkperi {

namespace {

constexpr double kPi = std::numbers::pi;

// Principal axes of the area distribution. `extent` is the side length of
// the rectangle with the same second moment (sqrt(12 variance)).
struct Frame {
  Vec3 center;
  std::array<Vec3, 2> axis;
  std::array<double, 2> extent;
};

Frame principal_frame(const ConvexPolytope& p) {
  const Vec3 c = centroid(p);
  const auto& v = p.vertices();
  double a = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec3 u = v[i] - c;
    const Vec3 w = v[(i + 1) % v.size()] - c;
    const double cr = cross2(u, w);
    a += cr;
    sxx += cr * (u.x * u.x + u.x * w.x + w.x * w.x);
    syy += cr * (u.y * u.y + u.y * w.y + w.y * w.y);
    sxy += cr * (2.0 * u.x * u.y + u.x * w.y + w.x * u.y + 2.0 * w.x * w.y);
  }
  // Moments / area: sxx / (12 * (a / 2)) = sxx / (6a), sxy / (12a).
  const double cxx = sxx / (6.0 * a), cyy = syy / (6.0 * a), cxy = sxy / (12.0 * a);
  const double mean = 0.5 * (cxx + cyy);
  const double dev = std::hypot(0.5 * (cxx - cyy), cxy);
  const double theta = 0.5 * std::atan2(2.0 * cxy, cxx - cyy);
  Frame f;
  f.center = c;
  f.axis = {Vec3{std::cos(theta), std::sin(theta), 0}, Vec3{-std::sin(theta), std::cos(theta), 0}};
  f.extent = {std::sqrt(12.0 * (mean + dev)), std::sqrt(12.0 * std::max(mean - dev, 0.0))};
  return f;
}

// Rectangle of length L and area 1 with its corners cut so it has 8
// vertices; the cut is 5% of the short side.
ConvexPolytope chamfered_box(double length) {
  const double w = 1.0 / length;
  const double c = 0.05 * w;
  const double x = 0.5 * length, y = 0.5 * w;
  std::vector<Vec3> pts{{-x + c, -y, 0}, {x - c, -y, 0}, {x, -y + c, 0}, {x, y - c, 0},
                        {x - c, y, 0},   {-x + c, y, 0}, {-x, y - c, 0}, {-x, -y + c, 0}};
  return rescale_to_volume(convex_hull(pts, 2), 1.0);
}

ConvexPolytope random_start(std::mt19937_64& eng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double aspect = 1.0 + 3.0 * unit(eng);
  std::vector<Vec3> pts(16);
  for (auto& q : pts) {
    const double t = 2.0 * kPi * unit(eng);
    q = {std::sqrt(aspect) * std::cos(t), std::sin(t) / std::sqrt(aspect), 0};
  }
  return rescale_to_volume(convex_hull(pts, 2), 1.0);
}

std::mt19937_64 restart_engine(std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  return std::mt19937_64(seq);
}

double phi_on_grid(const ConvexPolytope& p, const OptimizerConfig& cfg) {
  double min_width = std::numeric_limits<double>::infinity();
  const auto& v = p.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    Vec3 e = v[(i + 1) % v.size()] - v[i];
    e = (1.0 / norm(e)) * e;
    min_width = std::min(min_width, width(p, Vec3{-e.y, e.x, 0}));
  }
  const Frame f = principal_frame(p);
  const double box_area = width(p, f.axis[0]) * width(p, f.axis[1]);
  double h = min_width / cfg.cells_across;
  // Bounding-box cells stand in for the grid size; the cap wins.
  h = std::max(h, std::sqrt(box_area / static_cast<double>(cfg.max_cells)));
  const GridLimits glimits{4 * cfg.max_cells};
  const RieszLimits rlimits{20000, 16 * cfg.max_cells};
  return riesz_energy_fast(rasterize(p, h, glimits), RieszKernel::make(2, cfg.alpha, h), rlimits);
}

struct Proposal {
  ProposalKind kind;
  std::optional<ConvexPolytope> shape;
};

class Annealer {
 public:
  Annealer(const OptimizerConfig& cfg, int restart) : cfg_(cfg), eng_(restart_engine(cfg.seed, restart)) {}

  ConvexPolytope start(int restart) {
    if (restart == 0) {
      return rescale_to_volume(regular_polygon(cfg_.ball_vertices, 1.0), 1.0);
    }
    if (restart == 1) {
      double len = 2.0;  // aspect 4
      if (cfg_.alpha < cfg_.n - 1.0) len = std::max(len, comparison_length(cfg_.m, cfg_.alpha, cfg_.n));
      return chamfered_box(len);
    }
    return random_start(eng_);
  }

  Proposal propose(const ConvexPolytope& p, double step) {
    const double u = unit_(eng_);
    const Frame f = principal_frame(p);
    std::vector<Vec3> pts = p.vertices();
    const int k = static_cast<int>(pts.size());
    std::uniform_int_distribution<int> pick(0, k - 1);
    ProposalKind kind = ProposalKind::kVertex;
    if (u < 0.1) {
      kind = ProposalKind::kInsert;
      if (k >= cfg_.max_vertices) return {kind, std::nullopt};
      const int i = pick(eng_);
      const Vec3 a = pts[i], b = pts[(i + 1) % k];
      Vec3 nrm{b.y - a.y, a.x - b.x, 0};
      nrm = (1.0 / norm(nrm)) * nrm;
      const double out = std::abs(gauss_(eng_)) * step * width(p, nrm);
      pts.insert(pts.begin() + i + 1, 0.5 * (a + b) + out * nrm);
    } else if (u < 0.2) {
      kind = ProposalKind::kDelete;
      if (k <= cfg_.min_vertices) return {kind, std::nullopt};
      pts.erase(pts.begin() + pick(eng_));
    } else if (u < 0.3) {
      kind = ProposalKind::kStretch;
      const double t = step * gauss_(eng_);
      const double s0 = std::exp(t), s1 = std::exp(-t);
      for (auto& x : pts) {
        const Vec3 d = x - f.center;
        x = f.center + (s0 * dot(d, f.axis[0])) * f.axis[0] + (s1 * dot(d, f.axis[1])) * f.axis[1];
      }
    } else {
      const int i = pick(eng_);
      const double g0 = gauss_(eng_), g1 = gauss_(eng_);
      pts[i] = pts[i] + (step * g0 * f.extent[0]) * f.axis[0] + (step * g1 * f.extent[1]) * f.axis[1];
    }
    try {
      auto hull = convex_hull(pts, 2);
      const int count = static_cast<int>(hull.size());
      if (count < cfg_.min_vertices || count > cfg_.max_vertices) return {kind, std::nullopt};
      return {kind, rescale_to_volume(hull, 1.0)};
    } catch (const DegenerateInput&) {
      return {kind, std::nullopt};
    }
  }

  void run(int restart, std::vector<StepRecord>& steps, CandidateShape& best) {
    CandidateShape current = make_candidate(start(restart), cfg_);
    best = current;
    steps.push_back({restart, 0, ProposalKind::kStart, true, current.total});
    const std::size_t patience = cfg_.patience ? cfg_.patience : std::max<std::size_t>(cfg_.steps / 4, 1);
    std::vector<double> best_history{best.total};
    double temperature = cfg_.initial_temperature;
    double multiplier = 1.0;
    std::size_t window_accepts = 0;
    constexpr std::size_t kWindow = 50;
    for (std::size_t step = 1; step <= cfg_.steps; ++step) {
      auto prop = propose(current.polytope, cfg_.proposal_scale * multiplier);
      bool accepted = false;
      if (prop.shape) {
        CandidateShape next = make_candidate(*prop.shape, cfg_);
        const double delta = next.total - current.total;
        const double threshold = temperature * std::abs(current.total);
        // The uniform draw is consumed on every valid proposal so the stream
        // does not depend on the energy comparison.
        const double draw = unit_(eng_);
        accepted = delta <= 0.0 || (threshold > 0.0 && draw < std::exp(-delta / threshold));
        if (accepted) {
          current = std::move(next);
          if (current.total < best.total) best = current;
        }
      }
      steps.push_back({restart, step, prop.kind, accepted, current.total});
      window_accepts += accepted ? 1 : 0;
      if (step % kWindow == 0) {
        const double rate = static_cast<double>(window_accepts) / kWindow;
        if (rate > 0.5) multiplier *= 1.25;
        if (rate < 0.15) multiplier *= 0.8;
        multiplier = std::clamp(multiplier, 1e-4, 2.0);
        window_accepts = 0;
      }
      temperature *= cfg_.decay;
      best_history.push_back(best.total);
      if (step >= patience &&
          best_history[step - patience] - best.total <= cfg_.tolerance * std::abs(best.total)) {
        break;
      }
    }
  }

 private:
  const OptimizerConfig& cfg_;
  std::mt19937_64 eng_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::normal_distribution<double> gauss_{0.0, 1.0};
};

}  // namespace

void validate_config(const OptimizerConfig& cfg, bool sweep) {
  auto fail = [](const std::string& what) { throw InvalidArgument(what); };
  if (cfg.n != 2) fail("the optimizer works on planar polygons (n = 2)");
  if (!(cfg.m > 0.0) || !std::isfinite(cfg.m)) fail("m must be positive");
  if (!(cfg.r > 0.0) || !(cfg.r < 1.0)) fail("r must lie in (0, 1)");
  if (!(cfg.alpha > 0.0) || !(cfg.alpha < cfg.n)) fail("alpha must lie in (0, n)");
  if (cfg.alpha >= 2.0) fail("the planar Riesz energy needs alpha < 2");
  if (sweep && !(cfg.alpha < cfg.n - 1.0)) {
    fail("volume sweeps need alpha in (0, n - 1)");
  }
  if (!(cfg.initial_temperature >= 0.0)) fail("initial_temperature must be non-negative");
  if (!(cfg.decay > 0.0) || !(cfg.decay <= 1.0)) fail("decay must lie in (0, 1]");
  if (!(cfg.proposal_scale > 0.0)) fail("proposal_scale must be positive");
  if (cfg.restarts < 1) fail("restarts must be at least 1");
  if (cfg.cells_across < 1) fail("cells_across must be at least 1");
  if (!(cfg.tolerance >= 0.0)) fail("tolerance must be non-negative");
  if (cfg.coupling && !(*cfg.coupling >= 0.0)) fail("coupling must be non-negative");
  if (!(cfg.phi_tolerance > 0.0)) fail("phi_tolerance must be positive");
  if (cfg.min_vertices < 3 || cfg.max_vertices < cfg.min_vertices) {
    fail("vertex bounds must satisfy 3 <= min_vertices <= max_vertices");
  }
  if (cfg.ball_vertices < cfg.min_vertices || cfg.ball_vertices > cfg.max_vertices) {
    fail("ball_vertices must lie within the vertex bounds");
  }
}

std::string config_to_json(const OptimizerConfig& cfg) {
  nlohmann::ordered_json j;
  j["m"] = cfg.m;
  j["alpha"] = cfg.alpha;
  j["r"] = cfg.r;
  j["n"] = cfg.n;
  j["seed"] = cfg.seed;
  j["initial_temperature"] = cfg.initial_temperature;
  j["decay"] = cfg.decay;
  j["steps"] = cfg.steps;
  j["proposal_scale"] = cfg.proposal_scale;
  j["restarts"] = cfg.restarts;
  j["cells_across"] = cfg.cells_across;
  j["max_cells"] = cfg.max_cells;
  j["tolerance"] = cfg.tolerance;
  j["patience"] = cfg.patience;
  j["coupling"] = nullptr;
  if (cfg.coupling) j["coupling"] = *cfg.coupling;
  j["phi_method"] = cfg.phi_method == PhiMethod::kExact ? "exact" : "grid";
  j["phi_tolerance"] = cfg.phi_tolerance;
  j["min_vertices"] = cfg.min_vertices;
  j["max_vertices"] = cfg.max_vertices;
  j["ball_vertices"] = cfg.ball_vertices;
  return j.dump(2) + "\n";
}

OptimizerConfig config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  OptimizerConfig cfg;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "m") cfg.m = value.get<double>();
      else if (key == "alpha") cfg.alpha = value.get<double>();
      else if (key == "r") cfg.r = value.get<double>();
      else if (key == "n") cfg.n = value.get<int>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "initial_temperature") cfg.initial_temperature = value.get<double>();
      else if (key == "decay") cfg.decay = value.get<double>();
      else if (key == "steps") cfg.steps = value.get<std::size_t>();
      else if (key == "proposal_scale") cfg.proposal_scale = value.get<double>();
      else if (key == "restarts") cfg.restarts = value.get<int>();
      else if (key == "cells_across") cfg.cells_across = value.get<int>();
      else if (key == "max_cells") cfg.max_cells = value.get<std::size_t>();
      else if (key == "tolerance") cfg.tolerance = value.get<double>();
      else if (key == "patience") cfg.patience = value.get<std::size_t>();
      else if (key == "coupling") {
        if (value.is_null()) cfg.coupling.reset();
        else cfg.coupling = value.get<double>();
      } else if (key == "phi_method") {
        const auto name = value.get<std::string>();
        if (name == "exact") cfg.phi_method = PhiMethod::kExact;
        else if (name == "grid") cfg.phi_method = PhiMethod::kGrid;
        else throw ParseError("phi_method must be \"exact\" or \"grid\"");
      } else if (key == "phi_tolerance") cfg.phi_tolerance = value.get<double>();
      else if (key == "min_vertices") cfg.min_vertices = value.get<int>();
      else if (key == "max_vertices") cfg.max_vertices = value.get<int>();
      else if (key == "ball_vertices") cfg.ball_vertices = value.get<int>();
      else throw ParseError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config has a field of the wrong type: ") + e.what());
  }
  return cfg;
}

std::string config_hash(const OptimizerConfig& cfg) { return sha256_hex(config_to_json(cfg)); }

double elongation_exponent(double alpha, int n) {
  return (n - 1.0) / n * ((n + 1.0 - alpha) / (alpha * (n - 1.0) + 1.0));
}

double comparison_length(double m, double alpha, int n) {
  return std::pow(m, elongation_exponent(alpha, n));
}

double coupling_factor(const OptimizerConfig& cfg) {
  if (cfg.coupling) return *cfg.coupling;
  return std::pow(cfg.m, (cfg.n + 1.0 - cfg.alpha) / cfg.n);
}

double total_energy(CandidateShape& s, const OptimizerConfig& cfg) {
  const double coupling = coupling_factor(cfg);
  s.per_r = perimeter_convex_exact(s.polytope, cfg.r);
  if (coupling == 0.0) {
    s.phi = 0.0;
  } else if (cfg.phi_method == PhiMethod::kExact) {
    s.phi = riesz_energy_polygon(s.polytope, cfg.alpha, cfg.phi_tolerance);
  } else {
    s.phi = phi_on_grid(s.polytope, cfg);
  }
  s.total = s.per_r + coupling * s.phi;
  return s.total;
}

CandidateShape make_candidate(const ConvexPolytope& p, const OptimizerConfig& cfg) {
  CandidateShape s{rescale_to_volume(p, 1.0)};
  total_energy(s, cfg);
  return s;
}

double ball_energy(const OptimizerConfig& cfg) {
  const double radius = ball_radius_for_volume(2, 1.0);
  return ball_perimeter_analytic(radius, cfg.r, 2) +
         coupling_factor(cfg) * riesz_energy_disk(radius, cfg.alpha);
}

std::string_view to_string(ProposalKind k) {
  switch (k) {
    case ProposalKind::kStart: return "start";
    case ProposalKind::kVertex: return "vertex";
    case ProposalKind::kInsert: return "insert";
    case ProposalKind::kDelete: return "delete";
    case ProposalKind::kStretch: return "stretch";
  }
  return "?";
}

std::string trace_ndjson(const OptimizationTrace& trace) {
  std::ostringstream out;
  for (const auto& s : trace.steps) {
    out << "{\"restart\":" << s.restart << ",\"step\":" << s.step << ",\"kind\":\""
        << to_string(s.kind) << "\",\"accepted\":" << (s.accepted ? "true" : "false")
        << ",\"energy\":" << format_double(s.energy) << "}\n";
  }
  return out.str();
}

OptimizationTrace minimize(const OptimizerConfig& cfg) {
  validate_config(cfg);
  const auto restarts = static_cast<std::size_t>(cfg.restarts);
  std::vector<std::vector<StepRecord>> steps(restarts);
  std::vector<std::optional<CandidateShape>> bests(restarts);
  parallel_for(restarts, [&](std::size_t i) {
    CandidateShape best;
    try {
      Annealer(cfg, static_cast<int>(i)).run(static_cast<int>(i), steps[i], best);
      bests[i] = std::move(best);
    } catch (const DegenerateInput&) {
      // A restart whose start cannot be built is skipped.
    }
  });
  OptimizationTrace trace;
  trace.seed = cfg.seed;
  trace.config_hash = config_hash(cfg);
  trace.best_restart = -1;
  for (std::size_t i = 0; i < restarts; ++i) {
    trace.restart_best.push_back(bests[i] ? bests[i]->total
                                          : std::numeric_limits<double>::quiet_NaN());
    trace.steps.insert(trace.steps.end(), steps[i].begin(), steps[i].end());
    if (bests[i] && (trace.best_restart < 0 || bests[i]->total < trace.best.total)) {
      trace.best = *bests[i];
      trace.best_restart = static_cast<int>(i);
    }
  }
  if (trace.best_restart < 0) throw OptimizerFailure("no restart produced a valid shape");
  trace.best_energy = trace.best.total;
  return trace;
}

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  SlopeFit fit;
  fit.points = lx.size();
  if (lx.size() < 2) return fit;
  const double k = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (lx.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      const double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
      rss += e * e;
    }
    fit.std_error = std::sqrt(rss / (k - 2.0) / sxx);
  }
  return fit;
}

namespace {

SweepPoint evaluate_point(double m, const OptimizerConfig& templ) {
  OptimizerConfig cfg = templ;
  cfg.m = m;
  const auto trace = minimize(cfg);
  SweepPoint pt;
  pt.m = m;
  pt.shape = trace.best;
  const auto& poly = pt.shape.polytope;
  pt.asymmetry = fraenkel_asymmetry(poly).value;
  pt.hausdorff = hausdorff_to_ball_translated(poly, ball_radius_for_volume(2, 1.0)).distance;
  pt.diameter = diameter(poly);
  const auto box = john_box(poly);
  pt.lambdas = {box.lambdas[0], box.lambdas[1]};
  pt.energy = trace.best_energy;
  pt.ball_energy = ball_energy(cfg);
  return pt;
}

}  // namespace

SmallSweepReport small_volume_sweep(const std::vector<double>& m_list,
                                    const OptimizerConfig& templ, double noise_band) {
  if (m_list.empty()) throw InvalidArgument("m_list is empty");
  validate_config(templ, true);
  SmallSweepReport report;
  report.rate_exponent = (templ.n + 1.0 - templ.alpha) / templ.n;
  // Close to the hypothesis boundary the ball regime shrinks.
  if (templ.alpha >= 0.9 * (templ.n - 1.0)) {
    report.ball_threshold = 0.08;
    report.threshold_relaxed = true;
  }
  for (double m : m_list) {
    auto pt = evaluate_point(m, templ);
    pt.ball = pt.asymmetry <= report.ball_threshold;
    report.points.push_back(std::move(pt));
  }
  std::vector<double> ms, asyms;
  for (const auto& pt : report.points) {
    ms.push_back(pt.m);
    asyms.push_back(pt.asymmetry);
    if (pt.ball && (!report.largest_ball_m || pt.m > *report.largest_ball_m)) {
      report.largest_ball_m = pt.m;
    }
  }
  report.asymmetry_fit = fit_loglog(ms, asyms);
  auto smallest = std::min_element(report.points.begin(), report.points.end(),
                                   [](const auto& a, const auto& b) { return a.m < b.m; });
  report.ball_at_smallest = smallest->ball;
  // Walk from large to small m.
  std::vector<const SweepPoint*> order;
  for (const auto& pt : report.points) order.push_back(&pt);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->m > b->m; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (order[i]->asymmetry > (1.0 + noise_band) * order[i - 1]->asymmetry) report.monotone = false;
  }
  report.passed = report.ball_at_smallest && report.monotone;
  return report;
}

LargeSweepReport large_volume_sweep(const std::vector<double>& m_list,
                                    const OptimizerConfig& templ) {
  if (m_list.empty()) throw InvalidArgument("m_list is empty");
  validate_config(templ, true);
  LargeSweepReport report;
  const double t = elongation_exponent(templ.alpha, templ.n);
  report.target_slope = t;
  report.diameter_window = {0.85 * t, 1.15 * t};
  report.lambda1_window = {-1.25 * t, -0.75 * t};
  for (double m : m_list) {
    auto pt = evaluate_point(m, templ);
    const double s = std::pow(m, -t);
    pt.diameter_hat = s * pt.diameter;
    pt.lambda1_hat = s * pt.lambdas[0];
    report.points.push_back(std::move(pt));
  }
  std::vector<double> ms, diams, l1;
  for (const auto& pt : report.points) {
    ms.push_back(pt.m);
    diams.push_back(pt.diameter);
    l1.push_back(pt.lambdas[0]);
  }
  report.diameter_fit = fit_loglog(ms, diams);
  report.lambda1_fit = fit_loglog(ms, l1);
  const auto within = [](double x, const std::array<double, 2>& w) {
    return x >= w[0] && x <= w[1];
  };
  report.diameter_ok =
      report.diameter_fit.points >= 2 && within(report.diameter_fit.slope, report.diameter_window);
  report.lambda1_ok = report.lambda1_fit.points >= 2 && report.lambda1_fit.slope < 0.0 &&
                      within(report.lambda1_fit.slope, report.lambda1_window);
  report.passed = report.diameter_ok && report.lambda1_ok;
  return report;
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::ostringstream out;
  out << "m,asymmetry,hausdorff,diameter,lambda1,lambda2,per_r,phi,energy,ball_energy,ball,"
         "diameter_hat,lambda1_hat\n";
  for (const auto& pt : points) {
    out << format_double(pt.m) << ',' << format_double(pt.asymmetry) << ','
        << format_double(pt.hausdorff) << ',' << format_double(pt.diameter) << ','
        << format_double(pt.lambdas[0]) << ',' << format_double(pt.lambdas[1]) << ','
        << format_double(pt.shape.per_r) << ',' << format_double(pt.shape.phi) << ','
        << format_double(pt.energy) << ',' << format_double(pt.ball_energy) << ','
        << (pt.ball ? "true" : "false") << ',' << format_double(pt.diameter_hat) << ','
        << format_double(pt.lambda1_hat) << '\n';
  }
  return out.str();
}

}  // namespace minkperi
