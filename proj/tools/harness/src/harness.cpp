#include "minkperi/harness.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <new>
#include <sstream>

#include <nlohmann/json.hpp>

#include "minkperi/convex_geometry.hpp"
#include "minkperi/errors.hpp"
#include "minkperi/grid_geometry.hpp"
#include "minkperi/io.hpp"
#include "minkperi/optimizer.hpp"
#include "minkperi/riesz.hpp"
#include "minkperi/verification.hpp"

#ifndef MINKPERI_VERSION
#define MINKPERI_VERSION "0.0.0"
#endif

namespace minkperi::harness {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kResourceLimit:
    case ErrorKind::kResolution:
      return kExitResource;
    case ErrorKind::kInequalityViolation:
    case ErrorKind::kOptimizerFailure:
      return kExitCheckFailed;
    default:
      return kExitInvalidInput;
  }
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ResolutionError& e) {
    err << "error: " << e.what() << " (largest accepted h: " << format_double(e.max_spacing())
        << ")\n";
    return kExitResource;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return kExitResource;
  } catch (const json::exception& e) {
    err << "error: bad JSON value: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

fs::path output_dir(const RunOptions& opts, const std::string& command) {
  return opts.out ? *opts.out : fs::path("minkperi_" + command);
}

void start_run(const std::string& command, const RunOptions& opts, const fs::path& dir,
               const std::vector<fs::path>& inputs) {
  ExperimentManifest manifest;
  manifest.command = command;
  manifest.config_path = opts.config;
  manifest.seed = opts.seed;
  manifest.output_dir = dir;
  manifest.tool_version = tool_version();
  for (const auto& p : inputs) manifest.input_hashes[p.string()] = sha256_file(p);
  manifest.timestamp = utc_timestamp();
  write_manifest(manifest);
}

json load_json_object(const fs::path& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + " is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ParseError(path.string() + " must hold a JSON object");
  return doc;
}

json number_or_null(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

// Saves an offending shape for replay and returns its path.
fs::path dump_shape(const fs::path& dir, const ShapeSample& sample) {
  fs::create_directories(dir);
  if (const auto* p = std::get_if<ConvexPolytope>(&sample.shape)) {
    const auto path = dir / (sample.id + ".json");
    write_text_file(path, polytope_to_json(*p));
    return path;
  }
  const auto path = dir / (sample.id + ".pgm");
  std::ofstream f(path, std::ios::binary);
  write_pgm(f, std::get<GridSet>(sample.shape));
  return path;
}

// Planar grid: hull of the corners of occupied cells.
std::optional<ConvexPolytope> grid_hull(const GridSet& set) {
  if (set.dim() != 2 || set.empty()) return std::nullopt;
  std::vector<Vec3> pts;
  const double h = set.spacing();
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (!set.occupied(i)) continue;
    const Vec3 c = set.geometry().cell_center(i);
    for (double dx : {-0.5, 0.5}) {
      for (double dy : {-0.5, 0.5}) pts.push_back({c.x + dx * h, c.y + dy * h, 0});
    }
  }
  return convex_hull(pts, 2);
}

}  // namespace

std::string tool_version() { return MINKPERI_VERSION; }

std::string manifest_json(const ExperimentManifest& m) {
  json doc;
  doc["command"] = m.command;
  doc["config_path"] = m.config_path ? json(m.config_path->string()) : json(nullptr);
  doc["seed"] = m.seed ? json(*m.seed) : json(nullptr);
  doc["output_dir"] = m.output_dir.string();
  doc["tool_version"] = m.tool_version;
  doc["input_hashes"] = json::object();
  for (const auto& [path, hash] : m.input_hashes) doc["input_hashes"][path] = hash;
  doc["timestamp"] = m.timestamp;
  return doc.dump(2) + "\n";
}

void write_manifest(const ExperimentManifest& manifest) {
  fs::create_directories(manifest.output_dir);
  write_text_file(manifest.output_dir / "manifest.json", manifest_json(manifest));
}

int cmd_measure(const fs::path& shape_file, const RunOptions& opts, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    if (!opts.r) throw InvalidArgument("measure needs --r");
    const double r = *opts.r;
    const double alpha = opts.alpha.value_or(1.0);
    if (opts.out) start_run("measure", opts, *opts.out, {shape_file});
    Shape shape = read_shape(shape_file);
    if (opts.h) {
      if (const auto* p = std::get_if<ConvexPolytope>(&shape)) shape = rasterize(*p, *opts.h);
    }

    json doc;
    doc["shape"] = shape_file.string();
    double vol = 0.0, per = 0.0, phi = 0.0, diam = 0.0;
    std::optional<std::array<double, 2>> lambdas;
    if (const auto* p = std::get_if<ConvexPolytope>(&shape)) {
      doc["method"] = "exact";
      doc["n"] = p->dim();
      vol = volume_polytope(*p);
      per = perimeter_convex_exact(*p, r);
      phi = riesz_energy_polygon(*p, alpha);
      diam = diameter(*p);
      const auto box = john_box(*p);
      lambdas = std::array<double, 2>{box.lambdas[0], box.lambdas[1]};
    } else {
      const auto& g = std::get<GridSet>(shape);
      doc["method"] = "grid";
      doc["n"] = g.dim();
      vol = volume(g);
      if (vol == 0.0) {
        doc["volume"] = 0.0;
        doc["phi"] = 0.0;
        doc["per_r"] = nullptr;
        out << doc.dump(2) << "\n";
        throw InvalidArgument("the r-perimeter of an empty set is undefined");
      }
      per = minkowski_perimeter(g, r);
      phi = riesz_energy_fast(g, RieszKernel::make(g.dim(), alpha, g.spacing()));
      if (const auto hull = grid_hull(g)) {
        diam = diameter(*hull);
        const auto box = john_box(*hull);
        lambdas = std::array<double, 2>{box.lambdas[0], box.lambdas[1]};
      }
    }
    const double riesz1_lhs = phi * std::pow(diam, alpha);
    const bool holds = riesz1_lhs >= vol * vol;
    doc["volume"] = vol;
    doc["r"] = r;
    doc["alpha"] = alpha;
    doc["per_r"] = per;
    doc["phi"] = phi;
    doc["diameter"] = diam;
    doc["lambdas"] = lambdas ? json(*lambdas) : json(nullptr);
    doc["riesz1"] = {{"lhs", riesz1_lhs}, {"rhs", vol * vol}, {"holds", holds}};
    out << doc.dump(2) << "\n";

    std::ostringstream csv;
    csv << "shape,method,volume,r,alpha,per_r,phi,diameter,lambda1,lambda2,riesz1_holds\n"
        << shape_file.string() << ',' << doc["method"].get<std::string>() << ','
        << format_double(vol) << ',' << format_double(r) << ',' << format_double(alpha) << ','
        << format_double(per) << ',' << format_double(phi) << ',' << format_double(diam) << ','
        << (lambdas ? format_double((*lambdas)[0]) : "") << ','
        << (lambdas ? format_double((*lambdas)[1]) : "") << ',' << (holds ? "true" : "false")
        << '\n';
    if (opts.out) {
      write_text_file(*opts.out / "measure.json", doc.dump(2) + "\n");
      write_text_file(*opts.out / "measure.csv", csv.str());
    } else {
      out << csv.str();
    }
    if (!holds) {
      err << "riesz1 bound violated: Phi * diam^alpha < |E|^2\n";
      return static_cast<int>(kExitCheckFailed);
    }
    return static_cast<int>(kExitOk);
  });
}

namespace {

struct SuiteSettings {
  Family family = Family::kRandomHulls;
  double r = 0.1;
  double alpha = 0.5;
  std::size_t trials = 200;
  std::uint64_t seed = 42;
  double tolerance = 1e-3;
  FamilyOptions family_options;
  std::vector<double> lengths{4, 8, 16, 32};
  int n = 2;
  double band = 0.2;
  double equality_band = 1e-2;
  double equality_asymmetry = 0.1;
};

SuiteSettings suite_settings(const std::string& suite, const RunOptions& opts) {
  SuiteSettings s;
  if (suite == "bm") s.r = 1.0;
  if (suite == "cylinder") s.r = 0.5;
  if (opts.config) {
    const json doc = load_json_object(*opts.config);
    for (const auto& [key, v] : doc.items()) {
      if (key == "family") {
        const auto f = family_from_string(v.get<std::string>());
        if (!f) throw ParseError("unknown family '" + v.get<std::string>() + "'");
        s.family = *f;
      } else if (key == "r") s.r = v.get<double>();
      else if (key == "alpha") s.alpha = v.get<double>();
      else if (key == "trials") s.trials = v.get<std::size_t>();
      else if (key == "seed") s.seed = v.get<std::uint64_t>();
      else if (key == "tolerance") s.tolerance = v.get<double>();
      else if (key == "h") s.family_options.h = v.get<double>();
      else if (key == "smooth_vertices") s.family_options.smooth_vertices = v.get<int>();
      else if (key == "lengths") s.lengths = v.get<std::vector<double>>();
      else if (key == "n") s.n = v.get<int>();
      else if (key == "band") s.band = v.get<double>();
      else if (key == "equality_band") s.equality_band = v.get<double>();
      else if (key == "equality_asymmetry") s.equality_asymmetry = v.get<double>();
      else throw ParseError("unknown key '" + key + "' in " + opts.config->string());
    }
  }
  if (opts.r) s.r = *opts.r;
  if (opts.alpha) s.alpha = *opts.alpha;
  if (opts.trials) s.trials = *opts.trials;
  if (opts.seed) s.seed = *opts.seed;
  if (opts.h) s.family_options.h = *opts.h;
  return s;
}

void report_violations(const fs::path& dir, const std::vector<std::size_t>& violating,
                       const SuiteSettings& s, std::ostream& err) {
  for (std::size_t i : violating) {
    const auto sample = generate_shape(s.family, s.seed, i, s.trials, s.family_options);
    err << "violation: " << sample.id << " saved to "
        << dump_shape(dir / "violations", sample).string() << "\n";
  }
}

json ranges_json(const BoundsReport& report) {
  json ranges = json::object();
  for (std::size_t t = 0; t < report.constant_range.size(); ++t) {
    const auto& [lo, hi] = report.constant_range[t];
    if (lo <= hi) ranges[std::string(to_string(static_cast<BoundTag>(t)))] = {lo, hi};
  }
  return ranges;
}

}  // namespace

int cmd_verify(const std::string& suite, const RunOptions& opts, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    if (suite != "iso" && suite != "bm" && suite != "bounds" && suite != "cylinder" &&
        suite != "potential-gap") {
      throw InvalidArgument("unknown suite '" + suite +
                            "' (expected iso, bm, bounds, cylinder or potential-gap)");
    }
    const SuiteSettings s = suite_settings(suite, opts);
    const fs::path dir = output_dir(opts, "verify");
    std::vector<fs::path> inputs;
    if (opts.config) inputs.push_back(*opts.config);
    start_run("verify " + suite, opts, dir, inputs);

    std::string summary;
    std::size_t violations = 0;
    if (suite == "iso") {
      const auto rep = check_quantitative_iso(s.family, s.r, s.trials, s.seed,
                                              {s.tolerance, s.family_options});
      write_text_file(dir / "iso_records.csv", deficit_csv(rep.records));
      write_text_file(dir / "iso_scatter.csv", deficit_scatter_csv(rep.records));
      summary = summary_json(rep.summary,
                             {{"r", format_double(s.r)},
                              {"tolerance", format_double(s.tolerance)},
                              {"min_proof_constant", number_or_null(rep.min_proof_constant).dump()},
                              {"equality_outliers", std::to_string(rep.equality_outliers)}});
      report_violations(dir, rep.violating, s, err);
      violations = rep.summary.violations;
    } else if (suite == "bm") {
      const auto rep = check_bm_family(
          s.family, s.r, s.trials, s.seed,
          {s.tolerance, s.equality_band, s.equality_asymmetry, s.family_options});
      write_text_file(dir / "bm_records.csv", bound_csv(rep.records));
      summary = summary_json(rep.summary, {{"r", format_double(s.r)},
                                           {"tolerance", format_double(s.tolerance)},
                                           {"equality_outliers",
                                            std::to_string(rep.equality_outliers)}});
      report_violations(dir, rep.violating, s, err);
      violations = rep.summary.violations;
    } else if (suite == "bounds") {
      const auto rep = check_bounds_family(s.family, s.r, s.alpha, s.trials, s.seed,
                                           s.family_options);
      write_text_file(dir / "bounds_records.csv", bound_csv(rep.records));
      summary = summary_json(rep.summary, {{"r", format_double(s.r)},
                                           {"alpha", format_double(s.alpha)},
                                           {"constant_ranges", ranges_json(rep).dump()}});
      report_violations(dir, rep.violating, s, err);
      violations = rep.summary.violations;
    } else if (suite == "potential-gap") {
      const auto rep = check_potential_gap_family(s.family, s.alpha, s.trials, s.seed,
                                                  s.family_options);
      write_text_file(dir / "potential-gap_records.csv", bound_csv(rep.records));
      summary = summary_json(rep.summary,
                             {{"alpha", format_double(s.alpha)},
                              {"explicit_constant", format_double(potential_gap_constant(2, s.alpha))},
                              {"constant_ranges", ranges_json(rep).dump()}});
      report_violations(dir, rep.violating, s, err);
      violations = rep.summary.violations;
    } else {
      const auto rep = check_cylinders(s.lengths, s.r, s.alpha, s.n, s.band);
      write_text_file(dir / "cylinder_records.csv", bound_csv(rep.records));
      json doc;
      doc["lengths"] = s.lengths;
      doc["r"] = s.r;
      doc["alpha"] = s.alpha;
      doc["n"] = s.n;
      doc["band"] = s.band;
      doc["perc1_spread"] = rep.perc1_spread;
      doc["phic_spread"] = rep.phic_spread;
      doc["stable"] = rep.stable;
      summary = doc.dump(2) + "\n";
      violations = rep.stable ? 0 : 1;
    }
    write_text_file(dir / (suite + "_summary.json"), summary);
    out << summary;
    return static_cast<int>(violations == 0 ? kExitOk : kExitCheckFailed);
  });
}

namespace {

// Optimizer config from --config plus flag overrides. `extra` receives keys
// the optimizer does not know (only m_list is accepted there).
OptimizerConfig optimizer_config(const RunOptions& opts, std::vector<double>* m_list) {
  OptimizerConfig cfg;
  if (opts.config) {
    json doc = load_json_object(*opts.config);
    if (doc.contains("m_list")) {
      if (!m_list) throw ParseError("m_list is only valid for sweeps");
      *m_list = doc["m_list"].get<std::vector<double>>();
      doc.erase("m_list");
    }
    cfg = config_from_json(doc.dump());
  }
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.m) cfg.m = *opts.m;
  if (opts.r) cfg.r = *opts.r;
  if (opts.alpha) cfg.alpha = *opts.alpha;
  return cfg;
}

}  // namespace

int cmd_optimize(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const OptimizerConfig cfg = optimizer_config(opts, nullptr);
    const fs::path dir = output_dir(opts, "optimize");
    std::vector<fs::path> inputs;
    if (opts.config) inputs.push_back(*opts.config);
    start_run("optimize", opts, dir, inputs);
    validate_config(cfg);
    write_text_file(dir / "config.json", config_to_json(cfg));

    const auto trace = minimize(cfg);
    const auto& poly = trace.best.polytope;
    const double radius = ball_radius_for_volume(2, 1.0);
    const double asym = fraenkel_asymmetry(poly).value;
    const auto box = john_box(poly);
    const double ball_e = ball_energy(cfg);
    json doc;
    doc["config_hash"] = trace.config_hash;
    doc["seed"] = trace.seed;
    doc["m"] = cfg.m;
    doc["coupling"] = coupling_factor(cfg);
    doc["energy"] = trace.best_energy;
    doc["per_r"] = trace.best.per_r;
    doc["phi"] = trace.best.phi;
    doc["ball_energy"] = ball_e;
    doc["asymmetry"] = asym;
    doc["hausdorff_to_ball"] = hausdorff_to_ball_translated(poly, radius).distance;
    doc["diameter"] = diameter(poly);
    doc["lambdas"] = {box.lambdas[0], box.lambdas[1]};
    doc["ball"] = asym <= 0.03;
    doc["vertices"] = poly.size();
    doc["best_restart"] = trace.best_restart;
    doc["restart_best"] = trace.restart_best;
    write_text_file(dir / "shape.json", polytope_to_json(poly));
    write_text_file(dir / "trace.ndjson", trace_ndjson(trace));
    write_text_file(dir / "result.json", doc.dump(2) + "\n");
    out << doc.dump(2) << "\n";
    // The disk is always admissible, so a worse result means the search failed.
    if (trace.best_energy > ball_e + 1e-3) {
      err << "optimizer result is worse than the disk by " << trace.best_energy - ball_e << "\n";
      return static_cast<int>(kExitCheckFailed);
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_sweep(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::string mode = opts.mode.value_or("");
    if (mode != "small" && mode != "large") throw InvalidArgument("--mode must be small or large");
    std::vector<double> m_list;
    const OptimizerConfig cfg = optimizer_config(opts, &m_list);
    if (m_list.empty()) {
      m_list = mode == "small" ? std::vector<double>{1, 1e-1, 1e-2, 1e-3, 1e-4}
                               : std::vector<double>{1e2, 1e3, 1e4, 1e5};
    }
    const fs::path dir = output_dir(opts, "sweep");
    std::vector<fs::path> inputs;
    if (opts.config) inputs.push_back(*opts.config);
    start_run("sweep " + mode, opts, dir, inputs);
    validate_config(cfg, true);
    write_text_file(dir / "config.json", config_to_json(cfg));

    auto fit_json = [](const SlopeFit& f) {
      return json{{"slope", f.slope},
                  {"std_error", f.std_error},
                  {"intercept", f.intercept},
                  {"points", f.points}};
    };
    json doc;
    doc["mode"] = mode;
    doc["m_list"] = m_list;
    bool passed = false;
    if (mode == "small") {
      const auto rep = small_volume_sweep(m_list, cfg);
      write_text_file(dir / "sweep.csv", sweep_csv(rep.points));
      doc["asymmetry_fit"] = fit_json(rep.asymmetry_fit);
      doc["rate_exponent"] = rep.rate_exponent;
      doc["ball_threshold"] = rep.ball_threshold;
      doc["threshold_relaxed"] = rep.threshold_relaxed;
      doc["ball_at_smallest"] = rep.ball_at_smallest;
      doc["monotone"] = rep.monotone;
      doc["largest_ball_m"] = number_or_null(rep.largest_ball_m);
      passed = rep.passed;
    } else {
      const auto rep = large_volume_sweep(m_list, cfg);
      write_text_file(dir / "sweep.csv", sweep_csv(rep.points));
      doc["target_slope"] = rep.target_slope;
      doc["diameter_fit"] = fit_json(rep.diameter_fit);
      doc["diameter_window"] = rep.diameter_window;
      doc["lambda1_fit"] = fit_json(rep.lambda1_fit);
      doc["lambda1_window"] = rep.lambda1_window;
      doc["diameter_ok"] = rep.diameter_ok;
      doc["lambda1_ok"] = rep.lambda1_ok;
      passed = rep.passed;
    }
    doc["passed"] = passed;
    write_text_file(dir / "sweep_summary.json", doc.dump(2) + "\n");
    out << doc.dump(2) << "\n";
    if (!passed) err << "sweep outside its acceptance window\n";
    return static_cast<int>(passed ? kExitOk : kExitCheckFailed);
  });
}

}  // namespace minkperi::harness
