#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "minkperi/convex_geometry.hpp"

namespace minkperi {

enum class PhiMethod {
  kExact,  // chord-power quadrature on the polygon
  kGrid,   // rasterize at the h policy and use the FFT path
};

struct OptimizerConfig {
  double m = 1.0;
  double alpha = 0.5;
  double r = 0.1;
  int n = 2;
  std::uint64_t seed = 1;
  // Metropolis temperature relative to the current energy, decayed
  // geometrically each step.
  double initial_temperature = 1e-3;
  double decay = 0.998;
  std::size_t steps = 2000;
  // Gaussian step as a fraction of the body's extent along each principal
  // axis (the diameter for round bodies).
  double proposal_scale = 0.05;
  int restarts = 4;
  // h policy for PhiMethod::kGrid: cells across the thinnest direction,
  // capped by the total cell count.
  int cells_across = 20;
  std::size_t max_cells = std::size_t{2048} * 2048;
  // A restart stops once its best energy improved by less than
  // tolerance * |best| over the last `patience` steps (0: steps / 4).
  double tolerance = 1e-9;
  std::size_t patience = 0;
  // Replaces m^{(n+1-alpha)/n} when set.
  std::optional<double> coupling;
  PhiMethod phi_method = PhiMethod::kExact;
  double phi_tolerance = 1e-7;
  int min_vertices = 8;
  int max_vertices = 128;
  int ball_vertices = 128;
};

// Throws InvalidArgument. `sweep` additionally requires alpha < n - 1.
void validate_config(const OptimizerConfig& cfg, bool sweep = false);

// JSON with the field names above; unknown keys are rejected.
std::string config_to_json(const OptimizerConfig& cfg);
OptimizerConfig config_from_json(const std::string& text);
// SHA-256 of config_to_json.
std::string config_hash(const OptimizerConfig& cfg);

double coupling_factor(const OptimizerConfig& cfg);
// L(m) = m^{((n-1)/n)((n+1-alpha)/(alpha(n-1)+1))}.
double comparison_length(double m, double alpha, int n);
double elongation_exponent(double alpha, int n);

struct CandidateShape {
  ConvexPolytope polytope;  // unit area
  double per_r = 0.0;
  double phi = 0.0;
  double total = 0.0;
};

// Per_r + coupling * Phi_alpha of the candidate; fills the cached fields.
double total_energy(CandidateShape& s, const OptimizerConfig& cfg);
// Rescales to unit area and evaluates.
CandidateShape make_candidate(const ConvexPolytope& p, const OptimizerConfig& cfg);
// Energy of the exact unit-area disk.
double ball_energy(const OptimizerConfig& cfg);

enum class ProposalKind { kStart, kVertex, kInsert, kDelete, kStretch };
std::string_view to_string(ProposalKind k);

struct StepRecord {
  int restart = 0;
  std::size_t step = 0;
  ProposalKind kind = ProposalKind::kVertex;
  bool accepted = false;
  double energy = 0.0;  // current state after the step
};

struct OptimizationTrace {
  std::vector<StepRecord> steps;  // restart-major
  CandidateShape best;
  double best_energy = 0.0;
  int best_restart = 0;
  std::vector<double> restart_best;
  std::uint64_t seed = 0;
  std::string config_hash;
};

std::string trace_ndjson(const OptimizationTrace& trace);

// Simulated annealing over convex polygons with hull projection and
// rescaling to unit area after every proposal. Restarts (disk, box of length
// max(2, L(m)), random hulls) run in parallel with independent streams;
// the result depends only on the config.
OptimizationTrace minimize(const OptimizerConfig& cfg);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double std_error = 0.0;
  std::size_t points = 0;
};

// Least-squares fit of log y against log x over points with x, y > 0.
SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct SweepPoint {
  double m = 0.0;
  CandidateShape shape;
  double asymmetry = 0.0;
  double hausdorff = 0.0;  // inf over translations of d_H(shape, unit disk)
  double diameter = 0.0;
  std::array<double, 2> lambdas{};  // john_box, ascending
  double energy = 0.0;
  double ball_energy = 0.0;
  bool ball = false;  // asymmetry below the detection threshold
  // m^{-exponent} scaling of the unit-area shape (large sweeps).
  double diameter_hat = 0.0;
  double lambda1_hat = 0.0;
};

struct SmallSweepReport {
  std::vector<SweepPoint> points;  // in the order of m_list
  SlopeFit asymmetry_fit;
  double rate_exponent = 0.0;  // (n+1-alpha)/n, logged for comparison
  double ball_threshold = 0.03;
  bool threshold_relaxed = false;
  bool ball_at_smallest = false;
  // Asymmetry never grows by more than the noise band as m decreases.
  bool monotone = true;
  std::optional<double> largest_ball_m;
  bool passed = false;
};

struct LargeSweepReport {
  std::vector<SweepPoint> points;
  SlopeFit diameter_fit;
  SlopeFit lambda1_fit;
  double target_slope = 0.0;
  std::array<double, 2> diameter_window{};
  std::array<double, 2> lambda1_window{};
  bool diameter_ok = false;
  bool lambda1_ok = false;
  bool passed = false;
};

// m_list is taken in the given order (descending for small sweeps,
// ascending for large ones); each m reuses the template with m replaced.
SmallSweepReport small_volume_sweep(const std::vector<double>& m_list,
                                    const OptimizerConfig& templ, double noise_band = 0.2);
LargeSweepReport large_volume_sweep(const std::vector<double>& m_list,
                                    const OptimizerConfig& templ);

// CSV columns: m,asymmetry,hausdorff,diameter,lambda1,lambda2,per_r,phi,
// energy,ball_energy,ball,diameter_hat,lambda1_hat
std::string sweep_csv(const std::vector<SweepPoint>& points);

}  // namespace minkperi
