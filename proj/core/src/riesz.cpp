#include "minkperi/riesz.hpp"

#include <fftw3.h>

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <queue>
#include <sstream>
#include <vector>

#include "minkperi/errors.hpp"
#include "minkperi/summation.hpp"

namespace minkperi {
namespace {

constexpr double kPi = std::numbers::pi;

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct OccupiedCells {
  std::vector<std::array<int, 3>> coords;
  std::array<int, 3> lo{0, 0, 0};
  std::array<int, 3> hi{0, 0, 0};
};

OccupiedCells collect_occupied(const GridSet& set) {
  OccupiedCells out;
  out.lo = {set.dims()[0], set.dims()[1], set.dims()[2]};
  out.hi = {-1, -1, -1};
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (!set.occupied(i)) continue;
    const auto c = set.geometry().coords(i);
    out.coords.push_back(c);
    for (int a = 0; a < 3; ++a) {
      out.lo[a] = std::min(out.lo[a], c[a]);
      out.hi[a] = std::max(out.hi[a], c[a]);
    }
  }
  return out;
}

// int over offsets p of chord(p)^q for chords parallel to direction theta.
// The chord length is piecewise linear in p between vertex offsets, so each
// piece integrates in closed form. The two boundary chains from the lowest
// vertex are walked in step, O(k) per direction.
double chord_power_integral(const std::vector<Vec3>& v, double theta, double q) {
  const std::size_t k = v.size();
  const Vec3 u{std::cos(theta), std::sin(theta), 0};
  const Vec3 n{-u.y, u.x, 0};
  thread_local std::vector<double> ps, ts;
  ps.resize(k);
  ts.resize(k);
  std::size_t lo = 0;
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    ps[i] = dot(v[i], n);
    ts[i] = dot(v[i], u);
    if (ps[i] < ps[lo]) lo = i;
    top = std::max(top, ps[i]);
  }
  auto next = [k](std::size_t i) { return i + 1 == k ? 0 : i + 1; };
  auto prev = [k](std::size_t i) { return i == 0 ? k - 1 : i - 1; };
  auto lerp = [&](std::size_t from, std::size_t to, double p) {
    const double w = (p - ps[from]) / (ps[to] - ps[from]);
    return ts[from] + w * (ts[to] - ts[from]);
  };
  // Chain a runs counter-clockwise from the lowest vertex, chain b clockwise;
  // both have non-decreasing offsets until the highest vertex.
  std::size_t a = lo, b = lo;
  double p = ps[lo];
  double total = 0.0;
  double s0 = 0.0, f0 = 0.0;  // chord at p and chord^{q+1}
  bool first = true;
  while (p < top) {
    while (ps[next(a)] <= p) a = next(a);
    while (ps[prev(b)] <= p) b = prev(b);
    const double p1 = std::min(ps[next(a)], ps[prev(b)]);
    if (first) {
      s0 = std::abs(lerp(a, next(a), p) - lerp(b, prev(b), p));
      f0 = std::pow(s0, q + 1.0);
      first = false;
    }
    const double s1 = std::abs(lerp(a, next(a), p1) - lerp(b, prev(b), p1));
    const double f1 = std::pow(s1, q + 1.0);
    const double mid = 0.5 * (s0 + s1);
    const double diff = s1 - s0;
    if (mid > 0.0) {
      if (std::abs(diff) < 1e-3 * mid) {
        const double ratio = diff / mid;
        total += (p1 - p) * std::pow(mid, q) * (1.0 + q * (q - 1.0) / 24.0 * ratio * ratio);
      } else {
        total += (p1 - p) * (f1 - f0) / ((q + 1.0) * diff);
      }
    }
    s0 = s1;
    f0 = f1;
    p = p1;
  }
  return total;
}

// Globally adaptive Gauss-Kronrod: the panel with the largest error
// estimate is bisected until the summed error drops below rel_tol times the
// integral or the panel budget runs out. Refinement concentrates where the
// integrand varies fastest, e.g. near the long axis of very thin bodies.
template <class F>
double integrate_global_adaptive(F&& f, const std::vector<double>& breaks, double rel_tol) {
  // Past this many panels the estimate sits at the rounding floor of the
  // integrand (about 1e-9 relative for bodies of aspect 1e8).
  const std::size_t max_panels = 500 + 8 * breaks.size();
  using boost::math::quadrature::gauss_kronrod;
  struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  auto make = [&](double a, double b) {
    double err = 0.0;
    const double val = gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err);
    return Panel{a, b, val, std::abs(err)};
  };
  std::priority_queue<Panel> heap;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) heap.push(make(breaks[i], breaks[i + 1]));
  auto totals = [&heap] {
    // Recomputed from scratch so rounding never accumulates across updates.
    auto copy = heap;
    CompensatedSum value, error;
    while (!copy.empty()) {
      value.add(copy.top().value);
      error.add(copy.top().error);
      copy.pop();
    }
    return std::pair{value.value(), error.value()};
  };
  auto [value, error] = totals();
  while (error > rel_tol * std::abs(value) && heap.size() < max_panels) {
    const Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    heap.pop();
    const Panel left = make(worst.a, mid);
    const Panel right = make(mid, worst.b);
    heap.push(left);
    heap.push(right);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
  }
  return totals().first;
}

}  // namespace

double unit_cell_kernel_integral(int dim, double alpha) {
  if (dim != 2 && dim != 3) throw InvalidArgument("kernel dimension must be 2 or 3");
  if (!(alpha > 0.0) || !(alpha < dim)) throw InvalidArgument("alpha must lie in (0, n)");
  using boost::math::quadrature::gauss;
  // Pyramid decomposition of the cube over its 2n faces.
  const double prefactor = 2.0 * dim * 0.5 / (dim - alpha);
  double face = 0.0;
  if (dim == 2) {
    face = gauss<double, 30>::integrate(
        [&](double w) { return std::pow(w * w + 0.25, -0.5 * alpha); }, -0.5, 0.5);
  } else {
    face = gauss<double, 30>::integrate(
        [&](double w1) {
          return gauss<double, 30>::integrate(
              [&](double w2) { return std::pow(w1 * w1 + w2 * w2 + 0.25, -0.5 * alpha); }, -0.5,
              0.5);
        },
        -0.5, 0.5);
  }
  return prefactor * face;
}

RieszKernel RieszKernel::make(int dim, double alpha, double spacing) {
  if (dim != 2 && dim != 3) throw InvalidArgument("kernel dimension must be 2 or 3");
  if (!(alpha > 0.0) || !(alpha < dim)) {
    std::ostringstream msg;
    msg << "alpha = " << alpha << " must lie in (0, " << dim << ")";
    throw InvalidArgument(msg.str());
  }
  if (!(spacing > 0.0)) throw InvalidArgument("kernel spacing must be positive");
  RieszKernel k;
  k.dim = dim;
  k.alpha = alpha;
  k.spacing = spacing;
  k.origin_weight = std::pow(spacing, -alpha) * unit_cell_kernel_integral(dim, alpha);
  return k;
}

double RieszKernel::at_offset(double dx, double dy, double dz) const {
  const double r2 = dx * dx + dy * dy + dz * dz;
  if (r2 == 0.0) return origin_weight;
  return std::pow(r2, -0.5 * alpha);
}

double riesz_energy_direct(const GridSet& set, const RieszKernel& kernel,
                           const RieszLimits& limits) {
  if (set.dim() != kernel.dim) throw InvalidArgument("kernel and grid dimensions differ");
  const auto cells = collect_occupied(set);
  const std::size_t count = cells.coords.size();
  if (count == 0) return 0.0;
  if (count > limits.direct_max_cells) {
    std::ostringstream msg;
    msg << "direct Riesz summation over " << count << " cells exceeds the oracle cap of "
        << limits.direct_max_cells << "; use riesz_energy_fast";
    throw ResourceLimit(msg.str());
  }
  const double h = set.spacing();
  // Kernel table indexed by absolute integer offset.
  std::array<int, 3> span{1, 1, 1};
  for (int a = 0; a < set.dim(); ++a) span[a] = cells.hi[a] - cells.lo[a] + 1;
  std::vector<double> table(static_cast<std::size_t>(span[0]) * span[1] * span[2]);
  for (int k = 0; k < span[2]; ++k) {
    for (int j = 0; j < span[1]; ++j) {
      for (int i = 0; i < span[0]; ++i) {
        table[i + static_cast<std::size_t>(span[0]) * (j + static_cast<std::size_t>(span[1]) * k)] =
            (i == 0 && j == 0 && k == 0) ? kernel.origin_weight
                                         : kernel.at_offset(i * h, j * h, k * h);
      }
    }
  }
  CompensatedSum total;
  for (std::size_t p = 0; p < count; ++p) {
    CompensatedSum row;
    const auto& cp = cells.coords[p];
    for (std::size_t q = p + 1; q < count; ++q) {
      const auto& cq = cells.coords[q];
      const int di = std::abs(cq[0] - cp[0]);
      const int dj = std::abs(cq[1] - cp[1]);
      const int dk = std::abs(cq[2] - cp[2]);
      row.add(table[di + static_cast<std::size_t>(span[0]) *
                             (dj + static_cast<std::size_t>(span[1]) * dk)]);
    }
    total.add(2.0 * row.value());
    total.add(kernel.origin_weight);
  }
  const double cell = set.geometry().cell_volume();
  return total.value() * cell * cell;
}

ScalarField riesz_potential(const GridSet& set, const RieszKernel& kernel,
                            const RieszLimits& limits) {
  if (set.dim() != kernel.dim) throw InvalidArgument("kernel and grid dimensions differ");
  ScalarField field;
  field.geometry = set.geometry();
  field.values.assign(set.size(), 0.0);
  if (set.empty()) return field;

  const int dim = set.dim();
  const auto& d = set.dims();
  std::array<int, 3> padded{1, 1, 1};
  double total_cells = 1.0;
  for (int a = 0; a < dim; ++a) {
    padded[a] = 2 * d[a];
    total_cells *= padded[a];
  }
  if (total_cells > static_cast<double>(limits.fast_max_cells)) {
    std::ostringstream msg;
    msg << "padded Riesz convolution of " << static_cast<long long>(total_cells)
        << " cells exceeds the cap of " << limits.fast_max_cells;
    throw ResourceLimit(msg.str());
  }
  const std::size_t n_real = static_cast<std::size_t>(total_cells);
  // Row-major with axis 0 fastest in our layout maps to FFTW's last index.
  const int n0 = dim == 3 ? padded[2] : padded[1];
  const int n1 = dim == 3 ? padded[1] : padded[0];
  const int n2 = dim == 3 ? padded[0] : 1;
  const int last = dim == 3 ? n2 : n1;
  const std::size_t n_complex = n_real / last * (last / 2 + 1);

  double* kernel_buf = fftw_alloc_real(n_real);
  double* indicator = fftw_alloc_real(n_real);
  fftw_complex* kernel_hat = fftw_alloc_complex(n_complex);
  fftw_complex* indicator_hat = fftw_alloc_complex(n_complex);

  const double h = set.spacing();
  const double cell = set.geometry().cell_volume();
  auto padded_index = [&](int i, int j, int k) {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(padded[0]) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(padded[1]) * k);
  };
  for (int k = 0; k < padded[2]; ++k) {
    const int ok = k < d[2] ? k : k - padded[2];
    for (int j = 0; j < padded[1]; ++j) {
      const int oj = j < d[1] ? j : j - padded[1];
      for (int i = 0; i < padded[0]; ++i) {
        const int oi = i < d[0] ? i : i - padded[0];
        const std::size_t idx = padded_index(i, j, k);
        kernel_buf[idx] = (oi == 0 && oj == 0 && ok == 0)
                              ? kernel.origin_weight
                              : kernel.at_offset(oi * h, oj * h, (dim == 3 ? ok : 0) * h);
        const bool inside = i < d[0] && j < d[1] && k < d[2];
        indicator[idx] = inside && set.occupied(i, j, k) ? 1.0 : 0.0;
      }
    }
  }

  fftw_plan forward_k, forward_e, backward;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    if (dim == 2) {
      forward_k = fftw_plan_dft_r2c_2d(n0, n1, kernel_buf, kernel_hat, FFTW_ESTIMATE);
      forward_e = fftw_plan_dft_r2c_2d(n0, n1, indicator, indicator_hat, FFTW_ESTIMATE);
      backward = fftw_plan_dft_c2r_2d(n0, n1, indicator_hat, indicator, FFTW_ESTIMATE);
    } else {
      forward_k = fftw_plan_dft_r2c_3d(n0, n1, n2, kernel_buf, kernel_hat, FFTW_ESTIMATE);
      forward_e = fftw_plan_dft_r2c_3d(n0, n1, n2, indicator, indicator_hat, FFTW_ESTIMATE);
      backward = fftw_plan_dft_c2r_3d(n0, n1, n2, indicator_hat, indicator, FFTW_ESTIMATE);
    }
  }
  fftw_execute(forward_k);
  fftw_execute(forward_e);
  for (std::size_t i = 0; i < n_complex; ++i) {
    const double re = kernel_hat[i][0] * indicator_hat[i][0] - kernel_hat[i][1] * indicator_hat[i][1];
    const double im = kernel_hat[i][0] * indicator_hat[i][1] + kernel_hat[i][1] * indicator_hat[i][0];
    indicator_hat[i][0] = re;
    indicator_hat[i][1] = im;
  }
  fftw_execute(backward);
  const double norm_factor = cell / static_cast<double>(n_real);
  for (int k = 0; k < d[2]; ++k) {
    for (int j = 0; j < d[1]; ++j) {
      for (int i = 0; i < d[0]; ++i) {
        field.values[set.geometry().index(i, j, k)] = indicator[padded_index(i, j, k)] * norm_factor;
      }
    }
  }
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(forward_k);
    fftw_destroy_plan(forward_e);
    fftw_destroy_plan(backward);
  }
  fftw_free(kernel_buf);
  fftw_free(indicator);
  fftw_free(kernel_hat);
  fftw_free(indicator_hat);
  return field;
}

double riesz_energy_from_potential(const GridSet& set, const ScalarField& potential) {
  if (potential.values.size() != set.size()) {
    throw InvalidArgument("potential field does not match the grid");
  }
  CompensatedSum total;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set.occupied(i)) total.add(potential.values[i]);
  }
  return total.value() * set.geometry().cell_volume();
}

double riesz_energy_fast(const GridSet& set, const RieszKernel& kernel,
                         const RieszLimits& limits) {
  if (set.empty()) return 0.0;
  return riesz_energy_from_potential(set, riesz_potential(set, kernel, limits));
}

double riesz_energy_polygon(const ConvexPolytope& p, double alpha, double rel_tol) {
  if (p.dim() != 2) throw Unsupported("riesz_energy_polygon needs a planar polygon");
  if (!(alpha > 0.0) || !(alpha < 2.0)) throw InvalidArgument("alpha must lie in (0, 2)");
  const double q = 3.0 - alpha;
  // Work relative to the centroid for conditioning.
  const Vec3 c = centroid(p);
  std::vector<Vec3> v;
  v.reserve(p.size());
  for (const auto& x : p.vertices()) v.push_back(x - c);

  // The integrand has kinks where a chord direction is parallel to an edge.
  // Splitting there is what makes tight tolerances cheap; at loose
  // tolerances a few uniform panels over many weak kinks already give about
  // 1e-8 and cost far less.
  constexpr std::size_t kCoarsePanels = 16;
  std::vector<double> breaks{0.0, kPi};
  if (rel_tol >= 1e-7 && v.size() > kCoarsePanels) {
    for (std::size_t j = 1; j < kCoarsePanels; ++j) breaks.push_back(kPi * j / kCoarsePanels);
  } else {
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Vec3 e = v[(i + 1) % v.size()] - v[i];
      double t = std::atan2(e.y, e.x);
      t = std::fmod(t + 2.0 * kPi, kPi);
      if (t > 0.0 && t < kPi) breaks.push_back(t);
    }
  }
  // Thin bodies: the integrand peaks within ~width/diameter of the long axis.
  // Geometrically graded breakpoints around that axis let the adaptive rule
  // start at the right scale.
  double diam2 = 0.0, axis = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      const Vec3 d = v[j] - v[i];
      if (dot(d, d) > diam2) {
        diam2 = dot(d, d);
        axis = std::fmod(std::atan2(d.y, d.x) + 2.0 * kPi, kPi);
      }
    }
  }
  double min_width = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec3 e = v[(i + 1) % v.size()] - v[i];
    const double len = norm(e);
    double w = 0.0;
    for (const auto& x : v) w = std::max(w, std::abs(cross2(e, x - v[i])) / len);
    min_width = std::min(min_width, w);
  }
  const double thinness = min_width / std::sqrt(diam2);
  if (thinness < 0.05) {
    for (double off = thinness; off < 0.5 * kPi; off *= 4.0) {
      for (double t : {axis - off, axis + off}) breaks.push_back(std::fmod(t + 2.0 * kPi, kPi));
    }
    if (axis > 0.0) breaks.push_back(axis);
  }
  std::sort(breaks.begin(), breaks.end());
  // Directions closer than this are one kink (parallel edges up to rounding).
  constexpr double kMergeGap = 1e-10;
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double a, double b) { return b - a < kMergeGap; }),
               breaks.end());
  breaks.back() = kPi;

  const double integral = integrate_global_adaptive(
      [&](double theta) { return chord_power_integral(v, theta, q); }, breaks, rel_tol);
  return 2.0 / ((2.0 - alpha) * (3.0 - alpha)) * integral;
}

double riesz_energy_disk(double radius, double alpha) {
  if (!(alpha > 0.0) || !(alpha < 2.0)) throw InvalidArgument("alpha must lie in (0, 2)");
  if (!(radius > 0.0)) throw InvalidArgument("disk radius must be positive");
  const double q = 3.0 - alpha;
  const double beta =
      std::tgamma(0.5) * std::tgamma(0.5 * q + 1.0) / std::tgamma(0.5 * q + 1.5);
  return 2.0 * kPi / ((2.0 - alpha) * q) * std::pow(2.0, q) * std::pow(radius, 4.0 - alpha) * beta;
}

double potential_gap_constant(int n, double alpha) {
  if (!(alpha > 0.0) || !(alpha < n)) throw InvalidArgument("alpha must lie in (0, n)");
  const double wn = unit_ball_volume(n);
  const double s = std::pow(2.0 * (n - alpha) / (n * wn), 1.0 / n);
  return 2.0 * (n * wn / (n - alpha) * std::pow(s, n - alpha) + 2.0 * std::pow(s, -alpha));
}

}  // namespace minkperi
