#include "minkperi/grid_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "minkperi/errors.hpp"

namespace minkperi {
namespace {

constexpr double kFar = std::numeric_limits<double>::infinity();

// 1D squared distance transform of sampled function f (lower envelope of
// parabolas). Infinite samples never enter the envelope.
void squared_distance_1d(const std::vector<double>& f, std::vector<double>& out,
                         std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == kFar) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -kFar;
      z[1] = kFar;
      continue;
    }
    double s = 0.0;
    while (true) {
      const int p = v[k];
      s = ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) /
          (2.0 * (q - p));
      if (s <= z[k] && k > 0) {
        --k;
      } else {
        break;
      }
    }
    if (s <= z[k]) {
      // k == 0 and the new parabola dominates everywhere
      v[0] = q;
      z[0] = -kFar;
      z[1] = kFar;
      continue;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kFar;
  }
  if (k < 0) {
    std::fill(out.begin(), out.end(), kFar);
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double d = q - v[j];
    out[q] = d * d + f[v[j]];
  }
}

// Squared distance, in cell units, from every cell to the nearest cell whose
// occupancy equals `feature`.
std::vector<double> squared_distance_cells(const GridSet& set, bool feature) {
  const auto& d = set.dims();
  std::vector<double> field(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    field[i] = (set.occupied(i) == feature) ? 0.0 : kFar;
  }
  const int max_len = std::max({d[0], d[1], d[2]});
  std::vector<double> line(max_len), out(max_len), z(max_len + 1);
  std::vector<int> v(max_len);
  for (int axis = 0; axis < set.dim(); ++axis) {
    const int len = d[axis];
    line.resize(len);
    out.resize(len);
    const std::size_t stride =
        axis == 0 ? 1 : (axis == 1 ? static_cast<std::size_t>(d[0])
                                   : static_cast<std::size_t>(d[0]) * d[1]);
    const int a1 = axis == 0 ? 1 : 0;
    const int a2 = axis == 2 ? 1 : 2;
    for (int u = 0; u < d[a2]; ++u) {
      for (int w = 0; w < d[a1]; ++w) {
        std::array<int, 3> c{0, 0, 0};
        c[a1] = w;
        c[a2] = u;
        const std::size_t base = set.geometry().index(c[0], c[1], c[2]);
        for (int q = 0; q < len; ++q) line[q] = field[base + q * stride];
        squared_distance_1d(line, out, v, z);
        for (int q = 0; q < len; ++q) field[base + q * stride] = out[q];
      }
    }
  }
  return field;
}

int cells_for_length(double length, double h) {
  return static_cast<int>(std::ceil(length / h - 1e-12));
}

GridSet ensure_margin(const GridSet& set, int margin, const GridLimits& limits) {
  const int have = set.margin();
  if (have >= margin) return set;
  return pad(set, margin - have, limits);
}

}  // namespace

GridSet rasterize(int dim, Vec3 lo, Vec3 hi, double h, const std::function<bool(Vec3)>& inside,
                  int margin, const GridLimits& limits) {
  if (!(h > 0.0)) throw InvalidArgument("grid spacing h must be positive");
  if (margin < 1) throw InvalidArgument("rasterization margin must be at least one cell");
  GridDims dims{1, 1, 1};
  Vec3 origin{};
  double cells = 1.0;
  for (int a = 0; a < dim; ++a) {
    if (!(hi[a] >= lo[a])) throw InvalidArgument("rasterization box has hi < lo");
    const double n = std::ceil((hi[a] - lo[a]) / h) + 2.0 * margin;
    cells *= n;
    if (cells > static_cast<double>(limits.max_cells)) {
      throw ResourceLimit("rasterization grid exceeds the cap of " +
                          std::to_string(limits.max_cells) + " cells");
    }
    dims[a] = static_cast<int>(n);
    origin[a] = lo[a] - margin * h;
  }
  GridSet set(dim, h, origin, dims, limits);
  const auto& g = set.geometry();
  for (int k = 0; k < dims[2]; ++k) {
    for (int j = 0; j < dims[1]; ++j) {
      for (int i = 0; i < dims[0]; ++i) {
        if (inside(g.cell_center(i, j, k))) set.set(i, j, k, true);
      }
    }
  }
  return ensure_margin(set, 1, limits);
}

GridSet rasterize_ball(int dim, Vec3 center, double radius, double h, const GridLimits& limits) {
  if (!(radius > 0.0)) throw InvalidArgument("ball radius must be positive");
  if (!(h > 0.0)) throw InvalidArgument("grid spacing h must be positive");
  if (h > radius / 4.0) {
    std::ostringstream msg;
    msg << "h = " << h << " is too coarse for a ball of radius " << radius
        << " (need h <= " << radius / 4.0 << ")";
    throw InvalidArgument(msg.str());
  }
  Vec3 lo = center, hi = center;
  for (int a = 0; a < dim; ++a) {
    lo[a] -= radius;
    hi[a] += radius;
  }
  const double r2 = radius * radius;
  return rasterize(
      dim, lo, hi, h,
      [&](Vec3 p) {
        const Vec3 d = p - center;
        return dot(d, d) < r2;
      },
      1, limits);
}

GridSet rasterize_box(int dim, Vec3 lo, Vec3 hi, double h, const GridLimits& limits) {
  return rasterize(
      dim, lo, hi, h,
      [&](Vec3 p) {
        for (int a = 0; a < dim; ++a) {
          if (p[a] < lo[a] || p[a] >= hi[a]) return false;
        }
        return true;
      },
      1, limits);
}

namespace {

// Lattice offset (in cells) of b's origin relative to a's origin.
std::array<int, 3> lattice_offset(const GridGeometry& a, const GridGeometry& b) {
  std::array<int, 3> off{0, 0, 0};
  for (int ax = 0; ax < a.dim(); ++ax) {
    off[ax] = static_cast<int>(std::lround((b.origin()[ax] - a.origin()[ax]) / a.spacing()));
  }
  return off;
}

void check_compatible(const GridSet& a, const GridSet& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("grids have different dimensions");
  const double ha = a.spacing(), hb = b.spacing();
  if (std::abs(ha - hb) > 1e-12 * std::max(ha, hb)) {
    throw InvalidArgument("grids have mismatched spacing");
  }
}

// Covering geometry of both grids on a's lattice, plus each grid's offset
// into it.
struct CommonFrame {
  GridGeometry geometry;
  std::array<int, 3> off_a{};
  std::array<int, 3> off_b{};
};

CommonFrame common_frame(const GridSet& a, const GridSet& b, const GridLimits& limits) {
  const auto ob = lattice_offset(a.geometry(), b.geometry());
  GridDims dims{1, 1, 1};
  CommonFrame frame;
  Vec3 origin{};
  double cells = 1.0;
  for (int ax = 0; ax < a.dim(); ++ax) {
    const int lo = std::min(0, ob[ax]);
    const int hi = std::max(a.dims()[ax], ob[ax] + b.dims()[ax]);
    dims[ax] = hi - lo;
    cells *= dims[ax];
    frame.off_a[ax] = -lo;
    frame.off_b[ax] = ob[ax] - lo;
    origin[ax] = a.origin()[ax] + lo * a.spacing();
  }
  if (cells > static_cast<double>(limits.max_cells)) {
    throw ResourceLimit("common grid exceeds the cell cap");
  }
  frame.geometry = GridGeometry(a.dim(), a.spacing(), origin, dims);
  return frame;
}

void stamp(const GridSet& src, const GridGeometry& dst_geom, std::array<int, 3> off,
           std::vector<std::uint8_t>& dst, std::uint8_t bit) {
  const auto& d = src.dims();
  for (int k = 0; k < d[2]; ++k) {
    for (int j = 0; j < d[1]; ++j) {
      for (int i = 0; i < d[0]; ++i) {
        if (src.occupied(i, j, k)) {
          dst[dst_geom.index(i + off[0], j + off[1], k + off[2])] |= bit;
        }
      }
    }
  }
}

}  // namespace

GridSet set_union(const GridSet& a, const GridSet& b, const GridLimits& limits) {
  check_compatible(a, b);
  const auto frame = common_frame(a, b, limits);
  std::vector<std::uint8_t> cells(frame.geometry.size(), 0);
  stamp(a, frame.geometry, frame.off_a, cells, 1);
  stamp(b, frame.geometry, frame.off_b, cells, 1);
  return ensure_margin(GridSet(frame.geometry, std::move(cells)), 1, limits);
}

double volume(const GridSet& set) {
  return static_cast<double>(set.occupied_count()) * set.geometry().cell_volume();
}

Vec3 centroid(const GridSet& set) {
  Vec3 sum{};
  std::size_t count = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (!set.occupied(i)) continue;
    const auto c = set.geometry().coords(i);
    sum.x += c[0];
    sum.y += c[1];
    sum.z += c[2];
    ++count;
  }
  if (count == 0) throw InvalidArgument("centroid of an empty set");
  const double h = set.spacing();
  Vec3 out{};
  for (int a = 0; a < set.dim(); ++a) {
    out[a] = set.origin()[a] + (sum[a] / static_cast<double>(count) + 0.5) * h;
  }
  return out;
}

GridSet pad(const GridSet& set, int cells, const GridLimits& limits) {
  if (cells < 0) throw InvalidArgument("padding must be non-negative");
  GridDims dims = set.dims();
  Vec3 origin = set.origin();
  for (int a = 0; a < set.dim(); ++a) {
    dims[a] += 2 * cells;
    origin[a] -= cells * set.spacing();
  }
  GridSet out(set.dim(), set.spacing(), origin, dims, limits);
  const std::array<int, 3> off{cells, cells, set.dim() == 3 ? cells : 0};
  const auto& d = set.dims();
  for (int k = 0; k < d[2]; ++k) {
    for (int j = 0; j < d[1]; ++j) {
      for (int i = 0; i < d[0]; ++i) {
        if (set.occupied(i, j, k)) out.set(i + off[0], j + off[1], k + off[2], true);
      }
    }
  }
  return out;
}

GridSet shift_cells(const GridSet& set, std::array<int, 3> offset) {
  GridSet out(set.geometry(), std::vector<std::uint8_t>(set.size(), 0));
  const auto& d = set.dims();
  for (int k = 0; k < d[2]; ++k) {
    for (int j = 0; j < d[1]; ++j) {
      for (int i = 0; i < d[0]; ++i) {
        if (!set.occupied(i, j, k)) continue;
        const int ni = i + offset[0], nj = j + offset[1], nk = k + offset[2];
        if (ni < 1 || nj < 1 || ni >= d[0] - 1 || nj >= d[1] - 1 ||
            (set.dim() == 3 && (nk < 1 || nk >= d[2] - 1))) {
          throw InvalidArgument("shift moves occupied cells into the grid margin");
        }
        out.set(ni, nj, nk, true);
      }
    }
  }
  return out;
}

DistanceField distance_transform(const GridSet& set, DistanceConvention convention) {
  const auto outside = squared_distance_cells(set, true);
  const auto inside = squared_distance_cells(set, false);
  const double h = set.spacing();
  const double extent = set.geometry().diagonal();
  const double shift = convention == DistanceConvention::kInterface ? 0.5 : 0.0;
  DistanceField field;
  field.geometry = set.geometry();
  field.convention = convention;
  field.values.resize(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double d2 = set.occupied(i) ? inside[i] : outside[i];
    const double mag = d2 == kFar ? extent : std::min(extent, (std::sqrt(d2) - shift) * h);
    field.values[i] = set.occupied(i) ? -mag : mag;
  }
  return field;
}

GridSet dilate(const GridSet& set, double r, const GridLimits& limits) {
  if (!(r > 0.0)) throw InvalidArgument("dilation radius must be positive");
  if (set.empty()) return set;
  const GridSet padded = ensure_margin(set, cells_for_length(r, set.spacing()) + 2, limits);
  const auto field = distance_transform(padded);
  std::vector<std::uint8_t> cells(padded.size());
  for (std::size_t i = 0; i < padded.size(); ++i) cells[i] = field.values[i] < r ? 1 : 0;
  return GridSet(padded.geometry(), std::move(cells));
}

GridSet erode(const GridSet& set, double r) {
  if (!(r > 0.0)) throw InvalidArgument("erosion radius must be positive");
  const GridSet padded = ensure_margin(set, 1, GridLimits{std::numeric_limits<std::size_t>::max()});
  const auto field = distance_transform(padded);
  std::vector<std::uint8_t> cells(padded.size());
  for (std::size_t i = 0; i < padded.size(); ++i) {
    cells[i] = (padded.occupied(i) && field.values[i] <= -r) ? 1 : 0;
  }
  return GridSet(padded.geometry(), std::move(cells));
}

double minkowski_perimeter(const GridSet& set, double r, const GridLimits& limits) {
  if (!(r > 0.0)) throw InvalidArgument("r-perimeter radius must be positive");
  const double h = set.spacing();
  if (r < 2.0 * h) {
    std::ostringstream msg;
    msg << "r = " << r << " is under-resolved on a grid with h = " << h
        << "; the minimum admissible spacing is h <= " << r / 2.0;
    throw ResolutionError(msg.str(), r / 2.0);
  }
  if (set.empty()) return 0.0;
  const GridSet padded = ensure_margin(set, cells_for_length(r, h) + 2, limits);
  const auto field = distance_transform(padded);
  std::size_t band = 0;
  for (std::size_t i = 0; i < padded.size(); ++i) {
    const double d = field.values[i];
    // dilation minus erosion: d < r and not (occupied and d <= -r)
    if (d < r && !(padded.occupied(i) && d <= -r)) ++band;
  }
  return static_cast<double>(band) * padded.geometry().cell_volume() / (2.0 * r);
}

double symmetric_difference_volume(const GridSet& a, const GridSet& b) {
  check_compatible(a, b);
  const auto frame = common_frame(a, b, GridLimits{std::numeric_limits<std::size_t>::max()});
  std::vector<std::uint8_t> cells(frame.geometry.size(), 0);
  stamp(a, frame.geometry, frame.off_a, cells, 1);
  stamp(b, frame.geometry, frame.off_b, cells, 2);
  std::size_t count = 0;
  for (auto c : cells) {
    if (c == 1 || c == 2) ++count;
  }
  return static_cast<double>(count) * a.geometry().cell_volume();
}

double ball_overlap_volume(const GridSet& set, Vec3 center, double radius) {
  const auto& g = set.geometry();
  const double h = g.spacing();
  std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
  for (int a = 0; a < 3; ++a) {
    if (a >= set.dim()) {
      lo[a] = 0;
      hi[a] = 0;
      continue;
    }
    lo[a] = std::max(0, static_cast<int>(std::floor((center[a] - radius - h - g.origin()[a]) / h)));
    hi[a] = std::min(g.dims()[a] - 1,
                     static_cast<int>(std::floor((center[a] + radius + h - g.origin()[a]) / h)));
    if (hi[a] < lo[a]) return 0.0;
  }
  double covered = 0.0;
  for (int k = lo[2]; k <= hi[2]; ++k) {
    for (int j = lo[1]; j <= hi[1]; ++j) {
      for (int i = lo[0]; i <= hi[0]; ++i) {
        if (!set.occupied(i, j, k)) continue;
        const double dist = norm(g.cell_center(i, j, k) - center);
        const double t = 0.5 - (dist - radius) / h;
        covered += std::clamp(t, 0.0, 1.0);
      }
    }
  }
  return covered * g.cell_volume();
}

namespace {

template <class F>
double golden_section_min(F&& f, double a, double b, int iterations, double* argmin) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < iterations; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  if (f1 <= f2) {
    *argmin = x1;
    return f1;
  }
  *argmin = x2;
  return f2;
}

}  // namespace

AsymmetryResult fraenkel_asymmetry(const GridSet& set, double radius, AsymmetrySearch search) {
  if (!(radius > 0.0)) throw InvalidArgument("asymmetry ball radius must be positive");
  const double vol_e = volume(set);
  const double vol_b = ball_volume(set.dim(), radius);
  if (std::abs(vol_e - vol_b) > 0.01 * vol_b) {
    std::ostringstream msg;
    msg << "set volume " << vol_e << " differs from ball volume " << vol_b
        << " by more than 1%; rescale first";
    throw InvalidArgument(msg.str());
  }
  const double h = set.spacing();
  const int dim = set.dim();
  auto objective = [&](Vec3 x) {
    const double overlap = ball_overlap_volume(set, x, radius);
    return std::clamp((vol_e + vol_b - 2.0 * overlap) / vol_b, 0.0, 2.0);
  };

  Vec3 best = centroid(set);
  double best_value = objective(best);

  if (search == AsymmetrySearch::kExhaustive) {
    const auto& g = set.geometry();
    std::array<int, 3> lo{g.dims()[0], g.dims()[1], g.dims()[2]}, hi{0, 0, 0};
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (!set.occupied(i)) continue;
      const auto c = g.coords(i);
      for (int a = 0; a < 3; ++a) {
        lo[a] = std::min(lo[a], c[a]);
        hi[a] = std::max(hi[a], c[a]);
      }
    }
    double lattice_points = 1.0;
    for (int a = 0; a < dim; ++a) lattice_points *= (hi[a] - lo[a] + 1);
    const int stride =
        std::max(1, static_cast<int>(std::ceil(std::pow(lattice_points / 40000.0, 1.0 / dim))));
    for (int k = lo[2]; k <= hi[2]; k += (dim == 3 ? stride : 1)) {
      for (int j = lo[1]; j <= hi[1]; j += stride) {
        for (int i = lo[0]; i <= hi[0]; i += stride) {
          const Vec3 x = g.cell_center(i, j, k);
          const double v = objective(x);
          if (v < best_value) {
            best_value = v;
            best = x;
          }
        }
      }
    }
  }

  // Lattice descent.
  for (int iter = 0; iter < 100000; ++iter) {
    bool moved = false;
    for (int a = 0; a < dim; ++a) {
      for (double step : {h, -h}) {
        Vec3 x = best;
        x[a] += step;
        const double v = objective(x);
        if (v < best_value) {
          best_value = v;
          best = x;
          moved = true;
        }
      }
    }
    if (!moved) break;
  }
  // Sub-cell refinement per axis.
  for (int sweep = 0; sweep < 2; ++sweep) {
    for (int a = 0; a < dim; ++a) {
      double arg = best[a];
      const double v = golden_section_min(
          [&](double t) {
            Vec3 x = best;
            x[a] = t;
            return objective(x);
          },
          best[a] - h, best[a] + h, 40, &arg);
      if (v < best_value) {
        best_value = v;
        best[a] = arg;
      }
    }
  }
  return {best_value, best};
}

}  // namespace minkperi
