#include "minkperi/grid_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "minkperi/errors.hpp"

namespace minkperi {

GridGeometry::GridGeometry(int dim, double spacing, Vec3 origin, GridDims dims)
    : dim_(dim), spacing_(spacing), origin_(origin), dims_(dims) {
  if (dim != 2 && dim != 3) {
    throw InvalidArgument("grid dimension must be 2 or 3, got " + std::to_string(dim));
  }
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw InvalidArgument("grid spacing must be positive and finite");
  }
  for (int a = 0; a < 3; ++a) {
    if (dims[a] < 1) throw InvalidArgument("grid dims must all be >= 1");
  }
  if (dim == 2) {
    if (dims[2] != 1) throw InvalidArgument("planar grid must have dims[2] == 1");
    origin_.z = 0.0;
  }
}

double GridGeometry::cell_volume() const { return std::pow(spacing_, dim_); }

std::array<int, 3> GridGeometry::coords(std::size_t idx) const {
  const auto nx = static_cast<std::size_t>(dims_[0]);
  const auto ny = static_cast<std::size_t>(dims_[1]);
  return {static_cast<int>(idx % nx), static_cast<int>((idx / nx) % ny),
          static_cast<int>(idx / (nx * ny))};
}

Vec3 GridGeometry::cell_center(int i, int j, int k) const {
  Vec3 c{origin_.x + (i + 0.5) * spacing_, origin_.y + (j + 0.5) * spacing_, 0.0};
  if (dim_ == 3) c.z = origin_.z + (k + 0.5) * spacing_;
  return c;
}

Vec3 GridGeometry::cell_center(std::size_t idx) const {
  const auto c = coords(idx);
  return cell_center(c[0], c[1], c[2]);
}

double GridGeometry::diagonal() const {
  double s = 0.0;
  for (int a = 0; a < dim_; ++a) s += static_cast<double>(dims_[a]) * dims_[a];
  return std::sqrt(s) * spacing_;
}

GridSet::GridSet(int dim, double spacing, Vec3 origin, GridDims dims, const GridLimits& limits)
    : geometry_(dim, spacing, origin, dims) {
  const double cells = static_cast<double>(dims[0]) * dims[1] * dims[2];
  if (cells > static_cast<double>(limits.max_cells)) {
    throw ResourceLimit("grid of " + std::to_string(static_cast<long long>(cells)) +
                        " cells exceeds the cap of " + std::to_string(limits.max_cells));
  }
  cells_.assign(geometry_.size(), 0);
}

GridSet::GridSet(const GridGeometry& geometry, std::vector<std::uint8_t> cells)
    : geometry_(geometry), cells_(std::move(cells)) {
  if (cells_.size() != geometry_.size()) {
    throw InvalidArgument("occupancy size does not match grid dims");
  }
  for (auto& c : cells_) c = c ? 1 : 0;
}

std::size_t GridSet::occupied_count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

int GridSet::margin() const {
  const auto& d = dims();
  std::array<int, 3> lo{d[0], d[1], d[2]};
  std::array<int, 3> hi{-1, -1, -1};
  bool any = false;
  for (int k = 0; k < d[2]; ++k) {
    for (int j = 0; j < d[1]; ++j) {
      for (int i = 0; i < d[0]; ++i) {
        if (!occupied(i, j, k)) continue;
        any = true;
        lo = {std::min(lo[0], i), std::min(lo[1], j), std::min(lo[2], k)};
        hi = {std::max(hi[0], i), std::max(hi[1], j), std::max(hi[2], k)};
      }
    }
  }
  int m = std::numeric_limits<int>::max();
  for (int a = 0; a < dim(); ++a) {
    if (!any) {
      m = std::min(m, d[a]);
    } else {
      m = std::min({m, lo[a], d[a] - 1 - hi[a]});
    }
  }
  return m;
}

}  // namespace minkperi
