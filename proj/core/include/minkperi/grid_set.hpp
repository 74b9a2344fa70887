#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "minkperi/vec.hpp"

namespace minkperi {

struct GridLimits {
  // Upper bound on the number of cells any single grid may hold.
  std::size_t max_cells = std::size_t{1} << 24;
};

using GridDims = std::array<int, 3>;

// Shared geometry of a regular grid: cell (i,j,k) covers
// origin + h*[i,i+1) x [j,j+1) x [k,k+1). Planar grids have dims[2] == 1.
class GridGeometry {
 public:
  GridGeometry() = default;
  GridGeometry(int dim, double spacing, Vec3 origin, GridDims dims);

  int dim() const { return dim_; }
  double spacing() const { return spacing_; }
  const Vec3& origin() const { return origin_; }
  const GridDims& dims() const { return dims_; }
  std::size_t size() const {
    return static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
  }
  double cell_volume() const;

  std::size_t index(int i, int j, int k = 0) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims_[0]) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims_[1]) * k);
  }
  std::array<int, 3> coords(std::size_t idx) const;
  Vec3 cell_center(int i, int j, int k = 0) const;
  Vec3 cell_center(std::size_t idx) const;

  // Euclidean length of the grid's diagonal.
  double diagonal() const;

  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;

 private:
  int dim_ = 2;
  double spacing_ = 1.0;
  Vec3 origin_{};
  GridDims dims_{1, 1, 1};
};

// Binary occupancy grid: the discrete stand-in for a measurable set.
// A cell belongs to the set iff its center does.
class GridSet {
 public:
  GridSet() = default;
  // Empty set on the given grid. Throws InvalidArgument on bad geometry and
  // ResourceLimit when the cell count exceeds limits.max_cells.
  GridSet(int dim, double spacing, Vec3 origin, GridDims dims, const GridLimits& limits = {});
  GridSet(const GridGeometry& geometry, std::vector<std::uint8_t> cells);

  const GridGeometry& geometry() const { return geometry_; }
  int dim() const { return geometry_.dim(); }
  double spacing() const { return geometry_.spacing(); }
  const Vec3& origin() const { return geometry_.origin(); }
  const GridDims& dims() const { return geometry_.dims(); }
  std::size_t size() const { return cells_.size(); }

  bool occupied(std::size_t idx) const { return cells_[idx] != 0; }
  bool occupied(int i, int j, int k = 0) const { return cells_[geometry_.index(i, j, k)] != 0; }
  void set(std::size_t idx, bool value) { cells_[idx] = value ? 1 : 0; }
  void set(int i, int j, int k, bool value) { set(geometry_.index(i, j, k), value); }

  std::span<const std::uint8_t> cells() const { return cells_; }

  std::size_t occupied_count() const;
  bool empty() const { return occupied_count() == 0; }

  // Smallest number of empty cells between the occupied region and the
  // array boundary, over all axes in use. Equals the smallest dims
  // component when the set is empty.
  int margin() const;

  friend bool operator==(const GridSet&, const GridSet&) = default;

 private:
  GridGeometry geometry_;
  std::vector<std::uint8_t> cells_;
};

// Per-cell real values on a grid (distance fields, Riesz potentials).
struct ScalarField {
  GridGeometry geometry;
  std::vector<double> values;
};

}  // namespace minkperi
