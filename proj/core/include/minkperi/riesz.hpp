#pragma once

#include <cstddef>

#include "minkperi/convex_geometry.hpp"
#include "minkperi/grid_set.hpp"

namespace minkperi {

// Sampled kernel |z|^{-alpha} on a grid of spacing h. The coincident-cell
// entry is the mean of |z|^{-alpha} over one cell instead of the singular
// point value.
struct RieszKernel {
  int dim = 2;
  double alpha = 1.0;
  double spacing = 1.0;
  double origin_weight = 0.0;

  // Throws InvalidArgument unless 0 < alpha < dim and h > 0.
  static RieszKernel make(int dim, double alpha, double spacing);

  double at_offset(double dx, double dy, double dz = 0.0) const;
};

// Integral of |z|^{-alpha} over the unit cube [-1/2, 1/2]^dim.
double unit_cell_kernel_integral(int dim, double alpha);

struct RieszLimits {
  std::size_t direct_max_cells = 20000;
  std::size_t fast_max_cells = std::size_t{1} << 24;  // padded transform size
};

// h^{2n} sum over occupied pairs of k(p - q). O(N^2); bit-reproducible.
double riesz_energy_direct(const GridSet& set, const RieszKernel& kernel,
                           const RieszLimits& limits = {});

// V = k * 1_E per cell by zero-padded FFT convolution (each axis doubled).
ScalarField riesz_potential(const GridSet& set, const RieszKernel& kernel,
                            const RieszLimits& limits = {});

// h^n sum over occupied cells of V, with V from riesz_potential.
double riesz_energy_fast(const GridSet& set, const RieszKernel& kernel,
                         const RieszLimits& limits = {});
double riesz_energy_from_potential(const GridSet& set, const ScalarField& potential);

// Riesz energy of a planar convex polygon through the chord-power identity
//   Phi_alpha(K) = 2 / ((2-alpha)(3-alpha)) * int over lines G of
//                  chord(G)^{3-alpha} dG,
// with the offset integral done in closed form and the direction integral by
// adaptive Gauss-Kronrod quadrature between edge directions. Requires
// 0 < alpha < 2. The default tolerance gives about 1e-12 relative accuracy.
double riesz_energy_polygon(const ConvexPolytope& p, double alpha, double rel_tol = 1e-12);

// Closed form for the disk of radius R (alpha in (0, 2)).
double riesz_energy_disk(double radius, double alpha);

// Scaling exponent 2n - alpha: Phi(lambda E) = lambda^{2n-alpha} Phi(E).
inline double riesz_scaling_exponent(int n, double alpha) { return 2.0 * n - alpha; }

// Explicit constant of the potential Lipschitz estimate for unit-volume sets:
// 2 (n w_n/(n-alpha) s^{n-alpha} + 2 s^{-alpha}) at
// s = (2(n-alpha)/(n w_n))^{1/n}.
double potential_gap_constant(int n, double alpha);

}  // namespace minkperi
