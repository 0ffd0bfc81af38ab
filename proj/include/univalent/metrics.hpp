#pragma once

// Conformal metric densities lambda(z)|dz| on grids: the three canonical geometries,
// Gauss curvature by the 5-point Laplacian, pullbacks, Liouville pullbacks of maps
// into the canonical models, and harmonic gluing of two densities.

#include <functional>
#include <optional>
#include <vector>

#include "univalent/expansion.hpp"
#include "univalent/rational.hpp"

namespace univalent {

enum class CanonicalGeometry { Hyperbolic, Euclidean, Spherical };

/// -1, 0 or +1.
double geometry_curvature(CanonicalGeometry geom);
std::string_view to_string(CanonicalGeometry geom);

/// 2/(1-|z|^2), 1, or 2/(1+|z|^2); OutsideDisk for hyperbolic |z| >= 1.
double canonical_density(CanonicalGeometry geom, Cplx z);

using DensityFn = std::function<double(Cplx)>;

/// Cell centers origin + h (i + j i), i < nx, j < ny.
struct GridSpec {
  Cplx origin;
  double spacing = 0.01;
  int nx = 0;
  int ny = 0;

  /// Smallest grid with spacing h whose cells cover the disk, centered on it.
  static GridSpec covering(const ClosedDisk& disk, double h);
  Cplx point(int i, int j) const { return origin + spacing * Cplx(i, j); }
};

class MetricDensity {
 public:
  MetricDensity(GridSpec grid, std::vector<double> values, std::vector<char> mask);
  /// Samples lambda on the cells of grid lying in the disk; others are masked out.
  static MetricDensity sample(const DensityFn& lambda, const ClosedDisk& region, double h);

  const GridSpec& grid() const { return grid_; }
  double value(int i, int j) const { return values_[index(i, j)]; }
  bool valid(int i, int j) const { return i >= 0 && j >= 0 && i < grid_.nx && j < grid_.ny && mask_[index(i, j)]; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<char>& mask() const { return mask_; }
  int valid_count() const;

 private:
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * grid_.nx + i; }
  GridSpec grid_;
  std::vector<double> values_;
  std::vector<char> mask_;
};

struct CurvatureReport {
  GridSpec grid;
  /// NaN where the stencil was incomplete.
  std::vector<double> curvature;
  double max_abs_deviation_from_c = 0.0;
  int cells_evaluated = 0;

  double at(int i, int j) const { return curvature[static_cast<std::size_t>(j) * grid.nx + i]; }
};

/// kappa = -Laplacian(log lambda) / lambda^2 on every cell with a full stencil; deviations are from c.
/// With richardson, combines spacings h and 2h as (4 kappa_h - kappa_2h) / 3.
CurvatureReport curvature(const MetricDensity& lambda, double c = 0.0, bool richardson = false);

/// (lambda o phi) |phi'|; RangeEscape when phi leaves lambda's domain, CriticalPoint when phi' = 0.
DensityFn pullback(DensityFn lambda, HoloFn phi, HoloFn dphi);

/// f*lambda_{D_c} on the disk's grid with the exact derivative of f.
MetricDensity liouville_construct(const RationalFunction& f, CanonicalGeometry geom, const ClosedDisk& region,
                                  double h);
/// Same for a general evaluator; f' by 4th-order central differences with step h/4.
MetricDensity liouville_construct(const HoloFn& f, CanonicalGeometry geom, const ClosedDisk& region, double h);
/// Pointwise density of f*lambda_{D_c}, with the reciprocal form near poles in the spherical case.
DensityFn liouville_density(const RationalFunction& f, CanonicalGeometry geom);

MetricDensity scale_density(const MetricDensity& lambda, double factor);

struct HarmonicGlueResult {
  /// u = Re F.
  AnalyticExpansion potential;
  double error_on_k = 0.0;        // sup |e^u - lambda| on K
  double error_on_image = 0.0;    // sup |e^(u o phi) - mu| on K
  int degree_used = 0;
  double condition_number = 0.0;

  double u(Cplx z) const { return potential(z).real(); }
};

/// e^u close to lambda on K and to mu o phi^(-1) on K + T, with phi(z) = z + T.
HarmonicGlueResult harmonic_glue(const DensityFn& lambda, const DensityFn& mu, double stride, const ClosedDisk& k,
                                 double eps, int degree_cap = 64);

}  // namespace univalent
