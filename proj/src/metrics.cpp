#include "univalent/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "univalent/error.hpp"

namespace univalent {

namespace {

constexpr double kHyperbolicClip = 0.95;
constexpr double kCriticalDerivative = 1e-14;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

double spherical_from(Cplx w, Cplx dw) { return 2.0 * std::abs(dw) / (1.0 + std::norm(w)); }

// Shared grid loop for the Liouville constructions; density returns nullopt for clipped cells.
template <typename Density>
MetricDensity build_grid(const ClosedDisk& region, double h, Density density) {
  const GridSpec grid = GridSpec::covering(region, h);
  std::vector<double> values(static_cast<std::size_t>(grid.nx) * grid.ny, 0.0);
  std::vector<char> mask(values.size(), 0);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const Cplx z = grid.point(i, j);
      if (!region.contains(z, 1e-12 * region.radius)) continue;
      const std::optional<double> v = density(z);
      if (!v) continue;
      values[static_cast<std::size_t>(j) * grid.nx + i] = *v;
      mask[static_cast<std::size_t>(j) * grid.nx + i] = 1;
    }
  }
  return MetricDensity(grid, std::move(values), std::move(mask));
}

double canonical_at_image(CanonicalGeometry geom, Cplx w, Cplx dw) {
  if (std::abs(dw) <= kCriticalDerivative) throw Error(ErrorKind::CriticalPoint, "derivative vanishes");
  switch (geom) {
    case CanonicalGeometry::Hyperbolic:
      if (!(std::abs(w) < 1.0)) throw Error(ErrorKind::RangeEscape, "map leaves the unit disk");
      return 2.0 * std::abs(dw) / (1.0 - std::norm(w));
    case CanonicalGeometry::Euclidean:
      if (!std::isfinite(std::abs(w))) throw Error(ErrorKind::RangeEscape, "map is not finite");
      return std::abs(dw);
    case CanonicalGeometry::Spherical:
      return spherical_from(w, dw);
  }
  return 0.0;
}

}  // namespace

double geometry_curvature(CanonicalGeometry geom) {
  switch (geom) {
    case CanonicalGeometry::Hyperbolic:
      return -1.0;
    case CanonicalGeometry::Euclidean:
      return 0.0;
    case CanonicalGeometry::Spherical:
      return 1.0;
  }
  return 0.0;
}

std::string_view to_string(CanonicalGeometry geom) {
  switch (geom) {
    case CanonicalGeometry::Hyperbolic:
      return "hyperbolic";
    case CanonicalGeometry::Euclidean:
      return "euclidean";
    case CanonicalGeometry::Spherical:
      return "spherical";
  }
  return "?";
}

double canonical_density(CanonicalGeometry geom, Cplx z) {
  switch (geom) {
    case CanonicalGeometry::Hyperbolic:
      if (!(std::abs(z) < 1.0)) throw Error(ErrorKind::OutsideDisk, "hyperbolic density needs |z| < 1");
      return 2.0 / (1.0 - std::norm(z));
    case CanonicalGeometry::Euclidean:
      return 1.0;
    case CanonicalGeometry::Spherical:
      return 2.0 / (1.0 + std::norm(z));
  }
  return 0.0;
}

GridSpec GridSpec::covering(const ClosedDisk& disk, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid spacing must be positive");
  const int m = static_cast<int>(std::ceil(disk.radius / h - 1e-9));
  GridSpec g;
  g.spacing = h;
  g.nx = g.ny = 2 * m + 1;
  g.origin = disk.center - h * Cplx(m, m);
  return g;
}

MetricDensity::MetricDensity(GridSpec grid, std::vector<double> values, std::vector<char> mask)
    : grid_(grid), values_(std::move(values)), mask_(std::move(mask)) {
  const std::size_t n = static_cast<std::size_t>(grid_.nx) * grid_.ny;
  if (grid_.nx <= 0 || grid_.ny <= 0 || !(grid_.spacing > 0.0) || values_.size() != n || mask_.size() != n) {
    throw Error(ErrorKind::InvalidArgument, "density grid dimensions are inconsistent");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (mask_[k] && !positive_finite(values_[k])) {
      throw Error(ErrorKind::NonPositiveTarget, "density must be positive and finite on unmasked cells");
    }
  }
}

MetricDensity MetricDensity::sample(const DensityFn& lambda, const ClosedDisk& region, double h) {
  return build_grid(region, h, [&](Cplx z) -> std::optional<double> { return lambda(z); });
}

int MetricDensity::valid_count() const {
  return static_cast<int>(std::count(mask_.begin(), mask_.end(), 1));
}

CurvatureReport curvature(const MetricDensity& lambda, double c, bool richardson) {
  const GridSpec& g = lambda.grid();
  CurvatureReport report;
  report.grid = g;
  report.curvature.assign(static_cast<std::size_t>(g.nx) * g.ny, std::numeric_limits<double>::quiet_NaN());
  std::vector<double> logs(report.curvature.size(), 0.0);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (lambda.valid(i, j)) logs[static_cast<std::size_t>(j) * g.nx + i] = std::log(lambda.value(i, j));
    }
  }
  auto log_at = [&](int i, int j) { return logs[static_cast<std::size_t>(j) * g.nx + i]; };
  auto kappa = [&](int i, int j, int s) {
    const double hs = s * g.spacing;
    const double lap =
        (log_at(i + s, j) + log_at(i - s, j) + log_at(i, j + s) + log_at(i, j - s) - 4.0 * log_at(i, j)) / (hs * hs);
    const double v = lambda.value(i, j);
    return -lap / (v * v);
  };
  auto stencil = [&](int i, int j, int s) {
    return lambda.valid(i, j) && lambda.valid(i + s, j) && lambda.valid(i - s, j) && lambda.valid(i, j + s) &&
           lambda.valid(i, j - s);
  };
  const int reach = richardson ? 2 : 1;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (!stencil(i, j, 1) || (richardson && !stencil(i, j, reach))) continue;
      double k = kappa(i, j, 1);
      if (richardson) k = (4.0 * k - kappa(i, j, 2)) / 3.0;
      report.curvature[static_cast<std::size_t>(j) * g.nx + i] = k;
      report.max_abs_deviation_from_c = std::max(report.max_abs_deviation_from_c, std::abs(k - c));
      ++report.cells_evaluated;
    }
  }
  if (report.cells_evaluated < 9) {
    throw Error(ErrorKind::InsufficientInterior, "fewer than 9 cells have a complete stencil");
  }
  return report;
}

DensityFn pullback(DensityFn lambda, HoloFn phi, HoloFn dphi) {
  return [lambda = std::move(lambda), phi = std::move(phi), dphi = std::move(dphi)](Cplx z) {
    const Cplx d = dphi(z);
    if (std::abs(d) <= kCriticalDerivative) throw Error(ErrorKind::CriticalPoint, "pullback map has a critical point");
    const Cplx w = phi(z);
    double v = 0.0;
    try {
      v = lambda(w);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::OutsideDisk) throw Error(ErrorKind::RangeEscape, "pullback map leaves the domain");
      throw;
    }
    return v * std::abs(d);
  };
}

DensityFn liouville_density(const RationalFunction& f, CanonicalGeometry geom) {
  const RationalFunction df = differentiate(f);
  const RationalFunction g = RationalFunction::constant(1.0) / f;
  const RationalFunction dg = differentiate(g);
  return [f, df, g, dg, geom](Cplx z) {
    const ExtComplex w = f(z);
    if (geom == CanonicalGeometry::Spherical && (!w.is_finite() || std::abs(w.value()) > 1.0)) {
      // near a pole: the same density through 1/f
      const ExtComplex gw = g(z), dgw = dg(z);
      if (!gw.is_finite() || !dgw.is_finite()) throw Error(ErrorKind::NonFiniteValue, "reciprocal not finite");
      if (std::abs(dgw.value()) <= kCriticalDerivative) throw Error(ErrorKind::CriticalPoint, "derivative vanishes");
      return spherical_from(gw.value(), dgw.value());
    }
    if (!w.is_finite()) throw Error(ErrorKind::RangeEscape, "map has a pole in the region");
    const ExtComplex dw = df(z);
    return canonical_at_image(geom, w.value(), dw.value());
  };
}

MetricDensity liouville_construct(const RationalFunction& f, CanonicalGeometry geom, const ClosedDisk& region,
                                  double h) {
  const DensityFn lambda = liouville_density(f, geom);
  return build_grid(region, h, [&](Cplx z) -> std::optional<double> {
    if (geom == CanonicalGeometry::Hyperbolic) {
      const ExtComplex w = f(z);
      if (!w.is_finite() || !(std::abs(w.value()) < 1.0)) throw Error(ErrorKind::RangeEscape, "map leaves the unit disk");
      if (std::abs(w.value()) > kHyperbolicClip) return std::nullopt;
    }
    return lambda(z);
  });
}

MetricDensity liouville_construct(const HoloFn& f, CanonicalGeometry geom, const ClosedDisk& region, double h) {
  const double d = 0.25 * h;
  return build_grid(region, h, [&](Cplx z) -> std::optional<double> {
    const Cplx w = f(z);
    if (geom == CanonicalGeometry::Hyperbolic) {
      if (!(std::abs(w) < 1.0)) throw Error(ErrorKind::RangeEscape, "map leaves the unit disk");
      if (std::abs(w) > kHyperbolicClip) return std::nullopt;
    }
    const Cplx dw = (f(z - 2.0 * d) - 8.0 * f(z - d) + 8.0 * f(z + d) - f(z + 2.0 * d)) / (12.0 * d);
    return canonical_at_image(geom, w, dw);
  });
}

MetricDensity scale_density(const MetricDensity& lambda, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw Error(ErrorKind::InvalidArgument, "scale factor must be positive");
  std::vector<double> v = lambda.values();
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (lambda.mask()[k]) v[k] *= factor;
  }
  return MetricDensity(lambda.grid(), std::move(v), lambda.mask());
}

HarmonicGlueResult harmonic_glue(const DensityFn& lambda, const DensityFn& mu, double stride, const ClosedDisk& k,
                                 double eps, int degree_cap) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  if (!(stride > 2.0 * k.radius + 1.0)) throw Error(ErrorKind::Overlap, "translation stride must exceed 2r + 1");
  const ClosedDisk image{k.center + stride, k.radius};
  const auto region = CompactRegion::disk_union({k, image});

  auto log_target = [&](Cplx z, bool on_image) {
    const double v = on_image ? mu(z - stride) : lambda(z);
    if (!positive_finite(v)) throw Error(ErrorKind::NonPositiveTarget, "glue targets must be positive");
    return std::log(v);
  };
  auto on_image = [&](Cplx z) { return std::abs(z - image.center) < std::abs(z - k.center); };

  // error check on K: boundary validation samples and an interior grid
  std::vector<Cplx> check_k = interior_grid(CompactRegion::disk(k.center, k.radius), k.radius / 8.0).points;
  for (Cplx z : validation_samples(CompactRegion::disk(k.center, k.radius), 64).points) check_k.push_back(z);
  std::vector<double> lambda_k, mu_k;
  for (Cplx z : check_k) {
    lambda_k.push_back(lambda(z));
    mu_k.push_back(mu(z));
    if (!positive_finite(lambda_k.back()) || !positive_finite(mu_k.back())) {
      throw Error(ErrorKind::NonPositiveTarget, "glue targets must be positive");
    }
  }

  double best = INFINITY;
  const int last = std::max(degree_cap, 8);
  for (int d = 8;; d = std::min(d + 8, last)) {
    const BasisSpec spec{region.centroid(), region.extent(), d, {}};
    const int n = samples_per_circle(2 * spec.size(), 2);
    const auto pts = boundary_samples(region, n).points;
    std::vector<double> vals;
    for (Cplx z : pts) vals.push_back(log_target(z, on_image(z)));
    const LsFit fit = fit_real_part_ls(pts, vals, spec, {}, {});

    HarmonicGlueResult r;
    r.potential = fit.expansion;
    r.degree_used = d;
    r.condition_number = fit.condition_number;
    for (std::size_t i = 0; i < check_k.size(); ++i) {
      const Cplx z = check_k[i];
      r.error_on_k = std::max(r.error_on_k, std::abs(std::exp(r.u(z)) - lambda_k[i]));
      r.error_on_image = std::max(r.error_on_image, std::abs(std::exp(r.u(z + stride)) - mu_k[i]));
    }
    const double worst = std::max(r.error_on_k, r.error_on_image);
    best = std::min(best, worst);
    if (worst <= eps) return r;
    if (d >= last) break;
  }
  throw Error(ErrorKind::DegreeCapExceeded,
              "harmonic glue error stayed above eps up to the degree cap (best " + std::to_string(best) + ")");
}

}  // namespace univalent
