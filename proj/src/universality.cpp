#include "univalent/universality.hpp"

#include <algorithm>
#include <cmath>

#include "univalent/error.hpp"
#include "univalent/univalence.hpp"

namespace univalent {

namespace {

constexpr int kProbeCount = 8;
constexpr int kCollisionSamples = 64;
constexpr double kCollisionTol = 1e-10;
constexpr double kStageGapFraction = 0.5;

bool disks_disjoint(const ClosedDisk& a, const ClosedDisk& b) {
  return std::abs(a.center - b.center) > a.radius + b.radius;
}

std::vector<Cplx> probe_points(const CompactRegion& k) {
  const double extent = k.extent();
  std::vector<Cplx> inner;
  for (Cplx z : interior_grid(k, extent / 8.0).points) {
    if (k.boundary_distance(z) > 0.05 * extent) inner.push_back(z);
  }
  if (inner.empty()) throw Error(ErrorKind::EmptyRegion, "region too thin for injectivity probes");
  std::vector<Cplx> probes;
  for (int j = 0; j < kProbeCount; ++j) {
    probes.push_back(inner[static_cast<std::size_t>((j + 0.5) * inner.size() / kProbeCount)]);
  }
  return probes;
}

std::vector<Cplx> check_points(const ClosedDisk& k) {
  return validation_samples(CompactRegion::disk(k.center, k.radius), 64).points;
}

}  // namespace

// ---------------------------------------------------------------------------
// Sequences

SelfMapSequence SelfMapSequence::translations(Cplx stride) {
  return SelfMapSequence(Translations{stride}, DomainSpec::whole_plane());
}

SelfMapSequence SelfMapSequence::disk_automorphisms(std::vector<Cplx> a, std::vector<double> theta) {
  if (a.size() != theta.size()) throw Error(ErrorKind::InvalidArgument, "parameter lists differ in length");
  for (Cplx x : a) {
    if (!(std::abs(x) < 1.0)) throw Error(ErrorKind::InvalidArgument, "automorphism parameters need |a| < 1");
  }
  return SelfMapSequence(DiskAutomorphisms{std::move(a), std::move(theta)}, DomainSpec::unit_disk());
}

SelfMapSequence SelfMapSequence::rotations(double step, int count) {
  std::vector<Cplx> a(count, 0.0);
  std::vector<double> theta(count);
  for (int n = 0; n < count; ++n) theta[n] = (n + 1) * step;
  return disk_automorphisms(std::move(a), std::move(theta));
}

SelfMapSequence SelfMapSequence::explicit_maps(std::vector<MoebiusMap> maps, DomainSpec domain) {
  return SelfMapSequence(ExplicitMaps{std::move(maps)}, std::move(domain));
}

std::optional<int> SelfMapSequence::size() const {
  if (std::holds_alternative<Translations>(variant_)) return std::nullopt;
  if (const auto* d = std::get_if<DiskAutomorphisms>(&variant_)) return static_cast<int>(d->a.size());
  return static_cast<int>(std::get<ExplicitMaps>(variant_).maps.size());
}

MoebiusMap SelfMapSequence::member(int n) const {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "negative sequence index");
  if (n == 0) return MoebiusMap::identity();
  if (const auto* t = std::get_if<Translations>(&variant_)) return MoebiusMap::translation(static_cast<double>(n) * t->stride);
  const auto sz = size();
  if (n > *sz) throw Error(ErrorKind::InvalidArgument, "sequence index beyond the explicit list");
  if (const auto* d = std::get_if<DiskAutomorphisms>(&variant_)) {
    return MoebiusMap::disk_automorphism(d->a[n - 1], d->theta[n - 1]);
  }
  return std::get<ExplicitMaps>(variant_).maps[n - 1];
}

// ---------------------------------------------------------------------------
// Diagnostics

std::optional<int> runaway_index(const SelfMapSequence& seq, const CompactRegion& k, int max_n) {
  const auto hulls = k.hulls();
  const int last = seq.size() ? std::min(max_n, *seq.size()) : max_n;
  for (int n = 1; n <= last; ++n) {
    const MoebiusMap phi = seq.member(n);
    bool disjoint = true;
    for (const auto& h : hulls) {
      const auto image = phi.image_of_disk(h);
      if (!image) {
        disjoint = false;
        break;
      }
      for (const auto& other : hulls) disjoint = disjoint && disks_disjoint(*image, other);
    }
    if (disjoint) return n;
  }
  return std::nullopt;
}

bool injectivity_check(const HoloFn& phi, const CompactRegion& k) {
  const auto circles = k.boundary(256);
  for (Cplx z0 : probe_points(k)) {
    const Cplx w = phi(z0);
    int count = 0;
    for (const auto& c : circles) {
      for (int j = 0; j < c.contour.node_count; ++j) {
        if (std::abs(phi(c.contour.node(j)) - w) <= kCollisionTol * (1.0 + std::abs(w))) {
          throw Error(ErrorKind::ProbeOnBoundary, "a probe value is attained on the boundary");
        }
      }
      count += argument_winding([&](Cplx z) { return phi(z) - w; }, c.contour);
    }
    if (count != 1) return false;
  }
  const auto samples = boundary_samples(k, kCollisionSamples).points;
  std::vector<Cplx> values;
  for (Cplx z : samples) values.push_back(phi(z));
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      if (std::abs(values[i] - values[j]) <= kCollisionTol) return false;
    }
  }
  return true;
}

bool injectivity_check(const MoebiusMap& phi, const CompactRegion& k) {
  const ExtComplex pole = phi.pole();
  if (pole.is_finite() && k.contains(pole.value(), 1e-12)) {
    throw Error(ErrorKind::InvalidArgument, "Mobius map has its pole on the region");
  }
  return injectivity_check([phi](Cplx z) { return phi(z).value(); }, k);
}

SequenceDiagnostics diagnose_sequence(const SelfMapSequence& seq, const std::vector<CompactRegion>& regions,
                                      int max_n) {
  SequenceDiagnostics out;
  out.max_n = seq.size() ? std::min(max_n, *seq.size()) : max_n;
  for (const auto& k : regions) {
    SequenceDiagnostics::RegionReport r{k, runaway_index(seq, k, max_n), {}, true};
    for (int n = 1; n <= out.max_n; ++n) {
      r.injective.push_back(injectivity_check(seq.member(n), k));
      r.eventually_injective = r.eventually_injective && r.injective.back();
    }
    out.regions.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Finite-stage universality

std::vector<int> select_stages(const SelfMapSequence& seq, const ClosedDisk& k, int count) {
  if (count <= 0) throw Error(ErrorKind::InvalidArgument, "need at least one stage");
  const int scan_end = seq.size() ? std::min(2 * count - 1, *seq.size()) : 2 * count - 1;
  const double gap = kStageGapFraction * k.radius;
  std::vector<int> stages;
  std::vector<ClosedDisk> images;
  for (int n = 0; n <= scan_end && static_cast<int>(stages.size()) < count; ++n) {
    const auto image = seq.member(n).image_of_disk(k);
    if (!image) continue;
    const auto image_region = CompactRegion::disk(image->center, image->radius);
    bool inside = true;
    for (Cplx z : boundary_samples(image_region, 16).points) inside = inside && seq.domain().contains(z);
    if (!inside) continue;
    bool separated = true;
    for (const auto& other : images) {
      separated = separated && std::abs(image->center - other.center) >= image->radius + other.radius + gap;
    }
    if (!separated) continue;
    stages.push_back(n);
    images.push_back(*image);
  }
  if (static_cast<int>(stages.size()) < count) {
    throw Error(ErrorKind::StagesNotSeparable, "not enough stages with separated images of K");
  }
  return stages;
}

FiniteUniversal build_finite_universal(const std::vector<RationalFunction>& targets, const ClosedDisk& k,
                                       const SelfMapSequence& seq, double eps) {
  if (targets.empty()) throw Error(ErrorKind::InvalidArgument, "no targets");
  const auto k_region = CompactRegion::disk(k.center, k.radius);
  for (const auto& g : targets) {
    if (!certify_local_univalence(g, k_region).verdict) {
      throw Error(ErrorKind::NotLocallyUnivalent, "a target is not locally univalent on K");
    }
  }
  const auto stages = select_stages(seq, k, static_cast<int>(targets.size()));
  std::vector<GluePiece> pieces;
  std::vector<MoebiusMap> maps;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const MoebiusMap phi = seq.member(stages[i]);
    maps.push_back(phi);
    pieces.push_back({*phi.image_of_disk(k), targets[i], phi.inverse()});
  }
  GlueResult glued = glue_targets(pieces, seq.domain(), eps);

  OrbitReport report;
  report.stages = stages;
  report.glue = glued.report;
  report.univalence_certified = true;
  const auto samples = check_points(k);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    double err = 0.0;
    for (Cplx z : samples) {
      const Cplx fz = glued.map(maps[i](z).value());
      err = std::max(err, std::abs(fz - targets[i](z).value()));
    }
    report.target_errors.push_back(err);
    const ClosedDisk& disk = pieces[i].disk;
    const Contour circle(disk.center, disk.radius, 1, default_node_count(glued.report.degree_used));
    const int zeros = argument_winding([&](Cplx z) { return glued.map.derivative(z); }, circle);
    report.derivative_zero_counts.push_back(zeros);
    report.univalence_certified = report.univalence_certified && zeros == 0;
  }
  return {std::move(glued.map), std::move(maps), std::move(report)};
}

// ---------------------------------------------------------------------------
// Covering maps

Cplx CoveringMap::operator()(Cplx z) const {
  if (domain == CoveringDomain::UnitDisk) return z;
  return std::exp((z + 1.0) / (z - 1.0));
}

Cplx CoveringMap::derivative(Cplx z) const {
  if (domain == CoveringDomain::UnitDisk) return 1.0;
  return (*this)(z) * (-2.0 / ((z - 1.0) * (z - 1.0)));
}

CoveringMap covering_map_special(CoveringDomain domain) { return CoveringMap{domain}; }

CoveringMap covering_map_special(std::string_view domain) {
  if (domain == "unit-disk") return {CoveringDomain::UnitDisk};
  if (domain == "punctured-unit-disk") return {CoveringDomain::PuncturedUnitDisk};
  throw Error(ErrorKind::UnsupportedDomain, "covering maps exist only for the unit disk and the punctured unit disk");
}

// ---------------------------------------------------------------------------
// Metric orbits

MetricOrbitReport metric_orbit_experiment(const std::vector<RationalFunction>& maps, CanonicalGeometry geom,
                                          const ClosedDisk& k, const SelfMapSequence& seq, double eps) {
  const auto k_region = CompactRegion::disk(k.center, k.radius);
  std::vector<Cplx> samples = check_points(k);
  for (Cplx z : interior_grid(k_region, k.radius / 4.0).points) samples.push_back(z);
  std::vector<DensityFn> targets;
  for (const auto& f : maps) {
    for (Cplx z : samples) {
      const ExtComplex w = f(z);
      if (geom == CanonicalGeometry::Hyperbolic && !(w.is_finite() && std::abs(w.value()) < 1.0)) {
        throw Error(ErrorKind::RangeEscape, "target map leaves the unit disk on K");
      }
      if (geom == CanonicalGeometry::Euclidean && !w.is_finite()) {
        throw Error(ErrorKind::RangeEscape, "target map has a pole on K");
      }
    }
    targets.push_back(liouville_density(f, geom));
  }

  MetricOrbitReport out;
  FiniteUniversal fu = build_finite_universal(maps, k, seq, eps);
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const MoebiusMap& phi = fu.stage_maps[i];
    double err = 0.0;
    for (Cplx z : samples) {
      const Cplx w = phi(z).value();
      const Cplx fw = fu.map(w), dfw = fu.map.derivative(w);
      if (geom == CanonicalGeometry::Hyperbolic && !(std::abs(fw) < 1.0)) {
        throw Error(ErrorKind::RangeEscape, "glued map leaves the unit disk");
      }
      const double lambda_c = canonical_density(geom, fw);
      const double pulled = lambda_c * std::abs(dfw) * std::abs(phi.derivative(z));
      err = std::max(err, std::abs(pulled - targets[i](z)));
    }
    out.density_errors.push_back(err);
  }
  out.orbit = std::move(fu.report);
  return out;
}

}  // namespace univalent
