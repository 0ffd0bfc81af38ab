#include "univalent/complex_foundation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "univalent/error.hpp"

namespace univalent {

namespace {

constexpr double kMaxPhaseJump = kPi / 2;

void require_positive(double r, const char* what) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw Error(ErrorKind::InvalidGeometry, std::string(what) + " must be positive and finite");
  }
}

bool disks_separated(const ClosedDisk& a, const ClosedDisk& b) {
  return std::abs(a.center - b.center) > a.radius + b.radius;
}

// 16-point Gauss-Legendre rule on [-1, 1], computed once by Newton iteration on P_16.
struct GaussLegendre16 {
  std::array<double, 16> x{};
  std::array<double, 16> w{};

  GaussLegendre16() {
    constexpr int n = 16;
    for (int i = 0; i < n; ++i) {
      double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }
};

const GaussLegendre16& gauss_legendre() {
  static const GaussLegendre16 rule;
  return rule;
}

double piece_length(const PathPiece& piece) {
  if (const auto* s = std::get_if<Segment>(&piece)) return std::abs(s->to - s->from);
  const auto& a = std::get<Arc>(piece);
  return a.radius * std::abs(a.theta_to - a.theta_from);
}

Cplx piece_point(const PathPiece& piece, double t) {
  if (const auto* s = std::get_if<Segment>(&piece)) return s->from + t * (s->to - s->from);
  const auto& a = std::get<Arc>(piece);
  double th = a.theta_from + t * (a.theta_to - a.theta_from);
  return a.center + a.radius * std::polar(1.0, th);
}

// dz/dt for the unit parametrization t in [0, 1].
Cplx piece_velocity(const PathPiece& piece, double t) {
  if (const auto* s = std::get_if<Segment>(&piece)) return s->to - s->from;
  const auto& a = std::get<Arc>(piece);
  double sweep = a.theta_to - a.theta_from;
  double th = a.theta_from + t * sweep;
  return Cplx(0.0, sweep) * a.radius * std::polar(1.0, th);
}

}  // namespace

// ---------------------------------------------------------------------------
// Contour

Contour::Contour(Cplx c, double r, int orient, int nodes)
    : center(c), radius(r), orientation(orient), node_count(nodes) {
  require_positive(r, "contour radius");
  if (orient != 1 && orient != -1) throw Error(ErrorKind::InvalidArgument, "orientation must be +1 or -1");
  if (nodes < 16) throw Error(ErrorKind::InvalidArgument, "contour needs at least 16 nodes");
}

Cplx Contour::node(int k) const {
  return center + std::polar(radius, orientation * 2.0 * kPi * k / node_count);
}

int default_node_count(int degree) { return std::max(64, 8 * degree + 16); }

// ---------------------------------------------------------------------------
// CompactRegion

CompactRegion CompactRegion::disk(Cplx center, double radius) {
  require_positive(radius, "disk radius");
  return CompactRegion(ClosedDisk{center, radius});
}

CompactRegion CompactRegion::annulus(Cplx center, double r_inner, double r_outer) {
  require_positive(r_inner, "inner radius");
  require_positive(r_outer, "outer radius");
  if (!(r_inner < r_outer)) throw Error(ErrorKind::InvalidGeometry, "annulus needs r_inner < r_outer");
  return CompactRegion(Annulus{center, r_inner, r_outer});
}

CompactRegion CompactRegion::disk_union(std::vector<ClosedDisk> disks) {
  if (disks.empty()) throw Error(ErrorKind::InvalidGeometry, "disk union needs at least one disk");
  for (const auto& d : disks) require_positive(d.radius, "disk radius");
  for (std::size_t i = 0; i < disks.size(); ++i) {
    for (std::size_t j = i + 1; j < disks.size(); ++j) {
      if (!disks_separated(disks[i], disks[j])) {
        throw Error(ErrorKind::InvalidGeometry, "disk union members must be disjoint with positive gaps");
      }
    }
  }
  return CompactRegion(DiskUnion{std::move(disks)});
}

CompactRegion CompactRegion::holed_disk(ClosedDisk outer, std::vector<ClosedDisk> holes) {
  require_positive(outer.radius, "outer radius");
  for (const auto& h : holes) {
    require_positive(h.radius, "hole radius");
    if (std::abs(h.center - outer.center) + h.radius >= outer.radius) {
      throw Error(ErrorKind::InvalidGeometry, "hole closure must lie inside the outer disk");
    }
  }
  for (std::size_t i = 0; i < holes.size(); ++i) {
    for (std::size_t j = i + 1; j < holes.size(); ++j) {
      if (!disks_separated(holes[i], holes[j])) {
        throw Error(ErrorKind::InvalidGeometry, "holes must be pairwise disjoint");
      }
    }
  }
  return CompactRegion(HoledDisk{outer, std::move(holes)});
}

bool CompactRegion::contains(Cplx z, double tol) const {
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ClosedDisk>) {
          return s.contains(z, tol);
        } else if constexpr (std::is_same_v<T, Annulus>) {
          double r = std::abs(z - s.center);
          return r <= s.r_outer + tol && r >= s.r_inner - tol;
        } else if constexpr (std::is_same_v<T, DiskUnion>) {
          return std::any_of(s.disks.begin(), s.disks.end(), [&](const ClosedDisk& d) { return d.contains(z, tol); });
        } else {
          if (!s.outer.contains(z, tol)) return false;
          return std::none_of(s.holes.begin(), s.holes.end(),
                              [&](const ClosedDisk& h) { return std::abs(z - h.center) < h.radius - tol; });
        }
      },
      shape_);
}

double CompactRegion::boundary_distance(Cplx z) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& bc : boundary(16)) {
    best = std::min(best, std::abs(std::abs(z - bc.contour.center) - bc.contour.radius));
  }
  return best;
}

std::vector<BoundaryCircle> CompactRegion::boundary(int node_count) const {
  std::vector<BoundaryCircle> out;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ClosedDisk>) {
          out.push_back({Contour(s.center, s.radius, 1, node_count), 0, false});
        } else if constexpr (std::is_same_v<T, Annulus>) {
          out.push_back({Contour(s.center, s.r_outer, 1, node_count), 0, false});
          out.push_back({Contour(s.center, s.r_inner, -1, node_count), 0, true});
        } else if constexpr (std::is_same_v<T, DiskUnion>) {
          for (std::size_t i = 0; i < s.disks.size(); ++i) {
            out.push_back({Contour(s.disks[i].center, s.disks[i].radius, 1, node_count), static_cast<int>(i), false});
          }
        } else {
          out.push_back({Contour(s.outer.center, s.outer.radius, 1, node_count), 0, false});
          for (const auto& h : s.holes) out.push_back({Contour(h.center, h.radius, -1, node_count), 0, true});
        }
      },
      shape_);
  return out;
}

std::vector<ClosedDisk> CompactRegion::holes() const {
  if (const auto* a = std::get_if<Annulus>(&shape_)) return {ClosedDisk{a->center, a->r_inner}};
  if (const auto* h = std::get_if<HoledDisk>(&shape_)) return h->holes;
  return {};
}

std::vector<ClosedDisk> CompactRegion::hulls() const {
  if (const auto* d = std::get_if<ClosedDisk>(&shape_)) return {*d};
  if (const auto* a = std::get_if<Annulus>(&shape_)) return {ClosedDisk{a->center, a->r_outer}};
  if (const auto* u = std::get_if<DiskUnion>(&shape_)) return u->disks;
  return {std::get<HoledDisk>(shape_).outer};
}

int CompactRegion::component_count() const { return static_cast<int>(hulls().size()); }

Cplx CompactRegion::anchor() const { return hulls().front().center; }

Cplx CompactRegion::centroid() const {
  auto h = hulls();
  Cplx sum = 0.0;
  for (const auto& d : h) sum += d.center;
  return sum / static_cast<double>(h.size());
}

double CompactRegion::extent() const {
  Cplx c = centroid();
  double r = 0.0;
  for (const auto& d : hulls()) r = std::max(r, std::abs(d.center - c) + d.radius);
  return r;
}

double CompactRegion::diameter() const {
  auto h = hulls();
  double best = 0.0;
  for (const auto& a : h) {
    for (const auto& b : h) best = std::max(best, std::abs(a.center - b.center) + a.radius + b.radius);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Sampling

SampleSet boundary_samples(const CompactRegion& region, int n_per_component, double phase) {
  if (n_per_component < 16) throw Error(ErrorKind::InvalidArgument, "need at least 16 samples per component");
  SampleSet out;
  out.role = SampleRole::Boundary;
  for (const auto& bc : region.boundary(16)) {
    for (int k = 0; k < n_per_component; ++k) {
      out.points.push_back(bc.contour.center +
                           std::polar(bc.contour.radius, 2.0 * kPi * (k + phase) / n_per_component));
    }
  }
  return out;
}

SampleSet validation_samples(const CompactRegion& region, int n_per_component) {
  return boundary_samples(region, 2 * n_per_component, 0.5);
}

SampleSet interior_grid(const CompactRegion& region, double spacing) {
  if (!(spacing > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid spacing must be positive");
  if (spacing > region.diameter()) throw Error(ErrorKind::EmptyRegion, "grid spacing exceeds region size");
  const Cplx anchor = region.anchor();
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& d : region.hulls()) {
    xmin = std::min(xmin, d.center.real() - d.radius);
    xmax = std::max(xmax, d.center.real() + d.radius);
    ymin = std::min(ymin, d.center.imag() - d.radius);
    ymax = std::max(ymax, d.center.imag() + d.radius);
  }
  const double tol = 1e-12 * std::max(1.0, region.extent());
  const long jmin = static_cast<long>(std::floor((xmin - anchor.real()) / spacing)) - 1;
  const long jmax = static_cast<long>(std::ceil((xmax - anchor.real()) / spacing)) + 1;
  const long kmin = static_cast<long>(std::floor((ymin - anchor.imag()) / spacing)) - 1;
  const long kmax = static_cast<long>(std::ceil((ymax - anchor.imag()) / spacing)) + 1;
  SampleSet out;
  out.role = SampleRole::InteriorGrid;
  out.spacing = spacing;
  for (long k = kmin; k <= kmax; ++k) {
    for (long j = jmin; j <= jmax; ++j) {
      Cplx z = anchor + spacing * Cplx(static_cast<double>(j), static_cast<double>(k));
      if (region.contains(z, tol)) out.points.push_back(z);
    }
  }
  if (out.points.empty()) throw Error(ErrorKind::EmptyRegion, "no grid points inside the region");
  return out;
}

// ---------------------------------------------------------------------------
// DomainSpec

DomainSpec DomainSpec::whole_plane() { return DomainSpec(WholePlane{}); }

DomainSpec DomainSpec::punctured_plane(std::vector<Cplx> punctures) {
  for (std::size_t i = 0; i < punctures.size(); ++i) {
    for (std::size_t j = i + 1; j < punctures.size(); ++j) {
      if (punctures[i] == punctures[j]) throw Error(ErrorKind::InvalidGeometry, "punctures must be distinct");
    }
  }
  return DomainSpec(PuncturedPlane{std::move(punctures)});
}

DomainSpec DomainSpec::unit_disk() { return DomainSpec(UnitDisk{}); }

DomainSpec DomainSpec::simply_connected(ClosedDisk marker) {
  require_positive(marker.radius, "marker radius");
  return DomainSpec(SimplyConnected{marker});
}

bool DomainSpec::contains(Cplx z) const {
  if (const auto* p = std::get_if<PuncturedPlane>(&variant_)) {
    return std::none_of(p->punctures.begin(), p->punctures.end(), [&](Cplx q) { return q == z; });
  }
  if (std::holds_alternative<UnitDisk>(variant_)) return std::abs(z) < 1.0;
  return true;
}

std::span<const Cplx> DomainSpec::punctures() const {
  if (const auto* p = std::get_if<PuncturedPlane>(&variant_)) return p->punctures;
  return {};
}

bool DomainSpec::is_simply_connected() const {
  if (const auto* p = std::get_if<PuncturedPlane>(&variant_)) return p->punctures.empty();
  return true;
}

void DomainSpec::check_compatible(const CompactRegion& region) const {
  for (Cplx p : punctures()) {
    if (region.contains(p, 1e-12)) throw Error(ErrorKind::InvalidGeometry, "puncture lies in the compact region");
  }
  if (std::holds_alternative<UnitDisk>(variant_)) {
    for (const auto& d : region.hulls()) {
      if (std::abs(d.center) + d.radius >= 1.0) {
        throw Error(ErrorKind::InvalidGeometry, "region must lie inside the unit disk");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Paths

Path Path::segment(Cplx a, Cplx b) {
  Path p(a);
  p.line_to(b);
  return p;
}

Path Path::polyline(std::span<const Cplx> vertices) {
  if (vertices.empty()) throw Error(ErrorKind::InvalidArgument, "polyline needs a vertex");
  Path p(vertices.front());
  for (std::size_t i = 1; i < vertices.size(); ++i) p.line_to(vertices[i]);
  return p;
}

Path& Path::line_to(Cplx z) {
  if (z != end_) pieces_.emplace_back(Segment{end_, z});
  end_ = z;
  return *this;
}

Path& Path::arc_by(Cplx center, double sweep) {
  const double r = std::abs(end_ - center);
  const double th0 = std::arg(end_ - center);
  if (sweep != 0.0 && r > 0.0) {
    pieces_.emplace_back(Arc{center, r, th0, th0 + sweep});
    end_ = center + std::polar(r, th0 + sweep);
  }
  return *this;
}

Path& Path::append(const Path& other) {
  if (pieces_.empty() && other.pieces_.empty()) {
    end_ = other.end_;
    return *this;
  }
  if (std::abs(other.start_ - end_) > 1e-12 * (1.0 + std::abs(end_))) line_to(other.start_);
  for (const auto& p : other.pieces_) pieces_.push_back(p);
  end_ = other.end_;
  return *this;
}

double Path::length() const {
  double total = 0.0;
  for (const auto& p : pieces_) total += piece_length(p);
  return total;
}

std::vector<Cplx> Path::sample(double max_spacing) const {
  std::vector<Cplx> out{start_};
  for (const auto& piece : pieces_) {
    int n = std::max(1, static_cast<int>(std::ceil(piece_length(piece) / max_spacing)));
    for (int k = 1; k <= n; ++k) out.push_back(piece_point(piece, static_cast<double>(k) / n));
  }
  return out;
}

Path route_around(Cplx a, Cplx b, std::span<const ClosedDisk> holes) {
  for (const auto& h : holes) {
    const double inner = h.radius * (1.0 - 1e-12);
    if (std::abs(a - h.center) < inner || std::abs(b - h.center) < inner) {
      throw Error(ErrorKind::InvalidArgument, "route endpoint lies inside a hole");
    }
  }
  struct Crossing {
    double t_in, t_out;
    const ClosedDisk* hole;
  };
  std::vector<Crossing> crossings;
  const Cplx d = b - a;
  const double dd = std::norm(d);
  if (dd > 0.0) {
    for (const auto& h : holes) {
      // |a + t d - c|^2 = r^2
      const Cplx w = a - h.center;
      const double bq = 2.0 * (w.real() * d.real() + w.imag() * d.imag());
      const double cq = std::norm(w) - h.radius * h.radius;
      const double disc = bq * bq - 4.0 * dd * cq;
      if (disc <= 0.0) continue;
      const double sq = std::sqrt(disc);
      const double t1 = (-bq - sq) / (2.0 * dd), t2 = (-bq + sq) / (2.0 * dd);
      if (t2 <= 0.0 || t1 >= 1.0) continue;
      crossings.push_back({std::max(t1, 0.0), std::min(t2, 1.0), &h});
    }
  }
  std::sort(crossings.begin(), crossings.end(), [](const Crossing& x, const Crossing& y) { return x.t_in < y.t_in; });
  Path path(a);
  for (const auto& c : crossings) {
    const Cplx entry = a + c.t_in * d, exit = a + c.t_out * d;
    path.line_to(entry);
    double sweep = std::arg((exit - c.hole->center) / (entry - c.hole->center));
    if (sweep == 0.0) sweep = kPi;  // diametral crossing: either side works
    path.arc_by(c.hole->center, sweep);
  }
  path.line_to(b);
  return path;
}

// ---------------------------------------------------------------------------
// Quadrature

Cplx QuadratureRule::integrate(const HoloFn& f) const {
  Cplx sum = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const Cplx v = f(nodes[k]);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw Error(ErrorKind::NonFiniteValue, "integrand not finite at a quadrature node");
    }
    sum += weights[k] * v;
  }
  return sum;
}

Cplx QuadratureRule::integrate(std::span<const Cplx> values) const {
  Cplx sum = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) sum += weights[k] * values[k];
  return sum;
}

QuadratureRule contour_quadrature(const Contour& contour) {
  QuadratureRule rule;
  const int n = contour.node_count;
  rule.nodes.reserve(n);
  rule.weights.reserve(n);
  const double h = 2.0 * kPi / n;
  for (int k = 0; k < n; ++k) {
    const Cplx z = contour.node(k);
    rule.nodes.push_back(z);
    rule.weights.push_back(Cplx(0.0, contour.orientation * h) * (z - contour.center));
  }
  return rule;
}

QuadratureRule path_quadrature(const Path& path, double max_panel_length) {
  const auto& gl = gauss_legendre();
  QuadratureRule rule;
  for (const auto& piece : path.pieces()) {
    const int panels = std::max(1, static_cast<int>(std::ceil(piece_length(piece) / max_panel_length)));
    for (int p = 0; p < panels; ++p) {
      const double t0 = static_cast<double>(p) / panels, t1 = static_cast<double>(p + 1) / panels;
      for (int i = 0; i < 16; ++i) {
        const double t = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * gl.x[i];
        rule.nodes.push_back(piece_point(piece, t));
        rule.weights.push_back(0.5 * (t1 - t0) * gl.w[i] * piece_velocity(piece, t));
      }
    }
  }
  return rule;
}

// ---------------------------------------------------------------------------
// Distances, integrals, winding

double chordal_distance(ExtComplex a, ExtComplex b) {
  if (a.is_infinite() && b.is_infinite()) return 0.0;
  if (a.is_infinite()) std::swap(a, b);
  const double sa = std::hypot(1.0, std::abs(a.value()));
  if (b.is_infinite()) return 1.0 / sa;
  const double sb = std::hypot(1.0, std::abs(b.value()));
  return std::min(1.0, std::abs(a.value() - b.value()) / sa / sb);
}

double sup_distance(const MeroFn& f, const MeroFn& g, const SampleSet& samples) {
  double best = 0.0;
  for (Cplx z : samples.points) {
    const ExtComplex fv = f(z), gv = g(z);
    if (!fv.is_finite() || !gv.is_finite()) {
      throw Error(ErrorKind::NonFiniteValue, "evaluator not finite at a sample point");
    }
    best = std::max(best, std::abs(fv.value() - gv.value()));
  }
  return best;
}

double chordal_sup_distance(const MeroFn& f, const MeroFn& g, const SampleSet& samples) {
  double best = 0.0;
  for (Cplx z : samples.points) best = std::max(best, chordal_distance(f(z), g(z)));
  return best;
}

Cplx contour_integral(const HoloFn& f, const Contour& contour) { return contour_quadrature(contour).integrate(f); }

Cplx path_integral(const HoloFn& f, const Path& path, double max_panel_length) {
  return path_quadrature(path, max_panel_length).integrate(f);
}

int winding_number(const Contour& contour, Cplx p) {
  if (std::abs(std::abs(p - contour.center) - contour.radius) <= 1e-12 * std::max(1.0, contour.radius)) {
    throw Error(ErrorKind::PointOnContour, "point lies on the contour");
  }
  const Cplx integral = contour_integral([p](Cplx z) { return 1.0 / (z - p); }, contour);
  const Cplx w = integral / Cplx(0.0, 2.0 * kPi);
  const double rounded = std::round(w.real());
  if (std::abs(w - rounded) >= 0.1) {
    throw Error(ErrorKind::QuadratureInconclusive, "winding quadrature residual too large; raise node_count");
  }
  return static_cast<int>(rounded);
}

std::vector<Cplx> unwrapped_log(std::span<const Cplx> values, Cplx start_log) {
  std::vector<Cplx> out;
  out.reserve(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    const Cplx v = values[k];
    if (v == 0.0 || !std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw Error(ErrorKind::NonFiniteValue, "log of zero or non-finite value");
    }
    Cplx l = std::log(v);
    const double ref = k == 0 ? start_log.imag() : out.back().imag();
    const double turns = std::round((ref - l.imag()) / (2.0 * kPi));
    l += Cplx(0.0, 2.0 * kPi * turns);
    if (k > 0 && std::abs(l.imag() - ref) >= kMaxPhaseJump) {
      throw Error(ErrorKind::BranchAmbiguity, "adjacent phase jump too large to unwrap");
    }
    out.push_back(l);
  }
  return out;
}

int argument_winding(const HoloFn& f, const Contour& contour) {
  for (int n = std::max(contour.node_count, 64); n <= (1 << 18); n *= 2) {
    std::vector<Cplx> values(n + 1);
    for (int k = 0; k <= n; ++k) {
      values[k] = f(contour.center + std::polar(contour.radius, contour.orientation * 2.0 * kPi * k / n));
      if (values[k] == 0.0) throw Error(ErrorKind::PointOnContour, "function vanishes on the contour");
    }
    try {
      const auto logs = unwrapped_log(values, std::log(values[0]));
      return static_cast<int>(std::lround((logs.back().imag() - logs.front().imag()) / (2.0 * kPi)));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BranchAmbiguity) throw;
    }
  }
  throw Error(ErrorKind::QuadratureInconclusive, "argument winding unresolved at maximum sampling");
}

}  // namespace univalent
