#pragma once

// Geometric primitives shared by every other module: extended complex values,
// compact regions with circular boundaries, contours, sample sets, domains,
// piecewise paths and the quadrature rules built on them.

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace univalent {

using Cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// A point of the Riemann sphere: a finite complex number or infinity.
class ExtComplex {
 public:
  ExtComplex() = default;
  ExtComplex(Cplx value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  ExtComplex(double value) : value_(value) {}  // NOLINT(google-explicit-constructor)

  static ExtComplex infinity() {
    ExtComplex e;
    e.infinite_ = true;
    return e;
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_ && std::isfinite(value_.real()) && std::isfinite(value_.imag()); }
  /// Finite value; meaningless when is_infinite().
  Cplx value() const { return value_; }

  friend bool operator==(const ExtComplex& a, const ExtComplex& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

 private:
  Cplx value_{0.0, 0.0};
  bool infinite_ = false;
};

using HoloFn = std::function<Cplx(Cplx)>;
using MeroFn = std::function<ExtComplex(Cplx)>;

struct ClosedDisk {
  Cplx center;
  double radius = 1.0;

  bool contains(Cplx z, double tol = 0.0) const { return std::abs(z - center) <= radius + tol; }
};

struct Annulus {
  Cplx center;
  double r_inner = 0.5;
  double r_outer = 1.0;
};

struct DiskUnion {
  std::vector<ClosedDisk> disks;
};

/// Closed disk with open disks removed; the holes' closures lie inside the outer disk.
struct HoledDisk {
  ClosedDisk outer;
  std::vector<ClosedDisk> holes;
};

/// Counter-clockwise (+1) or clockwise (-1) circle with equally spaced trapezoidal nodes.
struct Contour {
  Cplx center;
  double radius = 1.0;
  int orientation = 1;
  int node_count = 64;

  Contour() = default;
  Contour(Cplx c, double r, int orient = 1, int nodes = 64);

  Cplx node(int k) const;
};

/// max(64, 8 d + 16): enough trapezoidal nodes to integrate Laurent data of degree d exactly.
int default_node_count(int degree);

struct BoundaryCircle {
  Contour contour;
  int component = 0;
  bool is_hole = false;
};

class CompactRegion {
 public:
  using Shape = std::variant<ClosedDisk, Annulus, DiskUnion, HoledDisk>;

  static CompactRegion disk(Cplx center, double radius);
  static CompactRegion annulus(Cplx center, double r_inner, double r_outer);
  static CompactRegion disk_union(std::vector<ClosedDisk> disks);
  static CompactRegion holed_disk(ClosedDisk outer, std::vector<ClosedDisk> holes);

  const Shape& shape() const { return shape_; }

  bool contains(Cplx z, double tol = 0.0) const;
  /// Distance from z to the nearest boundary circle.
  double boundary_distance(Cplx z) const;
  /// Outer circles are positively oriented, hole circles negatively.
  std::vector<BoundaryCircle> boundary(int node_count = 64) const;
  /// Bounded components of the complement, as open disks.
  std::vector<ClosedDisk> holes() const;
  /// Disks whose union covers the region (the filled-in outer boundaries).
  std::vector<ClosedDisk> hulls() const;
  int component_count() const;
  bool complement_connected() const { return holes().empty(); }
  /// Center of the first outer boundary circle; the anchor for grids and base points.
  Cplx anchor() const;
  /// Mean of the outer centers.
  Cplx centroid() const;
  double diameter() const;
  /// Radius of the smallest disk about centroid() that contains the region.
  double extent() const;

 private:
  explicit CompactRegion(Shape shape) : shape_(std::move(shape)) {}
  Shape shape_;
};

enum class SampleRole { Boundary, InteriorGrid };

struct SampleSet {
  std::vector<Cplx> points;
  SampleRole role = SampleRole::Boundary;
  double spacing = 0.0;
};

/// n equally spaced points per boundary circle, starting at angle 2 pi phase / n.
SampleSet boundary_samples(const CompactRegion& region, int n_per_component, double phase = 0.0);
/// 2n points per circle at half-step offsets: disjoint from boundary_samples(region, n).
SampleSet validation_samples(const CompactRegion& region, int n_per_component);
/// Lattice anchor + spacing (j + i k) clipped to the region.
SampleSet interior_grid(const CompactRegion& region, double spacing);

struct WholePlane {};
struct PuncturedPlane {
  std::vector<Cplx> punctures;
};
struct UnitDisk {};
/// A simply connected domain known to contain the marker disk.
struct SimplyConnected {
  ClosedDisk marker;
};

class DomainSpec {
 public:
  using Variant = std::variant<WholePlane, PuncturedPlane, UnitDisk, SimplyConnected>;

  static DomainSpec whole_plane();
  static DomainSpec punctured_plane(std::vector<Cplx> punctures);
  static DomainSpec unit_disk();
  static DomainSpec simply_connected(ClosedDisk marker);

  const Variant& variant() const { return variant_; }
  bool contains(Cplx z) const;
  std::span<const Cplx> punctures() const;
  bool is_simply_connected() const;
  /// Throws InvalidGeometry if a puncture meets the region or the region leaves the domain.
  void check_compatible(const CompactRegion& region) const;

 private:
  explicit DomainSpec(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

struct Segment {
  Cplx from;
  Cplx to;
};

/// Circular arc about `center`; the sweep theta_to - theta_from is signed.
struct Arc {
  Cplx center;
  double radius = 1.0;
  double theta_from = 0.0;
  double theta_to = 0.0;
};

using PathPiece = std::variant<Segment, Arc>;

class Path {
 public:
  Path() = default;
  explicit Path(Cplx start) : start_(start), end_(start) {}

  static Path segment(Cplx a, Cplx b);
  static Path polyline(std::span<const Cplx> vertices);

  Path& line_to(Cplx z);
  /// Arc about `center` from the current end point, sweeping by `sweep` radians.
  Path& arc_by(Cplx center, double sweep);
  Path& append(const Path& other);

  Cplx start() const { return start_; }
  Cplx end() const { return end_; }
  double length() const;
  const std::vector<PathPiece>& pieces() const { return pieces_; }
  /// Points along the path, at most max_spacing apart, including both ends.
  std::vector<Cplx> sample(double max_spacing) const;

 private:
  Cplx start_;
  Cplx end_;
  std::vector<PathPiece> pieces_;
};

/// Straight segment from a to b, detouring along the shorter arc of every hole it crosses.
Path route_around(Cplx a, Cplx b, std::span<const ClosedDisk> holes);

/// Nodes and weights (including dz) of an integration rule along a curve.
struct QuadratureRule {
  std::vector<Cplx> nodes;
  std::vector<Cplx> weights;

  Cplx integrate(const HoloFn& f) const;
  Cplx integrate(std::span<const Cplx> values) const;
};

QuadratureRule contour_quadrature(const Contour& contour);
/// Composite 16-point Gauss-Legendre on panels no longer than max_panel_length.
QuadratureRule path_quadrature(const Path& path, double max_panel_length = 0.125);

double chordal_distance(ExtComplex a, ExtComplex b);
double sup_distance(const MeroFn& f, const MeroFn& g, const SampleSet& samples);
double chordal_sup_distance(const MeroFn& f, const MeroFn& g, const SampleSet& samples);
Cplx contour_integral(const HoloFn& f, const Contour& contour);
Cplx path_integral(const HoloFn& f, const Path& path, double max_panel_length = 0.125);
int winding_number(const Contour& contour, Cplx p);
/// Winding of f along the contour around 0, by phase unwrapping with node doubling.
int argument_winding(const HoloFn& f, const Contour& contour);
/// Continuous branch of log f along consecutive points; throws BranchAmbiguity on jumps >= pi/2.
std::vector<Cplx> unwrapped_log(std::span<const Cplx> values, Cplx start_log);

}  // namespace univalent
