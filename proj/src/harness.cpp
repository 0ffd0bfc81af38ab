#include "univalent/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <set>

#include "univalent/metrics.hpp"
#include "univalent/moebius.hpp"
#include "univalent/runge.hpp"
#include "univalent/schwarzian_ode.hpp"
#include "univalent/univalence.hpp"
#include "univalent/universality.hpp"

namespace univalent {
namespace {

using nlohmann::json;

const double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void bad(const std::string& message) { throw Error(ErrorKind::InvalidConfig, message); }

// Shortest text that parses back to v.
std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_complex(Cplx z) { return format_double(z.real()) + "," + format_double(z.imag()); }

json complex_json(Cplx z) { return json::array({z.real(), z.imag()}); }

json ext_json(ExtComplex z) { return z.is_infinite() ? json("infinity") : complex_json(z.value()); }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json polynomial_json(const Polynomial& p) {
  json out = json::array();
  for (Cplx c : p.coefficients()) out.push_back(complex_json(c));
  return out;
}

json rational_json(const RationalFunction& f) {
  return {{"numerator", polynomial_json(f.numerator())}, {"denominator", polynomial_json(f.denominator())}};
}

std::string csv_grid(const std::vector<Cplx>& points, const std::vector<double>& values) {
  std::string out = "x,y,value\n";
  char buf[128];
  for (std::size_t k = 0; k < points.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", points[k].real(), points[k].imag(), values[k]);
    out += buf;
  }
  return out;
}

// Reads typed parameters and records the effective value of every key it touches.
class Params {
 public:
  explicit Params(const Config& in) : in_(in) {}

  double real(const std::string& key, double fallback, double lo, double hi) {
    double v = in_.get_double(key, fallback, lo, hi);
    note(key, format_double(v));
    return v;
  }
  int integer(const std::string& key, int fallback, int lo, int hi) {
    int v = in_.get_int(key, fallback, lo, hi);
    note(key, std::to_string(v));
    return v;
  }
  bool flag(const std::string& key, bool fallback) {
    bool v = in_.get_bool(key, fallback);
    note(key, v ? "true" : "false");
    return v;
  }
  Cplx complex(const std::string& key, Cplx fallback) {
    Cplx v = in_.get_complex(key, fallback);
    note(key, format_complex(v));
    return v;
  }
  std::string text(const std::string& key, const std::string& fallback) {
    std::string v = in_.get_string(key, fallback);
    note(key, v);
    return v;
  }
  std::string choice(const std::string& key, const std::string& fallback, const std::set<std::string>& allowed) {
    std::string v = text(key, fallback);
    if (!allowed.count(v)) bad("unknown " + key + " '" + v + "'");
    return v;
  }
  bool present(const std::string& key) const { return in_.has(key); }

  RationalFunction function(const std::string& key, const std::string& fallback) {
    return parse_function(text(key, fallback));
  }
  std::vector<RationalFunction> functions(const std::string& key, const std::string& fallback) {
    std::vector<RationalFunction> out;
    for (const auto& spec : split(text(key, fallback), '|')) out.push_back(parse_function(spec));
    return out;
  }

  struct RegionDefaults {
    std::string kind = "disk";
    Cplx center = 0.0;
    double radius = 1.0;
    double r_inner = 0.5;
    double r_outer = 2.0;
  };

  CompactRegion region(const RegionDefaults& d) {
    std::string kind = choice("region.kind", d.kind, {"disk", "annulus", "holed-disk", "disk-union"});
    try {
      if (kind == "disk-union") return CompactRegion::disk_union(parse_disks(text("region.disks", "0,0,1")));
      Cplx center = complex("region.center", d.center);
      if (kind == "disk") return CompactRegion::disk(center, real("region.radius", d.radius, 1e-9, 1e9));
      if (kind == "annulus") {
        double r_in = real("region.r_inner", d.r_inner, 1e-9, 1e9);
        return CompactRegion::annulus(center, r_in, real("region.r_outer", d.r_outer, 1e-9, 1e9));
      }
      ClosedDisk outer{center, real("region.radius", d.radius, 1e-9, 1e9)};
      return CompactRegion::holed_disk(outer, parse_disks(text("region.holes", "0,0,0.5")));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::InvalidConfig) throw;
      bad(std::string("region: ") + e.what());
    }
  }

  ClosedDisk disk(const RegionDefaults& d) {
    CompactRegion r = region(d);
    const auto* disk = std::get_if<ClosedDisk>(&r.shape());
    if (!disk) bad("region.kind must be disk for this experiment");
    return *disk;
  }

  DomainSpec domain(const std::string& fallback) {
    std::string kind = choice("domain.kind", fallback, {"whole-plane", "punctured-plane", "unit-disk"});
    if (kind == "whole-plane") return DomainSpec::whole_plane();
    if (kind == "unit-disk") return DomainSpec::unit_disk();
    std::vector<Cplx> punctures;
    for (const auto& p : split(text("domain.punctures", "0,0"), '|')) punctures.push_back(parse_complex(p));
    return DomainSpec::punctured_plane(punctures);
  }

  SelfMapSequence sequence(const std::string& fallback_kind, Cplx fallback_stride) {
    std::string kind = choice("seq.kind", fallback_kind, {"translations", "rotations", "automorphisms"});
    if (kind == "translations") {
      Cplx stride = complex("seq.stride", fallback_stride);
      if (stride == Cplx(0.0)) bad("seq.stride must be nonzero");
      return SelfMapSequence::translations(stride);
    }
    if (kind == "rotations") {
      double step = real("seq.step", 0.1, -1e3, 1e3);
      return SelfMapSequence::rotations(step, integer("seq.count", 100, 1, 100000));
    }
    std::vector<Cplx> a;
    std::vector<double> theta;
    if (present("seq.a")) {
      for (const auto& s : split(text("seq.a", ""), '|')) a.push_back(parse_complex(s));
      if (present("seq.theta")) {
        for (const auto& s : split(text("seq.theta", ""), '|')) theta.push_back(parse_complex(s).real());
      }
      theta.resize(a.size(), 0.0);
    } else {
      int count = integer("seq.count", 20, 1, 50);
      for (int n = 1; n <= count; ++n) {
        a.emplace_back(1.0 - std::ldexp(1.0, -n));
        theta.push_back(0.0);
      }
    }
    for (Cplx z : a) {
      if (!(std::abs(z) < 1.0)) bad("seq.a entries must lie in the unit disk");
    }
    return SelfMapSequence::disk_automorphisms(a, theta);
  }

  /// Rejects keys that were never read.
  void finish() {
    std::set<std::string> known;
    for (const auto& [key, value] : used_.entries()) known.insert(key);
    known.insert("experiment");
    in_.require_known(known);
  }

  const Config& effective() const { return used_; }

 private:
  void note(const std::string& key, const std::string& value) { used_.set(key, value); }
  const Config& in_;
  Config used_;
};

struct Outcome {
  json details = json::object();
  double sup_error = kNaN;
  double residual_norm = kNaN;
  double iterations = kNaN;
  double degree_used = kNaN;
  double curvature_max_dev = kNaN;
  std::vector<GridFile> grids;
  std::vector<std::string> failed_checks;

  void check(bool ok, const std::string& what) {
    details["checks"][what] = ok;
    if (!ok) failed_checks.push_back(what);
  }
  void take(const ApproximationReport& r) {
    sup_error = r.certified_sup_error;
    residual_norm = r.final_residual_norm;
    iterations = r.newton_iterations;
    degree_used = r.degree_used;
  }
};

json approximation_json(const ApproximationReport& r) {
  return {{"degree_used", r.degree_used},
          {"certified_sup_error", r.certified_sup_error},
          {"newton_iterations", r.newton_iterations},
          {"final_residual_norm", r.final_residual_norm},
          {"samples_used", r.samples_used}};
}

json orbit_json(const OrbitReport& r) {
  return {{"stages", r.stages},
          {"target_errors", r.target_errors},
          {"derivative_zero_counts", r.derivative_zero_counts},
          {"univalence_certified", r.univalence_certified},
          {"glue", approximation_json(r.glue)}};
}

RationalFunction compose(const RationalFunction& f, const RationalFunction& g) {
  auto horner = [&](const Polynomial& p) {
    RationalFunction r = RationalFunction::constant(0.0);
    for (int k = p.degree(); k >= 0; --k) r = r * g + RationalFunction::constant(p[k]);
    return r;
  };
  return horner(f.numerator()) / horner(f.denominator());
}

double coefficient_gap(const Polynomial& a, const Polynomial& b) {
  double gap = 0.0;
  for (int k = 0; k <= std::max(a.degree(), b.degree()); ++k) gap = std::max(gap, std::abs(a[k] - b[k]));
  return gap;
}

// ---------------------------------------------------------------- schwarzian

Outcome run_schwarzian(Params& p, std::mt19937_64& rng) {
  RationalFunction f = p.function("schwarzian.function", "rational:-1/0;0;1");
  std::string expected_spec = p.text("schwarzian.expected", "rational:-1.5/0;0;1");
  int moebius_count = p.integer("schwarzian.moebius_count", 100, 0, 100000);
  int points = p.integer("schwarzian.points", 50, 1, 100000);
  double tol = p.real("schwarzian.tol", 1e-9, 0.0, 1.0);
  p.finish();

  Outcome out;
  RationalFunction s = schwarzian(f);
  out.details["schwarzian"] = rational_json(s);

  if (expected_spec != "none") {
    RationalFunction expected = parse_function(expected_spec);
    double gap = std::max(coefficient_gap(s.numerator(), expected.numerator()),
                          coefficient_gap(s.denominator(), expected.denominator()));
    out.residual_norm = gap;
    out.details["expected_coefficient_gap"] = gap;
    out.check(gap <= 1e-12, "matches_expected");
  }

  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto random_cplx = [&] { return Cplx(unit(rng), unit(rng)); };
  int nonzero = 0;
  for (int k = 0; k < moebius_count; ++k) {
    MoebiusMap t;
    do {
      t = MoebiusMap(random_cplx(), random_cplx(), random_cplx(), random_cplx());
    } while (std::abs(t.determinant()) < 0.1);
    if (!schwarzian(t.as_rational()).numerator().is_zero()) ++nonzero;
  }
  out.details["moebius_tested"] = moebius_count;
  out.details["moebius_nonzero"] = nonzero;
  out.check(nonzero == 0, "moebius_vanishes");

  // S(f o g) = (S_f o g) g'^2 + S_g with g a random quadratic.
  RationalFunction g(Polynomial{0.3 * random_cplx(), 1.0, 0.3 * random_cplx()});
  RationalFunction sg = schwarzian(g);
  RationalFunction dg = differentiate(g);
  RationalFunction sfg = schwarzian(compose(f, g));
  double worst = 0.0;
  int used = 0;
  for (int attempts = 0; used < points && attempts < 100 * points; ++attempts) {
    Cplx z = random_cplx();
    if (std::abs(z) > 1.0) continue;
    ExtComplex lhs = sfg(z);
    ExtComplex gz = g(z);
    if (!lhs.is_finite() || !gz.is_finite()) continue;
    ExtComplex sf_g = s(gz.value());
    ExtComplex sgz = sg(z);
    ExtComplex dgz = dg(z);
    if (!sf_g.is_finite() || !sgz.is_finite() || !dgz.is_finite() || std::abs(lhs.value()) > 1e6) continue;
    Cplx rhs = sf_g.value() * dgz.value() * dgz.value() + sgz.value();
    worst = std::max(worst, std::abs(lhs.value() - rhs) / std::max(1.0, std::abs(lhs.value())));
    ++used;
  }
  out.sup_error = worst;
  out.details["chain_rule_points"] = used;
  out.details["chain_rule_max_error"] = worst;
  out.check(used == points && worst <= tol, "chain_rule");
  return out;
}

// ---------------------------------------------------------------- runge

Outcome run_runge(Params& p) {
  RationalFunction f = p.function("runge.function", "poly:0;0.1;0.5");
  CompactRegion region = p.region({.kind = "annulus"});
  DomainSpec omega = p.domain("punctured-plane");
  double eps = p.real("runge.epsilon", 1e-6, 1e-14, 1.0);
  int cap = p.integer("runge.degree_cap", kDefaultDegreeCap, 8, 1024);
  double spacing = p.real("runge.grid_spacing", 0.1, 1e-3, 10.0);
  double loop_tol = p.real("runge.loop_tol", 1e-9, 0.0, 1.0);
  p.finish();

  Outcome out;
  auto result = lu_holomorphic_runge(f, region, omega, eps, cap);
  out.take(result.report);
  out.details["approximation"] = approximation_json(result.report);

  double validation = 0.0;
  for (Cplx z : validation_samples(region, 64).points) {
    validation = std::max(validation, std::abs(result.map(z) - f(z).value()));
  }
  out.details["validation_error"] = validation;
  out.check(result.report.certified_sup_error <= eps && validation <= eps, "sup_error");

  // Zeros of G' inside each boundary circle, net of the branch factor.
  const ZeroFreeApproximant& h = result.map.derivative_approximant();
  json counts = json::array();
  int total = 0;
  for (const auto& bc : region.boundary(256)) {
    Contour ccw(bc.contour.center, bc.contour.radius, 1, bc.contour.node_count);
    int winding = argument_winding([&](Cplx z) { return h(z); }, ccw);
    int branch = 0;
    for (const auto& b : h.branch_points()) {
      if (std::abs(b.point - ccw.center) < ccw.radius) branch += b.exponent;
    }
    counts.push_back(winding - branch);
    total += std::abs(winding - branch);
  }
  out.details["derivative_zero_counts"] = counts;
  out.check(total == 0, "zero_free_derivative");

  double loop = 0.0;
  for (const ClosedDisk& hole : region.holes()) {
    Cplx start = hole.center + hole.radius;
    loop = std::max(loop, std::abs(result.map.integrate(Path(start).arc_by(hole.center, 2.0 * kPi))));
  }
  out.details["loop_integral_max"] = loop;
  out.check(loop <= loop_tol, "path_independence");

  auto grid = interior_grid(region, spacing).points;
  std::vector<double> err;
  for (Cplx z : grid) err.push_back(std::abs(result.map(z) - f(z).value()));
  out.grids.push_back({"runge_error.csv", csv_grid(grid, err)});
  return out;
}

// ---------------------------------------------------------------- ode-reconstruct

Outcome run_ode(Params& p) {
  std::string mode = p.choice("ode.mode", "runge", {"runge", "frame"});
  Outcome out;
  if (mode == "runge") {
    RationalFunction f = p.function("ode.function", "rational:1;0;1/0;1");
    CompactRegion region = p.region({.kind = "disk", .radius = 0.5});
    double eps = p.real("ode.epsilon", 1e-6, 1e-14, 1.0);
    int cap = p.integer("ode.degree_cap", kDefaultDegreeCap, 8, 1024);
    double spacing = p.real("ode.grid_spacing", 0.05, 1e-3, 10.0);
    p.finish();

    auto result = meromorphic_lu_runge(f, region, eps, cap);
    out.take(result.report);
    out.details["approximation"] = approximation_json(result.report);
    out.check(result.report.certified_sup_error <= eps, "chordal_error");
    auto grid = interior_grid(region, spacing).points;
    std::vector<double> err;
    for (Cplx z : grid) err.push_back(chordal_distance(result.approximant(z), f(z)));
    out.grids.push_back({"ode_chordal_error.csv", csv_grid(grid, err)});
    return out;
  }

  Polynomial coefficient = Polynomial::parse(p.text("ode.p", "0"));
  ReconstructionFrame frame;
  frame.z0 = p.complex("ode.z0", 0.0);
  frame.u1 = {p.complex("ode.u1_w", 0.0), p.complex("ode.u1_dw", 1.0)};
  frame.u2 = {p.complex("ode.u2_w", 1.0), p.complex("ode.u2_dw", 0.0)};
  double tol = p.real("ode.tol", kDefaultOdeTolerance, 1e-13, 1e-6);
  Cplx point = p.complex("ode.point", 0.7);
  double drift_tol = p.real("ode.drift_tol", 1e-8, 0.0, 1.0);
  bool has_expected = p.present("ode.expected");
  Cplx expected = has_expected ? p.complex("ode.expected", 0.0) : Cplx(0.0);
  double value_tol = p.real("ode.value_tol", 1e-8, 0.0, 1.0);
  p.finish();

  SchwarzianODE ode(coefficient);
  frame.validate();
  ReconstructedFunction g = reconstruct_from_schwarzian(ode, frame, tol);
  ExtComplex value = g(point);
  out.details["value"] = ext_json(value);
  std::vector<Cplx> path = g.path_to(point);
  PathSolution s1 = solve_ivp_along(ode, path, frame.u1, tol);
  PathSolution s2 = solve_ivp_along(ode, path, frame.u2, tol);
  double drift = wronskian_drift(s1, s2);
  out.residual_norm = drift;
  out.iterations = static_cast<double>(s1.nodes.size());
  out.details["wronskian_drift"] = drift;
  out.check(drift <= drift_tol, "wronskian_drift");
  if (has_expected) {
    out.sup_error = value.is_finite() ? std::abs(value.value() - expected) : kNaN;
    out.check(value.is_finite() && out.sup_error <= value_tol, "value");
  }
  return out;
}

// ---------------------------------------------------------------- curvature

Outcome run_curvature(Params& p) {
  CanonicalGeometry geom =
      parse_geometry(p.choice("metric.geometry", "hyperbolic", {"hyperbolic", "euclidean", "spherical"}));
  ClosedDisk disk = p.disk({.kind = "disk", .radius = 0.8});
  double h = p.real("curvature.h", 0.005, 1e-4, 0.1);
  bool richardson = p.flag("curvature.richardson", false);
  double scale = p.real("metric.scale", 1.0, 1e-6, 1e6);
  RationalFunction f = p.function("metric.map", "identity");
  double tol = p.real("curvature.tol", 1e-3, 0.0, 10.0);
  p.finish();

  Outcome out;
  MetricDensity lambda = scale_density(liouville_construct(f, geom, disk, h), scale);
  double c = geometry_curvature(geom) / (scale * scale);
  CurvatureReport report = curvature(lambda, c, richardson);
  out.curvature_max_dev = report.max_abs_deviation_from_c;
  out.details["expected_curvature"] = c;
  out.details["cells_evaluated"] = report.cells_evaluated;
  out.details["grid"] = {{"origin", complex_json(report.grid.origin)},
                         {"spacing", report.grid.spacing},
                         {"nx", report.grid.nx},
                         {"ny", report.grid.ny}};
  out.check(report.max_abs_deviation_from_c <= tol, "curvature_deviation");

  std::vector<Cplx> pts;
  std::vector<double> vals;
  for (int j = 0; j < report.grid.ny; ++j) {
    for (int i = 0; i < report.grid.nx; ++i) {
      if (std::isnan(report.at(i, j))) continue;
      pts.push_back(report.grid.point(i, j));
      vals.push_back(report.at(i, j));
    }
  }
  out.grids.push_back({"curvature.csv", csv_grid(pts, vals)});
  return out;
}

// ---------------------------------------------------------------- glue

DensityFn named_density(const std::string& name) {
  if (name == "exp-real") return [](Cplx z) { return std::exp(z.real()); };
  if (name == "one" || name == "euclidean") return [](Cplx) { return 1.0; };
  if (name == "hyperbolic") return [](Cplx z) { return canonical_density(CanonicalGeometry::Hyperbolic, z); };
  if (name == "spherical") return [](Cplx z) { return canonical_density(CanonicalGeometry::Spherical, z); };
  bad("unknown density '" + name + "'");
}

Outcome run_glue(Params& p) {
  std::string mode = p.choice("glue.mode", "harmonic", {"harmonic", "holomorphic"});
  Outcome out;
  if (mode == "harmonic") {
    const std::set<std::string> densities{"exp-real", "one", "euclidean", "hyperbolic", "spherical"};
    DensityFn lambda = named_density(p.choice("glue.lambda", "exp-real", densities));
    DensityFn mu = named_density(p.choice("glue.mu", "one", densities));
    double stride = p.real("glue.stride", 8.0, -1e6, 1e6);
    ClosedDisk k = p.disk({.kind = "disk"});
    double eps = p.real("glue.epsilon", 1e-3, 1e-12, 1.0);
    int cap = p.integer("glue.degree_cap", 40, 8, 256);
    p.finish();

    HarmonicGlueResult r = harmonic_glue(lambda, mu, stride, k, eps, cap);
    out.sup_error = std::max(r.error_on_k, r.error_on_image);
    out.degree_used = r.degree_used;
    out.details["error_on_k"] = r.error_on_k;
    out.details["error_on_image"] = r.error_on_image;
    out.details["condition_number"] = r.condition_number;
    out.check(r.error_on_k <= eps && r.error_on_image <= eps, "both_bounds");
    return out;
  }

  std::vector<GluePiece> pieces;
  for (const auto& entry : split(p.text("glue.pieces", "0,0,1:exp-taylor(12)|8,0,1:identity"), '|')) {
    auto colon = entry.find(':');
    if (colon == std::string::npos) bad("glue.pieces entry must be 'cx,cy,r:<function>'");
    auto disks = parse_disks(entry.substr(0, colon));
    ClosedDisk d = disks.front();
    pieces.push_back({d, parse_function(entry.substr(colon + 1)), MoebiusMap::translation(-d.center)});
  }
  double eps = p.real("glue.epsilon", 1e-3, 1e-12, 1.0);
  int cap = p.integer("glue.degree_cap", kDefaultDegreeCap, 8, 1024);
  p.finish();

  GlueResult r = glue_targets(pieces, DomainSpec::whole_plane(), eps, cap);
  out.take(r.report);
  out.sup_error = *std::max_element(r.piece_errors.begin(), r.piece_errors.end());
  out.details["piece_errors"] = r.piece_errors;
  out.details["approximation"] = approximation_json(r.report);
  out.check(out.sup_error <= eps, "piece_errors");
  return out;
}

// ---------------------------------------------------------------- orbit

Outcome run_orbit(Params& p) {
  auto targets = p.functions("orbit.targets", "identity|exp-taylor(12)|rational:1/1;-0.1");
  ClosedDisk k = p.disk({.kind = "disk"});
  SelfMapSequence seq = p.sequence("translations", 8.0);
  double eps = p.real("orbit.epsilon", 1e-3, 1e-12, 1.0);
  std::string metric = p.choice("orbit.metric", "none", {"none", "hyperbolic", "euclidean", "spherical"});
  std::vector<RationalFunction> metric_targets;
  double metric_tol = 0.0;
  if (metric != "none") {
    metric_targets = p.functions("orbit.metric_targets", "identity|exp-taylor(12)");
    metric_tol = p.real("orbit.metric_tol", 2e-3, 0.0, 10.0);
  }
  p.finish();

  Outcome out;
  FiniteUniversal fu = build_finite_universal(targets, k, seq, eps);
  const OrbitReport& r = fu.report;
  out.take(r.glue);
  out.sup_error = *std::max_element(r.target_errors.begin(), r.target_errors.end());
  out.details["orbit"] = orbit_json(r);
  out.check(out.sup_error <= eps, "target_errors");
  out.check(r.univalence_certified, "critical_point_free");

  if (metric != "none") {
    MetricOrbitReport m = metric_orbit_experiment(metric_targets, parse_geometry(metric), k, seq, eps);
    double worst = *std::max_element(m.density_errors.begin(), m.density_errors.end());
    out.details["metric_orbit"] = {{"orbit", orbit_json(m.orbit)}, {"density_errors", m.density_errors}};
    out.check(worst <= metric_tol, "density_errors");
  }
  return out;
}

// ---------------------------------------------------------------- diagnose-seq

Outcome run_diagnose(Params& p) {
  SelfMapSequence seq = p.sequence("translations", 1.0);
  std::vector<CompactRegion> regions;
  for (const ClosedDisk& d : parse_disks(p.text("diag.regions", "0,0,1"))) {
    regions.push_back(CompactRegion::disk(d.center, d.radius));
  }
  int max_n = p.integer("diag.max_n", 10, 1, 100000);
  p.finish();

  Outcome out;
  SequenceDiagnostics diag = diagnose_sequence(seq, regions, max_n);
  json list = json::array();
  for (const auto& r : diag.regions) {
    int injective = 0;
    for (bool b : r.injective) injective += b ? 1 : 0;
    const auto& disk = std::get<ClosedDisk>(r.region.shape());
    list.push_back({{"center", complex_json(disk.center)},
                    {"radius", disk.radius},
                    {"runaway_index", r.runaway_index ? json(*r.runaway_index) : json(nullptr)},
                    {"injective_count", injective},
                    {"eventually_injective", r.eventually_injective}});
  }
  out.details["max_n"] = diag.max_n;
  out.details["regions"] = list;
  return out;
}

// ---------------------------------------------------------------- counterexample

Outcome run_counterexample(Params& p, std::mt19937_64& rng) {
  RationalFunction f = p.function("counter.function", "rational:-1/0;0;1");
  CompactRegion region = p.region({.kind = "annulus"});
  Cplx center = p.complex("counter.center", 0.0);
  double radius = p.real("counter.radius", 1.0, 1e-6, 1e6);
  int min_degree = p.integer("counter.min_degree", 8, 0, 400);
  int max_degree = p.integer("counter.max_degree", 50, 0, 400);
  int subtract_degree = p.integer("counter.subtract_degree", 50, 0, 400);
  double tol = p.real("counter.tol", 1e-9, 0.0, 1.0);
  if (max_degree < min_degree) bad("counter.max_degree below counter.min_degree");
  p.finish();

  Outcome out;
  RationalFunction s = schwarzian(f);
  const int nodes = default_node_count(std::max(subtract_degree, 2) + 2);
  Contour gamma(center, radius, 1, nodes);
  Cplx residue = obstruction_residue(s, gamma);

  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Cplx> c;
  for (int k = 0; k <= subtract_degree; ++k) {
    c.emplace_back(unit(rng) / std::pow(radius, k), unit(rng) / std::pow(radius, k));
  }
  Polynomial shift(c);
  Cplx shifted = obstruction_residue(s - RationalFunction(shift), gamma);
  double invariance = std::abs(shifted - residue);

  const double bound = std::abs(residue) / (2.0 * kPi * radius * radius);
  double best = std::numeric_limits<double>::infinity();
  json fits = json::array();
  CompactRegion circle = CompactRegion::disk(center, radius);
  auto target = [&](Cplx z) {
    ExtComplex v = s(z);
    if (!v.is_finite()) throw Error(ErrorKind::PoleOnContour, "Schwarzian has a pole on the contour");
    return v.value();
  };
  for (int d = min_degree; d <= max_degree; ++d) {
    BasisSpec spec{center, radius, d, {}};
    LsFit fit = fit_analytic_ls(circle, target, spec, samples_per_circle(spec.size(), 1));
    fits.push_back(fit.certified_sup_error);
    best = std::min(best, fit.certified_sup_error);
  }

  std::string refusal = "none";
  try {
    meromorphic_lu_runge(f, region, 1e-6);
  } catch (const Error& e) {
    refusal = std::string(to_string(e.kind()));
  }

  out.sup_error = best;
  out.residual_norm = invariance;
  out.details["residue"] = complex_json(residue);
  out.details["residue_after_subtraction"] = complex_json(shifted);
  out.details["lower_bound"] = bound;
  out.details["fit_sup_errors"] = fits;
  out.details["meromorphic_runge_on_region"] = refusal;
  out.check(invariance <= tol, "residue_invariance");
  out.check(best >= bound - 1e-6, "fits_respect_bound");
  return out;
}

std::uint64_t fnv1a(std::uint64_t h, std::string_view text) {
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t hash_json(std::uint64_t h, const json& j, const std::string& path) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (path.empty() && (it.key() == "wall_time_s" || it.key() == "fingerprint")) continue;
      h = hash_json(h, it.value(), path + "/" + it.key());
    }
  } else if (j.is_array()) {
    for (std::size_t k = 0; k < j.size(); ++k) h = hash_json(h, j[k], path + "/" + std::to_string(k));
  } else if (j.is_number()) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%.12f", j.get<double>());
    std::string text = buf;
    if (text.find_first_not_of("-0.") == std::string::npos) text = "0.000000000000";
    h = fnv1a(h, path);
    h = fnv1a(h, text);
  }
  return h;
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_catalog() {
  static const std::vector<ExperimentInfo> catalog{
      {"schwarzian", "Schwarzian derivative: Moebius invariance and the chain rule", "Schwarzian derivative"},
      {"runge", "locally univalent Runge approximation on a compact with holes", "antiderivative of a zero-free fit"},
      {"ode-reconstruct", "meromorphic reconstruction as a quotient of solutions of w'' + p w / 2 = 0",
       "quotient of two linearly independent solutions"},
      {"curvature", "Gauss curvature of canonical and pulled-back conformal densities", "constantly curved metrics"},
      {"glue", "harmonic or holomorphic gluing across separated disks", "gluing with small errors"},
      {"orbit", "finite-stage universal function along a self-map sequence", "universal locally univalent functions"},
      {"diagnose-seq", "run-away index and eventual injectivity of a self-map sequence", "run-away sequences"},
      {"counterexample", "residue obstruction for -1/z^2 on the annulus 1/2 <= |z| <= 2",
       "a critical point blocks approximation"},
  };
  return catalog;
}

bool is_experiment(std::string_view name) {
  for (const auto& e : experiment_catalog()) {
    if (e.name == name) return true;
  }
  return false;
}

RunRecord run_experiment(std::string_view kind, const Config& config, std::uint64_t seed) {
  if (!is_experiment(kind)) bad("unknown experiment '" + std::string(kind) + "'");
  if (config.has("experiment") && config.get_string("experiment", "") != kind) {
    bad("config is for experiment '" + config.get_string("experiment", "") + "'");
  }
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(seed);
  Params params(config);

  Outcome out;
  if (kind == "schwarzian") out = run_schwarzian(params, rng);
  else if (kind == "runge") out = run_runge(params);
  else if (kind == "ode-reconstruct") out = run_ode(params);
  else if (kind == "curvature") out = run_curvature(params);
  else if (kind == "glue") out = run_glue(params);
  else if (kind == "orbit") out = run_orbit(params);
  else if (kind == "diagnose-seq") out = run_diagnose(params);
  else out = run_counterexample(params, rng);

  Config echo = params.effective();
  echo.set("experiment", std::string(kind));

  RunRecord record;
  record.passed = out.failed_checks.empty();
  for (const auto& c : out.failed_checks) record.failure_reason += (record.failure_reason.empty() ? "" : ",") + c;

  json& r = record.report;
  r["experiment"] = std::string(kind);
  r["status"] = record.passed ? "ok" : "check-failed";
  r["sup_error"] = number_or_null(out.sup_error);
  r["residual_norm"] = number_or_null(out.residual_norm);
  r["iterations"] = number_or_null(out.iterations);
  r["degree_used"] = number_or_null(out.degree_used);
  r["curvature_max_dev"] = number_or_null(out.curvature_max_dev);
  r["details"] = out.details;
  r["config"] = echo.entries();
  r["seed"] = seed;
  r["version"] = std::string(kToolkitVersion);
  r["fingerprint"] = fingerprint(r);
  r["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  record.grids = std::move(out.grids);
  return record;
}

std::string fingerprint(const json& report) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, hash_json(14695981039346656037ull, report, ""));
  return buf;
}

Config config_from_echo(const json& report) {
  if (!report.contains("config") || !report["config"].is_object()) bad("report has no config echo");
  Config c;
  for (auto it = report["config"].begin(); it != report["config"].end(); ++it) {
    c.set(it.key(), it.value().get<std::string>());
  }
  return c;
}

int exit_code(ErrorFamily family) {
  switch (family) {
    case ErrorFamily::Validation:
      return 2;
    case ErrorFamily::Numerical:
      return 3;
    case ErrorFamily::Precondition:
      return 4;
  }
  return 3;
}

std::string reason_line(const Error& error) {
  std::string msg = error.what();
  const std::string prefix = std::string(to_string(error.kind())) + ": ";
  if (msg.starts_with(prefix)) msg.erase(0, prefix.size());
  for (char& c : msg) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return "error kind=" + std::string(to_string(error.kind())) + " family=" + std::string(to_string(error.family())) +
         " reason=" + msg;
}

json failure_report(std::string_view kind, const Error& error) {
  json r;
  r["experiment"] = std::string(kind);
  r["status"] = "error";
  r["error_kind"] = std::string(to_string(error.kind()));
  r["error_family"] = std::string(to_string(error.family()));
  r["reason"] = error.what();
  for (const char* key : {"sup_error", "residual_norm", "iterations", "degree_used", "curvature_max_dev"}) {
    r[key] = nullptr;
  }
  r["version"] = std::string(kToolkitVersion);
  r["fingerprint"] = fingerprint(r);
  return r;
}

void write_outputs(const RunRecord& record, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) bad("cannot create output directory '" + dir.string() + "'");
  std::ofstream(dir / "report.json") << record.report.dump(2) << "\n";
  for (const auto& g : record.grids) std::ofstream(dir / g.name) << g.csv;
}

}  // namespace univalent
