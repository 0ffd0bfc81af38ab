#include "univalent/runge.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "univalent/error.hpp"
#include "univalent/roots.hpp"
#include "univalent/univalence.hpp"

namespace univalent {

namespace {

constexpr double kClearance = 1e-8;
constexpr int kMaxSampleDoublings = 4;
constexpr int kInitialDegree = 8;
constexpr double kNewtonTolerance = 1e-10;
constexpr int kNewtonMaxIterations = 25;
constexpr int kMaxHalvings = 8;
constexpr double kMaxJacobianCondition = 1e8;
constexpr int kMaxTightenings = 4;
constexpr int kBridgePasses = 12;
constexpr double kBridgeFraction = 0.1;
constexpr double kBridgeSettled = 1e-6;

bool finite(Cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

Cplx eval_finite(const RationalFunction& f, Cplx z) {
  const ExtComplex v = f(z);
  if (!v.is_finite()) throw Error(ErrorKind::NonFiniteValue, "rational function has a pole at a sample");
  return v.value();
}

// Continuous logarithm of ratio on every boundary circle of the region, in boundary_samples order.
// Hole circles inherit the branch of their component's outer circle through a connecting path.
std::vector<Cplx> boundary_log(const CompactRegion& region, const HoloFn& ratio, int n) {
  const auto circles = region.boundary(16);
  const auto holes = region.holes();
  std::vector<Cplx> out(circles.size() * n);

  auto circle_points = [n](const Contour& c) {
    std::vector<Cplx> pts(n + 1);
    for (int k = 0; k <= n; ++k) pts[k] = c.center + std::polar(c.radius, 2.0 * kPi * (k % n) / n);
    return pts;
  };
  auto values_at = [&ratio](std::span<const Cplx> pts) {
    std::vector<Cplx> v(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) v[i] = ratio(pts[i]);
    return v;
  };
  auto unwrap_circle = [&](std::size_t ci, Cplx start_log) {
    const auto pts = circle_points(circles[ci].contour);
    const auto logs = unwrapped_log(values_at(pts), start_log);
    if (std::abs(logs[n] - logs[0]) > 1e-6) {
      throw Error(ErrorKind::BranchAmbiguity, "logarithm does not close around a boundary circle");
    }
    std::copy(logs.begin(), logs.begin() + n, out.begin() + ci * n);
    return logs[0];
  };

  for (std::size_t ci = 0; ci < circles.size(); ++ci) {
    if (circles[ci].is_hole) continue;
    const Contour& outer = circles[ci].contour;
    const Cplx start = outer.center + outer.radius;
    const Cplx start_log = unwrap_circle(ci, std::log(ratio(start)));
    for (std::size_t hi = 0; hi < circles.size(); ++hi) {
      if (!circles[hi].is_hole || circles[hi].component != circles[ci].component) continue;
      const Contour& hole = circles[hi].contour;
      std::vector<ClosedDisk> others;
      for (const auto& h : holes) {
        if (std::abs(h.center - hole.center) > 0.0 || h.radius != hole.radius) others.push_back(h);
      }
      const Path link = route_around(start, hole.center + hole.radius, others);
      const auto link_pts = link.sample(2.0 * kPi * outer.radius / n);
      const auto link_logs = unwrapped_log(values_at(link_pts), start_log);
      unwrap_circle(hi, link_logs.back());
    }
  }
  return out;
}

struct LogFit {
  AnalyticExpansion q;
  std::vector<Cplx> points;
  int n = 0;
};

// Least-squares fit of a continuous log(target / B) on the region boundary at one degree.
LogFit fit_log(const CompactRegion& region, const HoloFn& target, const std::vector<BranchPoint>& branch,
               const BasisSpec& spec) {
  const int circles = static_cast<int>(region.boundary(16).size());
  const int base_n = samples_per_circle(spec.size(), circles);
  auto ratio = [&](Cplx z) {
    Cplx b = 1.0;
    for (const auto& bp : branch) b *= std::pow(z - bp.point, bp.exponent);
    return target(z) / b;
  };
  for (int doubling = 0, n = base_n; doubling <= kMaxSampleDoublings; ++doubling, n *= 2) {
    std::vector<Cplx> logs;
    try {
      logs = boundary_log(region, ratio, n);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BranchAmbiguity) throw;
      continue;
    }
    const auto pts = boundary_samples(region, n).points;
    LsFit fit = fit_analytic_ls(pts, logs, spec, {}, {});
    return LogFit{std::move(fit.expansion), pts, n};
  }
  throw Error(ErrorKind::BranchAmbiguity, "phase unwrapping failed after sample doubling");
}

double sup_error_on(const SampleSet& samples, const ZeroFreeApproximant& h, const HoloFn& target) {
  const auto approx = h(samples.points);
  double err = 0.0;
  for (std::size_t i = 0; i < approx.size(); ++i) {
    const double e = std::abs(approx[i] - target(samples.points[i]));
    err = std::max(err, std::isfinite(e) ? e : INFINITY);
  }
  return err;
}

void require_off_region(const std::vector<Cplx>& points, const CompactRegion& region, ErrorKind kind,
                        const char* what) {
  for (Cplx p : points) {
    if (region.contains(p, kClearance)) throw Error(kind, std::string(what) + " on the compact set");
  }
}

std::vector<Cplx> polynomial_roots_or_empty(const Polynomial& p) {
  if (p.degree() < 1) return {};
  return roots(p);
}

struct HoleData {
  ClosedDisk hole;
  bool has_puncture = false;
  Cplx puncture;
  double scale = 1.0;
};

std::vector<HoleData> hole_data(const CompactRegion& region, const DomainSpec& omega) {
  std::vector<HoleData> out;
  for (const auto& h : region.holes()) {
    HoleData d;
    d.hole = h;
    for (Cplx p : omega.punctures()) {
      if (std::abs(p - h.center) < h.radius) {
        d.has_puncture = true;
        d.puncture = p;
        d.scale = h.radius - std::abs(p - h.center);
        break;
      }
    }
    out.push_back(d);
  }
  return out;
}

// A circle inside the region around the hole, halfway to the nearest other boundary.
Contour period_contour(const CompactRegion& region, const ClosedDisk& hole, int nodes) {
  double gap = INFINITY;
  for (const auto& outer : region.hulls()) {
    if (std::abs(hole.center - outer.center) < outer.radius) {
      gap = std::min(gap, outer.radius - std::abs(hole.center - outer.center) - hole.radius);
    }
  }
  for (const auto& other : region.holes()) {
    if (other.center == hole.center && other.radius == hole.radius) continue;
    gap = std::min(gap, std::abs(other.center - hole.center) - other.radius - hole.radius);
  }
  return Contour(hole.center, hole.radius + 0.5 * gap, 1, nodes);
}

}  // namespace

// ---------------------------------------------------------------------------
// Corrections and the zero-free approximant

CorrectionFunction CorrectionFunction::power(Cplx anchor, double scale, int power) {
  return CorrectionFunction(PowerTerm{anchor, scale, power}, "power");
}

Cplx CorrectionFunction::operator()(Cplx z) const {
  if (const auto* p = std::get_if<PowerTerm>(&form_)) return std::pow((z - p->anchor) / p->scale, p->power);
  if (const auto* e = std::get_if<AnalyticExpansion>(&form_)) return (*e)(z);
  return std::get<HoloFn>(form_)(z);
}

std::vector<Cplx> CorrectionFunction::operator()(std::span<const Cplx> points) const {
  if (const auto* e = std::get_if<AnalyticExpansion>(&form_)) return (*e)(points);
  std::vector<Cplx> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = (*this)(points[i]);
  return out;
}

ZeroFreeApproximant::ZeroFreeApproximant(std::vector<BranchPoint> branch, AnalyticExpansion exp_part)
    : branch_(std::move(branch)), exp_part_(std::move(exp_part)) {}

Cplx ZeroFreeApproximant::branch_factor(Cplx z) const {
  Cplx b = 1.0;
  for (const auto& bp : branch_) b *= std::pow(z - bp.point, bp.exponent);
  return b;
}

Cplx ZeroFreeApproximant::exponent(Cplx z) const {
  Cplx e = exp_part_(z);
  for (const auto& [s, w] : corrections_) e += s * w(z);
  return e;
}

Cplx ZeroFreeApproximant::operator()(Cplx z) const { return branch_factor(z) * std::exp(exponent(z)); }

std::vector<Cplx> ZeroFreeApproximant::operator()(std::span<const Cplx> points) const {
  std::vector<Cplx> e = exp_part_(points);
  for (const auto& [s, w] : corrections_) {
    const auto wv = w(points);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] += s * wv[i];
  }
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = branch_factor(points[i]) * std::exp(e[i]);
  return e;
}

Cplx ZeroFreeApproximant::log_value(Cplx z) const {
  Cplx l = exponent(z);
  for (const auto& bp : branch_) l += static_cast<double>(bp.exponent) * std::log(z - bp.point);
  return l;
}

ZeroFreeApproximant ZeroFreeApproximant::with_corrections(const CorrectionBasis& basis,
                                                          std::span<const Cplx> s) const {
  if (basis.size() != s.size()) throw Error(ErrorKind::InvalidArgument, "correction coefficient count mismatch");
  ZeroFreeApproximant out = *this;
  for (std::size_t j = 0; j < basis.size(); ++j) out.corrections_.emplace_back(s[j], basis[j]);
  return out;
}

// ---------------------------------------------------------------------------
// Functionals

QuadratureRule functional_rule(const Functional& functional) {
  if (const auto* p = std::get_if<PeriodFunctional>(&functional)) return contour_quadrature(p->contour);
  return path_quadrature(std::get<ValueGapFunctional>(functional).path);
}

Cplx functional_target(const Functional& functional) {
  return std::visit([](const auto& f) { return f.target; }, functional);
}

// ---------------------------------------------------------------------------
// zero_free_runge

ZeroFreeResult zero_free_runge(const RationalFunction& g, const CompactRegion& region, const DomainSpec& omega,
                               double eps, int degree_cap) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  omega.check_compatible(region);
  require_off_region(polynomial_roots_or_empty(g.numerator()), region, ErrorKind::ZeroOnCompact, "zero of g");
  require_off_region(polynomial_roots_or_empty(g.denominator()), region, ErrorKind::PoleOnCompact, "pole of g");
  if (g.numerator().is_zero()) throw Error(ErrorKind::ZeroOnCompact, "g vanishes identically");

  const auto holes = hole_data(region, omega);
  std::vector<BranchPoint> branch;
  BasisSpec spec{region.centroid(), region.extent(), 0, {}};
  for (const auto& hd : holes) {
    const Contour around(hd.hole.center, hd.hole.radius, 1, default_node_count(g.denominator().degree()));
    const int m = argument_winding([&g](Cplx z) { return eval_finite(g, z); }, around);
    if (m != 0 && !hd.has_puncture) {
      throw Error(ErrorKind::WindingMismatch, "nonzero winding around a hole without a puncture of the domain");
    }
    if (m != 0) branch.push_back({hd.puncture, m});
    if (hd.has_puncture) spec.laurent.push_back({hd.puncture, hd.scale, 0});
  }

  const HoloFn target = [&g](Cplx z) { return eval_finite(g, z); };
  double previous = INFINITY;
  const int last = std::max(degree_cap, kInitialDegree);
  for (int d = kInitialDegree;; d = std::min(2 * d, last)) {
    spec.degree = d;
    for (auto& l : spec.laurent) l.degree = d;
    const LogFit lf = fit_log(region, target, branch, spec);
    ZeroFreeApproximant approx(branch, lf.q);
    const double err = sup_error_on(validation_samples(region, lf.n), approx, target);
    previous = std::min(previous, err);
    if (err <= eps) {
      ApproximationReport report;
      report.degree_used = d;
      report.certified_sup_error = err;
      report.samples_used = static_cast<int>(lf.points.size());
      return {std::move(approx), report};
    }
    if (d >= last) break;
  }
  throw Error(ErrorKind::DegreeCapExceeded,
              "zero-free fit did not reach eps by the degree cap (best error " + std::to_string(previous) + ")");
}

// ---------------------------------------------------------------------------
// match_functionals

ZeroFreeResult match_functionals(const ZeroFreeApproximant& base, const CorrectionBasis& basis,
                                 std::span<const Functional> functionals) {
  const int n = static_cast<int>(functionals.size());
  if (static_cast<int>(basis.size()) != n) {
    throw Error(ErrorKind::InvalidArgument, "correction basis size must equal the number of functionals");
  }
  ZeroFreeResult result{base, {}};
  if (n == 0) return result;

  // nodes, weighted base values and correction values per functional
  struct Block {
    std::vector<Cplx> weighted_base;
    std::vector<std::vector<Cplx>> w;  // w[j][i]
    Cplx target;
  };
  std::vector<Block> blocks(n);
  double scale = 0.0;
  for (int k = 0; k < n; ++k) {
    const QuadratureRule rule = functional_rule(functionals[k]);
    const auto bv = base(rule.nodes);
    Block& b = blocks[k];
    b.target = functional_target(functionals[k]);
    b.weighted_base.resize(bv.size());
    for (std::size_t i = 0; i < bv.size(); ++i) {
      if (!finite(bv[i])) throw Error(ErrorKind::NonFiniteValue, "approximant not finite on a functional node");
      b.weighted_base[i] = rule.weights[i] * bv[i];
    }
    for (int j = 0; j < n; ++j) {
      b.w.push_back(basis[j](rule.nodes));
      double mass = 0.0;
      for (std::size_t i = 0; i < bv.size(); ++i) mass += std::abs(b.weighted_base[i] * b.w[j][i]);
      scale = std::max(scale, mass);
    }
  }

  auto evaluate = [&](const Eigen::VectorXcd& s, Eigen::VectorXcd& residual, Eigen::MatrixXcd* jac) {
    residual.resize(n);
    if (jac) jac->resize(n, n);
    for (int k = 0; k < n; ++k) {
      const Block& b = blocks[k];
      Cplx f = 0.0;
      Eigen::VectorXcd row = Eigen::VectorXcd::Zero(n);
      for (std::size_t i = 0; i < b.weighted_base.size(); ++i) {
        Cplx e = 0.0;
        for (int j = 0; j < n; ++j) e += s(j) * b.w[j][i];
        const Cplx term = b.weighted_base[i] * std::exp(e);
        f += term;
        if (jac) {
          for (int j = 0; j < n; ++j) row(j) += term * b.w[j][i];
        }
      }
      residual(k) = f - b.target;
      if (jac) jac->row(k) = row.transpose();
    }
  };

  Eigen::VectorXcd s = Eigen::VectorXcd::Zero(n), r;
  Eigen::MatrixXcd jac;
  evaluate(s, r, &jac);
  {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(jac);
    const auto sv = svd.singularValues();
    const double smax = sv(0), smin = sv(n - 1);
    if (!(smax > 1e-12 * scale) || !(smin > 0.0) || smax / smin > kMaxJacobianCondition) {
      throw Error(ErrorKind::SingularJacobian, "functional Jacobian at s = 0 is singular or ill conditioned");
    }
  }

  auto norm = [](const Eigen::VectorXcd& v) {
    const double x = v.norm();
    return std::isfinite(x) ? x : INFINITY;
  };
  double rn = norm(r);
  int iterations = 0;
  bool polished = false;
  while (true) {
    if (rn <= kNewtonTolerance) {
      if (polished) break;
      polished = true;
    } else if (iterations >= kNewtonMaxIterations) {
      throw Error(ErrorKind::NoConvergence, "Newton iteration for the functionals did not converge");
    }
    const Eigen::VectorXcd step = jac.fullPivLu().solve(-r);
    double lambda = 1.0;
    bool accepted = false;
    Eigen::VectorXcd s_try, r_try;
    for (int h = 0; h <= kMaxHalvings; ++h, lambda *= 0.5) {
      s_try = s + lambda * step;
      evaluate(s_try, r_try, nullptr);
      const double rt = norm(r_try);
      if (rt < rn || (polished && rt <= rn)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (polished) break;
      throw Error(ErrorKind::NoConvergence, "damped Newton step failed to reduce the residual");
    }
    s = s_try;
    if (!polished) ++iterations;
    evaluate(s, r, &jac);
    rn = norm(r);
    if (polished) break;
  }

  std::vector<Cplx> sv(s.data(), s.data() + n);
  result.approximant = base.with_corrections(basis, sv);
  result.report.newton_iterations = iterations;
  result.report.final_residual_norm = rn;
  return result;
}

// ---------------------------------------------------------------------------
// Antiderivatives

LocallyUnivalentMap::LocallyUnivalentMap(ZeroFreeApproximant derivative, std::vector<Anchor> anchors,
                                         std::vector<ClosedDisk> holes)
    : h_(std::move(derivative)), anchors_(std::move(anchors)), holes_(std::move(holes)) {
  if (anchors_.empty()) throw Error(ErrorKind::InvalidArgument, "antiderivative needs an anchor");
}

Cplx LocallyUnivalentMap::integrate(const Path& path) const {
  const QuadratureRule rule = path_quadrature(path);
  return rule.integrate(h_(rule.nodes));
}

Cplx LocallyUnivalentMap::operator()(Cplx z) const {
  const Anchor* best = &anchors_.front();
  for (const auto& a : anchors_) {
    if (std::abs(z - a.point) < std::abs(z - best->point)) best = &a;
  }
  return best->value + integrate(route_around(best->point, z, holes_));
}

Cplx base_point(const CompactRegion& region) {
  const Cplx c = region.centroid();
  const auto grid = interior_grid(region, region.extent() / 8.0);
  Cplx best = grid.points.front();
  for (Cplx z : grid.points) {
    if (std::abs(z - c) < std::abs(best - c)) best = z;
  }
  return best;
}

LocallyUnivalentResult lu_holomorphic_runge(const RationalFunction& f, const CompactRegion& region,
                                            const DomainSpec& omega, double eps, int degree_cap) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  omega.check_compatible(region);
  require_off_region(polynomial_roots_or_empty(f.denominator()), region, ErrorKind::PoleOnCompact, "pole of f");
  const auto cert = certify_local_univalence(f, region);
  if (!cert.verdict) throw Error(ErrorKind::NotLocallyUnivalent, "f has critical points or multiple poles on K");

  const RationalFunction df = differentiate(f);
  const Cplx z0 = base_point(region);
  const Cplx f0 = eval_finite(f, z0);
  const auto holes = region.holes();

  // longest base-point path to the boundary bounds |G - f| by length * |h - f'|
  double path_bound = 0.0;
  for (Cplx z : boundary_samples(region, 64).points) {
    path_bound = std::max(path_bound, route_around(z0, z, holes).length());
  }

  const auto hd = hole_data(region, omega);
  const auto check = validation_samples(region, 64);
  double eps_g = eps / (2.0 * std::max(path_bound, 1e-3));
  for (int attempt = 0; attempt <= kMaxTightenings; ++attempt, eps_g *= 0.1) {
    ZeroFreeResult base = zero_free_runge(df, region, omega, eps_g, degree_cap);
    const int nodes = std::max(128, 2 * default_node_count(base.report.degree_used));

    std::vector<Functional> functionals;
    CorrectionBasis basis;
    for (const auto& h : hd) {
      if (!h.has_puncture) continue;  // holomorphic across the hole: periods vanish already
      functionals.emplace_back(PeriodFunctional{period_contour(region, h.hole, nodes), Cplx(0.0)});
      basis.push_back(CorrectionFunction::power(h.puncture, h.scale, -1));
    }
    ZeroFreeResult matched;
    try {
      matched = match_functionals(base.approximant, basis, functionals);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularJacobian) throw;
      // fall back to w_j = 1 / ((z - p_j) h(z)), whose periods against h are 2 pi i
      basis.clear();
      const ZeroFreeApproximant h0 = base.approximant;
      for (const auto& h : hd) {
        if (!h.has_puncture) continue;
        const Cplx p = h.puncture;
        const double rho = h.scale;
        basis.emplace_back(HoloFn([h0, p, rho](Cplx z) { return rho / ((z - p) * h0(z)); }), "inverse-pole");
      }
      matched = match_functionals(base.approximant, basis, functionals);
    }

    LocallyUnivalentMap map(matched.approximant, {{z0, f0}}, holes);
    double err = 0.0;
    for (Cplx z : check.points) err = std::max(err, std::abs(map(z) - eval_finite(f, z)));
    if (err <= eps) {
      ApproximationReport report = base.report;
      report.certified_sup_error = err;
      report.newton_iterations = matched.report.newton_iterations;
      report.final_residual_norm = matched.report.final_residual_norm;
      return {std::move(map), report};
    }
  }
  throw Error(ErrorKind::DegreeCapExceeded, "antiderivative error stayed above eps after tightening");
}

// ---------------------------------------------------------------------------
// glue_targets

namespace {

// Visits the pieces as a nearest-neighbour chain starting from the first one.
std::vector<std::size_t> chain_order(std::span<const GluePiece> pieces) {
  std::vector<std::size_t> order{0};
  std::vector<bool> used(pieces.size(), false);
  used[0] = true;
  while (order.size() < pieces.size()) {
    const Cplx from = pieces[order.back()].disk.center;
    std::size_t best = pieces.size();
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      if (used[k]) continue;
      if (best == pieces.size() || std::abs(pieces[k].disk.center - from) < std::abs(pieces[best].disk.center - from)) {
        best = k;
      }
    }
    used[best] = true;
    order.push_back(best);
  }
  return order;
}

// A small disk in the middle of the gap between two consecutive chain pieces.
ClosedDisk bridge_disk(const ClosedDisk& a, const ClosedDisk& b, std::span<const GluePiece> pieces) {
  const Cplx u = (b.center - a.center) / std::abs(b.center - a.center);
  const Cplx pa = a.center + a.radius * u, pb = b.center - b.radius * u;
  const Cplx mid = 0.5 * (pa + pb);
  double r = kBridgeFraction * std::abs(pb - pa);
  for (const auto& p : pieces) r = std::min(r, 0.5 * (std::abs(mid - p.disk.center) - p.disk.radius));
  return {mid, r};
}

std::size_t owner(std::span<const ClosedDisk> disks, Cplx z) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < disks.size(); ++k) {
    if (std::abs(z - disks[k].center) - disks[k].radius < std::abs(z - disks[best].center) - disks[best].radius) {
      best = k;
    }
  }
  return best;
}

}  // namespace

GlueResult glue_targets(std::span<const GluePiece> pieces, const DomainSpec& omega, double eps, int degree_cap) {
  if (pieces.empty()) throw Error(ErrorKind::InvalidArgument, "glue needs at least one piece");
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  std::vector<ClosedDisk> disks;
  for (const auto& p : pieces) {
    if (!(p.disk.radius > 0.0)) throw Error(ErrorKind::InvalidGeometry, "piece radius must be positive");
    for (const auto& d : disks) {
      if (std::abs(d.center - p.disk.center) <= d.radius + p.disk.radius) {
        throw Error(ErrorKind::OverlappingPieces, "glue pieces must be pairwise disjoint");
      }
    }
    disks.push_back(p.disk);
  }
  omega.check_compatible(CompactRegion::disk_union(disks));
  // targets are read through their charts: value g(chart(z)), derivative g'(chart(z)) chart'(z)
  std::vector<RationalFunction> derivs;
  for (const auto& p : pieces) {
    const auto local = p.chart.image_of_disk(p.disk);
    if (!local) throw Error(ErrorKind::InvalidGeometry, "piece chart sends its disk to an unbounded set");
    const auto local_region = CompactRegion::disk(local->center, local->radius);
    require_off_region(polynomial_roots_or_empty(p.target.denominator()), local_region, ErrorKind::PoleOnCompact,
                       "pole of a target");
    if (!certify_local_univalence(p.target, local_region).verdict) {
      throw Error(ErrorKind::NotLocallyUnivalent, "a glue target is not locally univalent on its disk");
    }
    derivs.push_back(differentiate(p.target));
  }
  auto piece_value = [&](std::size_t k, Cplx z) {
    return eval_finite(pieces[k].target, pieces[k].chart(z).value());
  };
  auto piece_derivative = [&](std::size_t k, Cplx z) {
    return eval_finite(derivs[k], pieces[k].chart(z).value()) * pieces[k].chart.derivative(z);
  };

  const auto order = chain_order(pieces);
  std::vector<ClosedDisk> all = disks, bridges;
  for (std::size_t k = 1; k < order.size(); ++k) {
    bridges.push_back(bridge_disk(disks[order[k - 1]], disks[order[k]], pieces));
    all.push_back(bridges.back());
  }
  const auto fit_region = CompactRegion::disk_union(all);
  const auto piece_region = CompactRegion::disk_union(disks);
  const std::size_t np = pieces.size();
  const HoloFn target = [&](Cplx z) {
    const std::size_t k = owner(all, z);
    return k < np ? piece_derivative(k, z) : Cplx(1.0);
  };

  const Cplx z0 = pieces[order[0]].disk.center;
  std::vector<Cplx> chain{z0};
  for (std::size_t k = 1; k < order.size(); ++k) chain.push_back(pieces[order[k]].disk.center);
  std::vector<Functional> functionals;
  std::vector<QuadratureRule> rules;
  const Cplx g0 = piece_value(order[0], z0);
  for (std::size_t k = 1; k < order.size(); ++k) {
    const Path path = Path::polyline(std::span<const Cplx>(chain.data(), k + 1));
    functionals.emplace_back(ValueGapFunctional{path, piece_value(order[k], chain[k]) - g0});
    rules.push_back(functional_rule(functionals.back()));
  }
  const std::size_t nf = functionals.size();

  double best = INFINITY;
  const int last = std::max(degree_cap, kInitialDegree);
  for (int d = kInitialDegree;; d = std::min(2 * d, last)) {
    const BasisSpec spec{fit_region.centroid(), fit_region.extent(), d, {}};
    const LogFit lf = fit_log(fit_region, target, {}, spec);
    CorrectionBasis basis;
    std::vector<AnalyticExpansion> betas;
    for (std::size_t j = 0; j < bridges.size(); ++j) {
      std::vector<Cplx> indicator(lf.points.size());
      for (std::size_t i = 0; i < lf.points.size(); ++i) {
        indicator[i] = owner(all, lf.points[i]) == np + j ? 1.0 : 0.0;
      }
      betas.push_back(fit_analytic_ls(lf.points, indicator, spec, {}, {}).expansion);
      basis.emplace_back(betas.back(), "bridge");
    }

    // Starting constants c_j on the bridges. With b_j close to the indicator of bridge j, moving c_j by t
    // changes functional k by about (e^t - 1) times the integral of h b_j along path k; solving for e^t - 1
    // rather than t lets the bridge value reach negative and complex multiples.
    std::vector<Cplx> c(nf, 0.0);
    std::vector<std::vector<Cplx>> q_nodes(nf);
    std::vector<std::vector<std::vector<Cplx>>> b_nodes(nf);
    for (std::size_t k = 0; k < nf; ++k) {
      q_nodes[k] = lf.q(rules[k].nodes);
      for (std::size_t j = 0; j < nf; ++j) b_nodes[k].push_back(basis[j](rules[k].nodes));
    }
    for (int pass = 0; pass < kBridgePasses; ++pass) {
      Eigen::VectorXcd r(nf);
      Eigen::MatrixXcd jac(nf, nf);
      for (std::size_t k = 0; k < nf; ++k) {
        std::vector<Cplx> h(q_nodes[k].size()), hb(h.size());
        for (std::size_t i = 0; i < h.size(); ++i) {
          Cplx e = q_nodes[k][i];
          for (std::size_t j = 0; j < nf; ++j) e += c[j] * b_nodes[k][j][i];
          h[i] = std::exp(e);
        }
        r(k) = rules[k].integrate(h) - functional_target(functionals[k]);
        for (std::size_t j = 0; j < nf; ++j) {
          for (std::size_t i = 0; i < h.size(); ++i) hb[i] = h[i] * b_nodes[k][j][i];
          jac(k, j) = rules[k].integrate(hb);
        }
      }
      if (!(r.norm() > kBridgeSettled)) break;
      const Eigen::VectorXcd delta = jac.fullPivLu().solve(-r);
      if (!delta.allFinite()) break;
      for (std::size_t j = 0; j < nf; ++j) {
        Cplx factor = 1.0 + delta(j);
        if (std::abs(factor) < 0.1) factor *= 0.1 / std::abs(factor);  // keep the bridge away from zero
        c[j] += std::log(factor);
      }
    }
    const ZeroFreeApproximant h0 = ZeroFreeApproximant({}, lf.q).with_corrections(basis, c);
    bool ok = true;
    ZeroFreeResult matched{h0, {}};
    try {
      matched = match_functionals(h0, basis, functionals);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoConvergence && e.kind() != ErrorKind::SingularJacobian) throw;
      if (d >= last) throw;
      ok = false;
    }
    if (ok) {
      // all corrections share the basis of q, so the exponent collapses to one expansion
      Eigen::VectorXcd coef = lf.q.coefficients();
      const auto& corr = matched.approximant.corrections();
      for (std::size_t j = 0; j < corr.size(); ++j) coef += corr[j].first * betas[j % nf].coefficients();
      const ZeroFreeApproximant h({}, AnalyticExpansion(lf.q.basis(), coef));

      std::vector<LocallyUnivalentMap::Anchor> anchors{{z0, g0}};
      const LocallyUnivalentMap walker(h, anchors, {});
      for (std::size_t k = 1; k < chain.size(); ++k) {
        anchors.push_back({chain[k], anchors.back().value + walker.integrate(Path::segment(chain[k - 1], chain[k]))});
      }
      // |G - g_k| <= |G(c_k) - g_k(c_k)| + r_k max over the circle of |h - g_k'|
      std::vector<double> errors(np, 0.0);
      const auto check = validation_samples(piece_region, lf.n).points;
      const auto hv = h(check);
      for (std::size_t i = 0; i < check.size(); ++i) {
        const std::size_t k = owner(disks, check[i]);
        const double e = disks[k].radius * std::abs(hv[i] - piece_derivative(k, check[i]));
        errors[k] = std::max(errors[k], std::isfinite(e) ? e : INFINITY);
      }
      for (std::size_t k = 0; k < chain.size(); ++k) {
        const std::size_t piece = order[k];
        errors[piece] += std::abs(anchors[k].value - piece_value(piece, chain[k]));
      }
      const double worst = *std::max_element(errors.begin(), errors.end());
      best = std::min(best, worst);
      if (worst <= eps) {
        ApproximationReport report;
        report.degree_used = d;
        report.certified_sup_error = worst;
        report.newton_iterations = matched.report.newton_iterations;
        report.final_residual_norm = matched.report.final_residual_norm;
        report.samples_used = static_cast<int>(lf.points.size());
        return {LocallyUnivalentMap(h, std::move(anchors), {}), std::move(errors), report};
      }
    }
    if (d >= last) break;
  }
  throw Error(ErrorKind::DegreeCapExceeded,
              "glued map did not reach eps by the degree cap (best error " + std::to_string(best) + ")");
}

}  // namespace univalent
