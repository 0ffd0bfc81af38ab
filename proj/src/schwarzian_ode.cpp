#include "univalent/schwarzian_ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "univalent/error.hpp"
#include "univalent/univalence.hpp"

namespace univalent {

namespace {

constexpr double kMinTolerance = 1e-13;
constexpr double kMaxTolerance = 1e-6;
constexpr double kUnderflowFraction = 1e-12;
constexpr double kDetourDistance = 1e-6;
constexpr double kPoleRatio = 1e-12;

// Dormand-Prince 5(4)
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// N/2 independent solutions (w, w') stacked in one state vector.
template <std::size_t N>
using State = std::array<Cplx, N>;

template <std::size_t N>
State<N> axpy(const State<N>& y, double h, std::initializer_list<std::pair<double, const State<N>*>> terms) {
  State<N> out = y;
  for (const auto& [a, k] : terms) {
    for (std::size_t i = 0; i < N; ++i) out[i] += h * a * (*k)[i];
  }
  return out;
}

template <std::size_t N>
struct Trajectory {
  std::vector<Cplx> nodes;
  std::vector<State<N>> states;
};

std::vector<Cplx> refine(std::span<const Cplx> path, double h_bound) {
  std::vector<Cplx> nodes{path.front()};
  for (std::size_t k = 1; k < path.size(); ++k) {
    const Cplx a = path[k - 1], b = path[k];
    const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / h_bound)));
    for (int j = 1; j <= pieces; ++j) nodes.push_back(a + (b - a) * (static_cast<double>(j) / pieces));
  }
  return nodes;
}

template <std::size_t N>
Trajectory<N> integrate(const SchwarzianODE& ode, std::span<const Cplx> path, const State<N>& init, double tol) {
  if (!(tol >= kMinTolerance && tol <= kMaxTolerance)) {
    throw Error(ErrorKind::InvalidArgument, "ODE tolerance must lie in [1e-13, 1e-6]");
  }
  if (path.empty()) throw Error(ErrorKind::InvalidArgument, "empty path");
  // growth rate of solutions is about sqrt(max |p| / 2) per unit length
  const double growth = std::sqrt(0.5 * ode.max_coefficient_on(path));
  const double h_bound = 0.25 / std::max(1.0, growth);
  Trajectory<N> out;
  out.nodes = refine(path, h_bound);
  out.states.push_back(init);
  double total = 0.0;
  for (std::size_t k = 1; k < out.nodes.size(); ++k) total += std::abs(out.nodes[k] - out.nodes[k - 1]);
  const double h_min = kUnderflowFraction * std::max(total, 1e-300);

  State<N> y = init;
  double h = std::min(h_bound, 0.01);
  for (std::size_t k = 1; k < out.nodes.size(); ++k) {
    const Cplx a = out.nodes[k - 1], b = out.nodes[k];
    const double len = std::abs(b - a);
    if (len == 0.0) {
      out.states.push_back(y);
      continue;
    }
    const Cplx u = (b - a) / len;
    auto rhs = [&](double s, const State<N>& x) {
      const Cplx p = ode.coefficient(a + s * u);
      State<N> f;
      for (std::size_t i = 0; i < N; i += 2) {
        f[i] = u * x[i + 1];
        f[i + 1] = -0.5 * u * p * x[i];
      }
      return f;
    };
    double s = 0.0;
    State<N> k1 = rhs(0.0, y);
    while (s < len) {
      const bool last = s + h >= len * (1.0 - 1e-14);
      const double step = last ? len - s : h;
      const State<N> k2 = rhs(s + c2 * step, axpy<N>(y, step, {{a21, &k1}}));
      const State<N> k3 = rhs(s + c3 * step, axpy<N>(y, step, {{a31, &k1}, {a32, &k2}}));
      const State<N> k4 = rhs(s + c4 * step, axpy<N>(y, step, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
      const State<N> k5 = rhs(s + c5 * step, axpy<N>(y, step, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
      const State<N> k6 =
          rhs(s + step, axpy<N>(y, step, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
      const State<N> y5 = axpy<N>(y, step, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
      const State<N> k7 = rhs(s + step, y5);
      double err = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const Cplx e = step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        err = std::max(err, std::abs(e) / (1.0 + std::max(std::abs(y[i]), std::abs(y5[i]))));
      }
      if (!std::isfinite(err)) throw Error(ErrorKind::NonFiniteValue, "ODE state overflowed");
      const double allowed = tol * step;
      const double factor = err > 0.0 ? 0.9 * std::pow(allowed / err, 0.25) : 5.0;
      if (err <= allowed) {
        s = last ? len : s + step;
        y = y5;
        k1 = k7;
        if (!last) h = std::min(h_bound, step * std::clamp(factor, 0.2, 5.0));
      } else {
        h = step * std::clamp(factor, 0.1, 0.9);
        if (h < h_min) throw Error(ErrorKind::StepUnderflow, "ODE step fell below the underflow bound");
      }
    }
    out.states.push_back(y);
  }
  return out;
}

}  // namespace

SchwarzianODE::SchwarzianODE(Polynomial p) : p_([p = std::move(p)](Cplx z) { return p(z); }) {}

SchwarzianODE::SchwarzianODE(AnalyticExpansion p) : p_([p = std::move(p)](Cplx z) { return p(z); }) {}

Cplx SchwarzianODE::coefficient(Cplx z) const { return p_(z); }

double SchwarzianODE::max_coefficient_on(std::span<const Cplx> path) const {
  double m = std::abs(p_(path.front()));
  for (std::size_t k = 1; k < path.size(); ++k) {
    for (int j = 1; j <= 32; ++j) m = std::max(m, std::abs(p_(path[k - 1] + (path[k] - path[k - 1]) * (j / 32.0))));
  }
  return m;
}

void ReconstructionFrame::validate() const {
  const Cplx w = wronskian();
  if (!(std::abs(w) >= 1e-12)) throw Error(ErrorKind::DegenerateFrame, "frame solutions are linearly dependent");
}

PathSolution solve_ivp_along(const SchwarzianODE& ode, std::span<const Cplx> path, WState init, double tol) {
  const auto traj = integrate<2>(ode, path, State<2>{init.w, init.dw}, tol);
  PathSolution sol;
  sol.nodes = traj.nodes;
  sol.tolerance = tol;
  for (const auto& s : traj.states) sol.values.push_back({s[0], s[1]});
  return sol;
}

double wronskian_drift(const PathSolution& sol1, const PathSolution& sol2) {
  if (sol1.nodes != sol2.nodes) throw Error(ErrorKind::PathMismatch, "solutions live on different paths");
  auto wr = [](const WState& a, const WState& b) { return a.w * b.dw - a.dw * b.w; };
  const Cplx w0 = wr(sol1.values.front(), sol2.values.front());
  if (!(std::abs(w0) >= 1e-12)) throw Error(ErrorKind::DegenerateFrame, "initial Wronskian vanishes");
  double drift = 0.0;
  for (std::size_t k = 0; k < sol1.values.size(); ++k) {
    drift = std::max(drift, std::abs(wr(sol1.values[k], sol2.values[k]) - w0) / std::abs(w0));
  }
  return drift;
}

// ---------------------------------------------------------------------------
// Reconstruction

ReconstructedFunction::ReconstructedFunction(SchwarzianODE ode, ReconstructionFrame frame, double tol)
    : ode_(std::move(ode)), frame_(frame), tol_(tol) {
  frame_.validate();
  if (!(tol >= kMinTolerance && tol <= kMaxTolerance)) {
    throw Error(ErrorKind::InvalidArgument, "ODE tolerance must lie in [1e-13, 1e-6]");
  }
}

std::vector<Cplx> ReconstructedFunction::path_to(Cplx z) const {
  const Cplx z0 = frame_.z0;
  if (z == z0) return {z0};
  const std::vector<Cplx> straight{z0, z};
  const State<4> init{frame_.u1.w, frame_.u1.dw, frame_.u2.w, frame_.u2.dw};
  const auto traj = integrate<4>(ode_, straight, init, tol_);
  const Cplx d = z - z0;
  for (std::size_t k = 0; k < traj.nodes.size(); ++k) {
    const auto& s = traj.states[k];
    if (s[3] == 0.0) continue;
    const Cplx root = traj.nodes[k] - s[2] / s[3];  // one Newton step toward a zero of u2
    const double t = std::clamp(std::real((root - z0) / d), 0.0, 1.0);
    const double dist = std::abs(z0 + t * d - root);
    if (dist < kDetourDistance && std::abs(root - z) > kDetourDistance && std::abs(root - z0) > kDetourDistance) {
      const Cplx mid = 0.5 * (z0 + z) + Cplx(0.0, 0.25) * d;
      return {z0, mid, z};
    }
  }
  return straight;
}

ExtComplex ReconstructedFunction::operator()(Cplx z) const {
  const auto path = path_to(z);
  if (path.size() == 1) {
    if (std::abs(frame_.u2.w) <= kPoleRatio * std::abs(frame_.u1.w)) return ExtComplex::infinity();
    return frame_.u1.w / frame_.u2.w;
  }
  const State<4> init{frame_.u1.w, frame_.u1.dw, frame_.u2.w, frame_.u2.dw};
  const auto traj = integrate<4>(ode_, path, init, tol_);
  const auto& s = traj.states.back();
  if (std::abs(s[2]) <= kPoleRatio * std::abs(s[0])) return ExtComplex::infinity();
  return s[0] / s[2];
}

MeroFn ReconstructedFunction::as_function() const {
  return [self = *this](Cplx z) { return self(z); };
}

ReconstructedFunction reconstruct_from_schwarzian(const SchwarzianODE& ode, const ReconstructionFrame& frame,
                                                  double tol) {
  return ReconstructedFunction(ode, frame, tol);
}

ReconstructionFrame frame_from_function(const RationalFunction& f, Cplx z0) {
  const RationalFunction df = differentiate(f), ddf = differentiate(df);
  const ExtComplex fv = f(z0), d1 = df(z0), d2 = ddf(z0);
  if (!fv.is_finite() || !d1.is_finite() || !d2.is_finite()) {
    throw Error(ErrorKind::DegenerateFrame, "frame point is a pole of f");
  }
  if (std::abs(d1.value()) < 1e-12) throw Error(ErrorKind::DegenerateFrame, "frame point is a critical point of f");
  const Cplx s = std::sqrt(d1.value());
  ReconstructionFrame frame;
  frame.z0 = z0;
  frame.u2.w = 1.0 / s;
  frame.u2.dw = -0.5 * d2.value() / (d1.value() * s);
  frame.u1.w = fv.value() * frame.u2.w;
  frame.u1.dw = d1.value() * frame.u2.w + fv.value() * frame.u2.dw;
  frame.validate();
  return frame;
}

MeromorphicRungeResult meromorphic_lu_runge(const RationalFunction& f, const CompactRegion& region, double eps,
                                            int degree_cap) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  if (!region.complement_connected()) {
    throw Error(ErrorKind::ComplementNotConnected, "the complement of the compact set must be connected");
  }
  if (!certify_local_univalence(f, region).verdict) {
    throw Error(ErrorKind::NotLocallyUnivalent, "f has critical points or multiple poles on K");
  }
  const RationalFunction s = schwarzian(f);
  const HoloFn s_eval = [&s](Cplx z) {
    const ExtComplex v = s(z);
    if (!v.is_finite()) throw Error(ErrorKind::NonFiniteValue, "Schwarzian has a pole on K");
    return v.value();
  };

  // frame point: interior grid point nearest the centroid, kept away from the poles of f
  const double extent = region.extent();
  const auto grid = interior_grid(region, extent / 8.0);
  const auto poles = f.poles();
  Cplx z0 = grid.points.front();
  double best = INFINITY;
  for (Cplx z : grid.points) {
    double clearance = INFINITY;
    for (Cplx p : poles) clearance = std::min(clearance, std::abs(z - p));
    if (clearance < 0.25 * extent) continue;
    const double dist = std::abs(z - region.centroid());
    if (dist < best) {
      best = dist;
      z0 = z;
    }
  }
  const ReconstructionFrame frame = frame_from_function(f, z0);

  SampleSet check = interior_grid(region, extent / 8.0);
  for (Cplx z : boundary_samples(region, 32).points) check.points.push_back(z);
  const int circles = static_cast<int>(region.boundary(16).size());
  const MeroFn target = [&f](Cplx z) { return f(z); };

  double best_error = INFINITY;
  const int last = std::max(degree_cap, 8);
  for (int d = 8;; d = std::min(2 * d, last)) {
    const BasisSpec spec{region.centroid(), extent, d, {}};
    const LsFit fit = fit_analytic_ls(region, s_eval, spec, samples_per_circle(spec.size(), circles));
    ReconstructedFunction g(SchwarzianODE(fit.expansion), frame);
    const double err = chordal_sup_distance(g.as_function(), target, check);
    best_error = std::min(best_error, err);
    if (err <= eps) {
      ApproximationReport report;
      report.degree_used = d;
      report.certified_sup_error = err;
      report.samples_used = fit.samples_used;
      report.final_residual_norm = fit.certified_sup_error;
      return {std::move(g), report};
    }
    if (d >= last) break;
  }
  throw Error(ErrorKind::DegreeCapExceeded,
              "chordal error stayed above eps up to the degree cap (best " + std::to_string(best_error) + ")");
}

Cplx obstruction_residue(const RationalFunction& s, const Contour& contour) {
  for (Cplx p : s.poles()) {
    if (std::abs(std::abs(p - contour.center) - contour.radius) <= 1e-9 * std::max(1.0, contour.radius)) {
      throw Error(ErrorKind::PoleOnContour, "the Schwarzian has a pole on the contour");
    }
  }
  const int degree = s.numerator().degree() + s.denominator().degree();
  const Contour c(contour.center, contour.radius, contour.orientation,
                  std::max(contour.node_count, default_node_count(degree + 2)));
  return contour_integral(
      [&](Cplx z) {
        const ExtComplex v = s(z);
        if (!v.is_finite()) throw Error(ErrorKind::PoleOnContour, "the Schwarzian has a pole on the contour");
        return v.value() * (z - contour.center);
      },
      c);
}

}  // namespace univalent
