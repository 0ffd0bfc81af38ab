#pragma once

// The linear equation w'' + p w / 2 = 0 whose solution quotients have Schwarzian p:
// adaptive integration along polylines, reconstruction of f = u1 / u2, and the
// residue invariant that obstructs entire Schwarzians.

#include <span>
#include <vector>

#include "univalent/expansion.hpp"
#include "univalent/rational.hpp"
#include "univalent/runge.hpp"

namespace univalent {

/// w'' + p(z) w / 2 = 0.
class SchwarzianODE {
 public:
  explicit SchwarzianODE(Polynomial p);
  /// Fitted coefficient; evaluated through the expansion.
  explicit SchwarzianODE(AnalyticExpansion p);

  Cplx coefficient(Cplx z) const;
  /// max |p| over samples of the polyline.
  double max_coefficient_on(std::span<const Cplx> path) const;

 private:
  HoloFn p_;
};

/// A solution value and its derivative.
struct WState {
  Cplx w;
  Cplx dw;
};

struct PathSolution {
  std::vector<Cplx> nodes;
  std::vector<WState> values;
  double tolerance = 0.0;
};

struct ReconstructionFrame {
  Cplx z0;
  WState u1;
  WState u2;

  Cplx wronskian() const { return u1.w * u2.dw - u1.dw * u2.w; }
  /// Throws DegenerateFrame when |W| < 1e-12.
  void validate() const;
};

inline constexpr double kDefaultOdeTolerance = 1e-12;

/// DOPRI5 along the polyline; values are reported on the vertices refined to the a-priori step bound.
PathSolution solve_ivp_along(const SchwarzianODE& ode, std::span<const Cplx> path, WState init,
                             double tol = kDefaultOdeTolerance);

/// f(z) = u1(z) / u2(z), both solved along z0 -> z.
class ReconstructedFunction {
 public:
  ReconstructedFunction(SchwarzianODE ode, ReconstructionFrame frame, double tol = kDefaultOdeTolerance);

  ExtComplex operator()(Cplx z) const;
  MeroFn as_function() const;
  /// The polyline actually used to reach z (straight, or with one midpoint detour).
  std::vector<Cplx> path_to(Cplx z) const;
  const ReconstructionFrame& frame() const { return frame_; }

 private:
  SchwarzianODE ode_;
  ReconstructionFrame frame_;
  double tol_;
};

ReconstructedFunction reconstruct_from_schwarzian(const SchwarzianODE& ode, const ReconstructionFrame& frame,
                                                  double tol = kDefaultOdeTolerance);

/// max |W - W(z0)| / |W(z0)| over the shared nodes.
double wronskian_drift(const PathSolution& sol1, const PathSolution& sol2);

/// Frame with u2 = f'^(-1/2), u1 = f u2 at z0, so that u1 / u2 matches f to second order.
ReconstructionFrame frame_from_function(const RationalFunction& f, Cplx z0);

struct MeromorphicRungeResult {
  ReconstructedFunction approximant;
  ApproximationReport report;
};

MeromorphicRungeResult meromorphic_lu_runge(const RationalFunction& f, const CompactRegion& region, double eps,
                                            int degree_cap = kDefaultDegreeCap);

/// Contour integral of S(z) (z - center); unchanged by adding functions holomorphic inside the contour.
Cplx obstruction_residue(const RationalFunction& s, const Contour& contour);

}  // namespace univalent
