#pragma once

// Runge-type approximation by zero-free and locally univalent functions:
// branch factor times exponential fits, Newton matching of period and value
// functionals, and antiderivatives of the matched derivative.

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "univalent/expansion.hpp"
#include "univalent/moebius.hpp"
#include "univalent/rational.hpp"

namespace univalent {

struct ApproximationReport {
  int degree_used = 0;
  double certified_sup_error = 0.0;
  int newton_iterations = 0;
  double final_residual_norm = 0.0;
  int samples_used = 0;
};

/// A factor (z - point)^exponent of the branch part.
struct BranchPoint {
  Cplx point;
  int exponent = 0;
};

/// ((z - anchor) / scale)^power; negative powers are poles at the anchor.
struct PowerTerm {
  Cplx anchor;
  double scale = 1.0;
  int power = 0;
};

/// One correction function w_j entering the exponent as s_j w_j.
class CorrectionFunction {
 public:
  using Form = std::variant<PowerTerm, AnalyticExpansion, HoloFn>;

  CorrectionFunction(Form form, std::string label) : form_(std::move(form)), label_(std::move(label)) {}
  static CorrectionFunction power(Cplx anchor, double scale, int power);

  Cplx operator()(Cplx z) const;
  std::vector<Cplx> operator()(std::span<const Cplx> points) const;
  const std::string& label() const { return label_; }

 private:
  Form form_;
  std::string label_;
};

using CorrectionBasis = std::vector<CorrectionFunction>;

/// B(z) exp(q(z) + sum s_j w_j(z)) with B(z) = prod (z - p_k)^{m_k}; never zero off the branch points.
class ZeroFreeApproximant {
 public:
  ZeroFreeApproximant() = default;
  ZeroFreeApproximant(std::vector<BranchPoint> branch, AnalyticExpansion exp_part);

  Cplx operator()(Cplx z) const;
  std::vector<Cplx> operator()(std::span<const Cplx> points) const;
  /// A logarithm of the value (principal branch of each factor).
  Cplx log_value(Cplx z) const;
  /// q(z) + sum s_j w_j(z).
  Cplx exponent(Cplx z) const;
  Cplx branch_factor(Cplx z) const;

  ZeroFreeApproximant with_corrections(const CorrectionBasis& basis, std::span<const Cplx> s) const;

  const std::vector<BranchPoint>& branch_points() const { return branch_; }
  const AnalyticExpansion& exp_part() const { return exp_part_; }
  const std::vector<std::pair<Cplx, CorrectionFunction>>& corrections() const { return corrections_; }

 private:
  std::vector<BranchPoint> branch_;
  AnalyticExpansion exp_part_;
  std::vector<std::pair<Cplx, CorrectionFunction>> corrections_;
};

/// Contour integral of the approximant must equal target.
struct PeriodFunctional {
  Contour contour;
  Cplx target;
};

/// Path integral of the approximant along a polyline must equal target.
struct ValueGapFunctional {
  Path path;
  Cplx target;
};

using Functional = std::variant<PeriodFunctional, ValueGapFunctional>;

QuadratureRule functional_rule(const Functional& functional);
Cplx functional_target(const Functional& functional);

struct ZeroFreeResult {
  ZeroFreeApproximant approximant;
  ApproximationReport report;
};

inline constexpr int kDefaultDegreeCap = 256;

ZeroFreeResult zero_free_runge(const RationalFunction& g, const CompactRegion& region, const DomainSpec& omega,
                               double eps, int degree_cap = kDefaultDegreeCap);

ZeroFreeResult match_functionals(const ZeroFreeApproximant& base, const CorrectionBasis& basis,
                                 std::span<const Functional> functionals);

/// G(z) = value at the nearest anchor + integral of h along a hole-avoiding path.
class LocallyUnivalentMap {
 public:
  struct Anchor {
    Cplx point;
    Cplx value;
  };

  LocallyUnivalentMap(ZeroFreeApproximant derivative, std::vector<Anchor> anchors, std::vector<ClosedDisk> holes);

  Cplx operator()(Cplx z) const;
  Cplx derivative(Cplx z) const { return h_(z); }
  Cplx base_point() const { return anchors_.front().point; }
  const std::vector<Anchor>& anchors() const { return anchors_; }
  const std::vector<ClosedDisk>& holes() const { return holes_; }
  const ZeroFreeApproximant& derivative_approximant() const { return h_; }
  /// Integral of the derivative along an explicit path.
  Cplx integrate(const Path& path) const;

 private:
  ZeroFreeApproximant h_;
  std::vector<Anchor> anchors_;
  std::vector<ClosedDisk> holes_;
};

struct LocallyUnivalentResult {
  LocallyUnivalentMap map;
  ApproximationReport report;
};

/// Interior grid point nearest the centroid; the fixed base point of the antiderivative.
Cplx base_point(const CompactRegion& region);

LocallyUnivalentResult lu_holomorphic_runge(const RationalFunction& f, const CompactRegion& region,
                                            const DomainSpec& omega, double eps,
                                            int degree_cap = kDefaultDegreeCap);

/// Target g o chart on the disk; the chart keeps g in its own coordinates.
struct GluePiece {
  ClosedDisk disk;
  RationalFunction target;
  MoebiusMap chart;
};

struct GlueResult {
  LocallyUnivalentMap map;
  std::vector<double> piece_errors;
  ApproximationReport report;
};

GlueResult glue_targets(std::span<const GluePiece> pieces, const DomainSpec& omega, double eps,
                        int degree_cap = kDefaultDegreeCap);

}  // namespace univalent
