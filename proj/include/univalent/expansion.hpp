#pragma once

// Least-squares fitting of analytic data on circles. Polynomial and inverse-power
// bases are carried as Vandermonde-with-Arnoldi recurrences, which stay well
// conditioned at degrees where monomial columns would not.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "univalent/complex_foundation.hpp"

namespace univalent {

enum class BlockKind {
  Polynomial,    // t^0 .. t^d with t = (z - center) / scale
  InversePower,  // t^1 .. t^d with t = scale / (z - center)
};

class ArnoldiBlock {
 public:
  ArnoldiBlock(BlockKind kind, Cplx center, double scale, int degree, std::span<const Cplx> points);

  BlockKind kind() const { return kind_; }
  Cplx center() const { return center_; }
  double scale() const { return scale_; }
  int degree() const { return degree_; }
  int columns() const { return kind_ == BlockKind::Polynomial ? degree_ + 1 : degree_; }

  /// Basis values, one row per point.
  Eigen::MatrixXcd evaluate(std::span<const Cplx> points) const;
  /// Writes columns() values for a single point.
  void evaluate(Cplx z, Cplx* out) const;

 private:
  Cplx variable(Cplx z) const;
  BlockKind kind_;
  Cplx center_;
  double scale_;
  int degree_;
  Eigen::MatrixXcd h_;  // (degree + 1) x degree Hessenberg recurrence
};

struct LaurentSpec {
  Cplx pole;
  double scale = 1.0;
  int degree = 0;
};

/// Polynomial part of the given degree (negative for none) plus inverse-power parts.
struct BasisSpec {
  Cplx center;
  double scale = 1.0;
  int degree = 0;
  std::vector<LaurentSpec> laurent;

  int size() const;
};

class ExpansionBasis {
 public:
  ExpansionBasis() = default;
  ExpansionBasis(const BasisSpec& spec, std::span<const Cplx> points);

  int size() const;
  int degree() const;
  const std::vector<ArnoldiBlock>& blocks() const { return blocks_; }
  Eigen::MatrixXcd design(std::span<const Cplx> points) const;
  Eigen::RowVectorXcd row(Cplx z) const;

 private:
  std::vector<ArnoldiBlock> blocks_;
};

/// sum of coefficient * basis function; the zero function when default constructed.
class AnalyticExpansion {
 public:
  AnalyticExpansion() = default;
  AnalyticExpansion(ExpansionBasis basis, Eigen::VectorXcd coefficients);

  Cplx operator()(Cplx z) const;
  std::vector<Cplx> operator()(std::span<const Cplx> points) const;
  bool empty() const { return coefficients_.size() == 0; }
  int size() const { return static_cast<int>(coefficients_.size()); }
  int degree() const { return basis_.degree(); }
  const ExpansionBasis& basis() const { return basis_; }
  const Eigen::VectorXcd& coefficients() const { return coefficients_; }

 private:
  ExpansionBasis basis_;
  Eigen::VectorXcd coefficients_;
};

struct LsFit {
  AnalyticExpansion expansion;
  double certified_sup_error = 0.0;
  double condition_number = 1.0;
  int samples_used = 0;
};

/// Column-scaled QR least squares; the error is measured on the check set.
LsFit fit_analytic_ls(std::span<const Cplx> points, std::span<const Cplx> values, const BasisSpec& spec,
                      std::span<const Cplx> check_points, std::span<const Cplx> check_values);

/// Fits the boundary trace of target, certifying on validation_samples(region, n).
LsFit fit_analytic_ls(const CompactRegion& region, const HoloFn& target, const BasisSpec& spec,
                      int n_per_component);

/// Least squares for Re(expansion) against real data; Im of the constant is fixed to 0.
LsFit fit_real_part_ls(std::span<const Cplx> points, std::span<const double> values, const BasisSpec& spec,
                       std::span<const Cplx> check_points, std::span<const double> check_values);

/// Samples per boundary circle giving at least six rows per unknown, never below 64.
int samples_per_circle(int basis_size, int circles);

}  // namespace univalent
