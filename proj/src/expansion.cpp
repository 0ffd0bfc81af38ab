#include "univalent/expansion.hpp"

#include <algorithm>
#include <cmath>

#include "univalent/error.hpp"

namespace univalent {

namespace {

constexpr double kMaxCondition = 1e10;

bool finite(Cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

// ---------------------------------------------------------------------------
// ArnoldiBlock

ArnoldiBlock::ArnoldiBlock(BlockKind kind, Cplx center, double scale, int degree, std::span<const Cplx> points)
    : kind_(kind), center_(center), scale_(scale), degree_(degree) {
  if (!(scale > 0.0)) throw Error(ErrorKind::InvalidArgument, "basis scale must be positive");
  if (degree < 0 || (kind == BlockKind::InversePower && degree < 1)) {
    throw Error(ErrorKind::InvalidArgument, "bad basis degree");
  }
  const Eigen::Index m = static_cast<Eigen::Index>(points.size());
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "Arnoldi basis needs sample points");
  Eigen::VectorXcd t(m);
  for (Eigen::Index i = 0; i < m; ++i) t(i) = variable(points[i]);

  const double sm = std::sqrt(static_cast<double>(m));
  Eigen::MatrixXcd q(m, degree + 1);
  q.col(0).setOnes();
  h_ = Eigen::MatrixXcd::Zero(degree + 1, degree);
  for (int k = 1; k <= degree; ++k) {
    Eigen::VectorXcd v = t.cwiseProduct(q.col(k - 1));
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < k; ++j) {
        const Cplx c = q.col(j).dot(v) / static_cast<double>(m);
        h_(j, k - 1) += c;
        v -= c * q.col(j);
      }
    }
    const double nv = v.norm() / sm;
    if (!(nv > 0.0) || !std::isfinite(nv)) {
      throw Error(ErrorKind::IllConditioned, "Arnoldi recurrence broke down; too few distinct samples");
    }
    h_(k, k - 1) = nv;
    q.col(k) = v / nv;
  }
}

Cplx ArnoldiBlock::variable(Cplx z) const {
  return kind_ == BlockKind::Polynomial ? (z - center_) / scale_ : scale_ / (z - center_);
}

void ArnoldiBlock::evaluate(Cplx z, Cplx* out) const {
  const Cplx t = variable(z);
  // q_k for k = 0..degree, written in place into a small buffer
  std::vector<Cplx> q(degree_ + 1);
  q[0] = 1.0;
  for (int k = 1; k <= degree_; ++k) {
    Cplx v = t * q[k - 1];
    for (int j = 0; j < k; ++j) v -= h_(j, k - 1) * q[j];
    q[k] = v / h_(k, k - 1).real();
  }
  const int first = kind_ == BlockKind::Polynomial ? 0 : 1;
  for (int k = first; k <= degree_; ++k) out[k - first] = q[k];
}

Eigen::MatrixXcd ArnoldiBlock::evaluate(std::span<const Cplx> points) const {
  const Eigen::Index m = static_cast<Eigen::Index>(points.size());
  Eigen::VectorXcd t(m);
  for (Eigen::Index i = 0; i < m; ++i) t(i) = variable(points[i]);
  Eigen::MatrixXcd q(m, degree_ + 1);
  q.col(0).setOnes();
  for (int k = 1; k <= degree_; ++k) {
    Eigen::VectorXcd v = t.cwiseProduct(q.col(k - 1));
    for (int j = 0; j < k; ++j) v -= h_(j, k - 1) * q.col(j);
    q.col(k) = v / h_(k, k - 1).real();
  }
  if (kind_ == BlockKind::Polynomial) return q;
  return q.rightCols(degree_);
}

// ---------------------------------------------------------------------------
// Basis and expansion

int BasisSpec::size() const {
  int n = degree >= 0 ? degree + 1 : 0;
  for (const auto& l : laurent) n += l.degree;
  return n;
}

ExpansionBasis::ExpansionBasis(const BasisSpec& spec, std::span<const Cplx> points) {
  if (spec.degree >= 0) blocks_.emplace_back(BlockKind::Polynomial, spec.center, spec.scale, spec.degree, points);
  for (const auto& l : spec.laurent) {
    if (l.degree > 0) blocks_.emplace_back(BlockKind::InversePower, l.pole, l.scale, l.degree, points);
  }
}

int ExpansionBasis::size() const {
  int n = 0;
  for (const auto& b : blocks_) n += b.columns();
  return n;
}

int ExpansionBasis::degree() const {
  int d = 0;
  for (const auto& b : blocks_) d = std::max(d, b.degree());
  return d;
}

Eigen::MatrixXcd ExpansionBasis::design(std::span<const Cplx> points) const {
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(points.size()), size());
  Eigen::Index col = 0;
  for (const auto& b : blocks_) {
    a.middleCols(col, b.columns()) = b.evaluate(points);
    col += b.columns();
  }
  return a;
}

Eigen::RowVectorXcd ExpansionBasis::row(Cplx z) const {
  Eigen::RowVectorXcd r(size());
  Eigen::Index col = 0;
  for (const auto& b : blocks_) {
    b.evaluate(z, r.data() + col);
    col += b.columns();
  }
  return r;
}

AnalyticExpansion::AnalyticExpansion(ExpansionBasis basis, Eigen::VectorXcd coefficients)
    : basis_(std::move(basis)), coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != basis_.size()) throw Error(ErrorKind::InvalidArgument, "coefficient count mismatch");
}

Cplx AnalyticExpansion::operator()(Cplx z) const {
  if (empty()) return 0.0;
  return basis_.row(z) * coefficients_;
}

std::vector<Cplx> AnalyticExpansion::operator()(std::span<const Cplx> points) const {
  std::vector<Cplx> out(points.size(), Cplx(0.0));
  if (empty() || points.empty()) return out;
  const Eigen::VectorXcd v = basis_.design(points) * coefficients_;
  std::copy(v.data(), v.data() + v.size(), out.begin());
  return out;
}

// ---------------------------------------------------------------------------
// Fitting

namespace {

template <typename Matrix, typename Vector>
auto solve_scaled(const Matrix& a, const Vector& b) {
  Eigen::VectorXd scale(a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const double n = a.col(j).norm();
    scale(j) = n > 0.0 ? 1.0 / n : 1.0;
  }
  const Matrix as = a * scale.asDiagonal();
  Eigen::ColPivHouseholderQR<Matrix> qr(as);
  const auto diag = qr.matrixR().diagonal().cwiseAbs();
  const double cond = diag.minCoeff() > 0.0 ? diag.maxCoeff() / diag.minCoeff() : INFINITY;
  if (!(cond <= kMaxCondition)) {
    throw Error(ErrorKind::IllConditioned, "least-squares matrix condition estimate exceeds 1e10");
  }
  Vector x = qr.solve(b);
  x = scale.asDiagonal() * x;
  return std::make_pair(x, cond);
}

}  // namespace

LsFit fit_analytic_ls(std::span<const Cplx> points, std::span<const Cplx> values, const BasisSpec& spec,
                      std::span<const Cplx> check_points, std::span<const Cplx> check_values) {
  if (points.size() != values.size() || check_points.size() != check_values.size()) {
    throw Error(ErrorKind::InvalidArgument, "sample and value counts differ");
  }
  if (static_cast<int>(points.size()) < 4 * spec.size()) {
    throw Error(ErrorKind::InvalidArgument, "need at least four samples per basis function");
  }
  for (Cplx v : values) {
    if (!finite(v)) throw Error(ErrorKind::TargetNonFinite, "target value not finite");
  }
  ExpansionBasis basis(spec, points);
  const Eigen::MatrixXcd a = basis.design(points);
  const Eigen::VectorXcd b = Eigen::Map<const Eigen::VectorXcd>(values.data(), static_cast<Eigen::Index>(values.size()));
  auto [x, cond] = solve_scaled(a, b);

  LsFit fit;
  fit.expansion = AnalyticExpansion(std::move(basis), x);
  fit.condition_number = cond;
  fit.samples_used = static_cast<int>(points.size());
  const auto approx = fit.expansion(check_points.empty() ? points : check_points);
  const auto& ref = check_points.empty() ? values : check_values;
  double err = 0.0;
  for (std::size_t i = 0; i < approx.size(); ++i) err = std::max(err, std::abs(approx[i] - ref[i]));
  fit.certified_sup_error = err;
  return fit;
}

LsFit fit_analytic_ls(const CompactRegion& region, const HoloFn& target, const BasisSpec& spec,
                      int n_per_component) {
  const auto fit_set = boundary_samples(region, n_per_component);
  const auto check_set = validation_samples(region, n_per_component);
  std::vector<Cplx> fv, cv;
  for (Cplx z : fit_set.points) fv.push_back(target(z));
  for (Cplx z : check_set.points) cv.push_back(target(z));
  for (Cplx v : cv) {
    if (!finite(v)) throw Error(ErrorKind::TargetNonFinite, "target value not finite");
  }
  return fit_analytic_ls(fit_set.points, fv, spec, check_set.points, cv);
}

LsFit fit_real_part_ls(std::span<const Cplx> points, std::span<const double> values, const BasisSpec& spec,
                       std::span<const Cplx> check_points, std::span<const double> check_values) {
  if (points.size() != values.size() || check_points.size() != check_values.size()) {
    throw Error(ErrorKind::InvalidArgument, "sample and value counts differ");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::TargetNonFinite, "target value not finite");
  }
  ExpansionBasis basis(spec, points);
  const Eigen::MatrixXcd a = basis.design(points);
  const Eigen::Index n = a.cols();
  // columns Re q_k and -Im q_k; the imaginary part of the constant column vanishes identically
  std::vector<Eigen::Index> im_cols;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (a.col(j).imag().norm() > 1e-14 * a.col(j).norm()) im_cols.push_back(j);
  }
  const Eigen::Index ncols = n + static_cast<Eigen::Index>(im_cols.size());
  if (static_cast<Eigen::Index>(points.size()) < 2 * ncols) {
    throw Error(ErrorKind::InvalidArgument, "need at least two real samples per real unknown");
  }
  Eigen::MatrixXd ar(a.rows(), ncols);
  ar.leftCols(n) = a.real();
  for (std::size_t k = 0; k < im_cols.size(); ++k) ar.col(n + k) = -a.col(im_cols[k]).imag();
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  auto [xr, cond] = solve_scaled(ar, b);

  Eigen::VectorXcd x = xr.head(n).cast<Cplx>();
  for (std::size_t k = 0; k < im_cols.size(); ++k) x(im_cols[k]) += Cplx(0.0, xr(n + k));

  LsFit fit;
  fit.expansion = AnalyticExpansion(std::move(basis), x);
  fit.condition_number = cond;
  fit.samples_used = static_cast<int>(points.size());
  const auto approx = fit.expansion(check_points.empty() ? points : check_points);
  double err = 0.0;
  for (std::size_t i = 0; i < approx.size(); ++i) {
    const double ref = check_points.empty() ? values[i] : check_values[i];
    err = std::max(err, std::abs(approx[i].real() - ref));
  }
  fit.certified_sup_error = err;
  return fit;
}

int samples_per_circle(int basis_size, int circles) {
  const int n = (6 * basis_size + circles - 1) / std::max(circles, 1);
  return std::max(64, (n + 7) / 8 * 8);
}

}  // namespace univalent
