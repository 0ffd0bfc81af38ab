#include "univalent/moebius.hpp"

#include <algorithm>
#include <cmath>

#include "univalent/error.hpp"

namespace univalent {

namespace {

constexpr double kMinDeterminant = 1e-14;

Cplx circumcenter(Cplx p, Cplx q, Cplx r) {
  // Solve |z - p| = |z - q| = |z - r| in coordinates relative to p.
  const Cplx u = q - p, v = r - p;
  const double det = 2.0 * (u.real() * v.imag() - u.imag() * v.real());
  if (det == 0.0) throw Error(ErrorKind::InvalidGeometry, "collinear image points");
  const double nu = std::norm(u), nv = std::norm(v);
  const double x = (v.imag() * nu - u.imag() * nv) / det;
  const double y = (u.real() * nv - v.real() * nu) / det;
  return p + Cplx(x, y);
}

}  // namespace

MoebiusMap::MoebiusMap(Cplx a, Cplx b, Cplx c, Cplx d) {
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  if (!(scale > 0.0) || !std::isfinite(scale)) throw Error(ErrorKind::InvalidArgument, "bad Moebius coefficients");
  a_ = a / scale;
  b_ = b / scale;
  c_ = c / scale;
  d_ = d / scale;
  if (std::abs(determinant()) < kMinDeterminant) {
    throw Error(ErrorKind::InvalidArgument, "Moebius map is degenerate (ad - bc ~ 0)");
  }
}

MoebiusMap MoebiusMap::disk_automorphism(Cplx a, double theta) {
  if (!(std::abs(a) < 1.0)) throw Error(ErrorKind::InvalidArgument, "disk automorphism needs |a| < 1");
  const Cplx rot = std::polar(1.0, theta);
  return {rot, rot * a, std::conj(a), 1.0};
}

MoebiusMap MoebiusMap::from_three_points(Cplx z1, Cplx z2, Cplx z3, Cplx w1, Cplx w2, Cplx w3) {
  // cross-ratio map sending (x1, x2, x3) to (0, infinity, 1)
  auto normalizer = [](Cplx x1, Cplx x2, Cplx x3) {
    return MoebiusMap(x3 - x2, -x1 * (x3 - x2), x3 - x1, -x2 * (x3 - x1));
  };
  return normalizer(w1, w2, w3).inverse().compose(normalizer(z1, z2, z3));
}

ExtComplex MoebiusMap::operator()(ExtComplex z) const {
  if (z.is_infinite()) {
    if (c_ == 0.0) return ExtComplex::infinity();
    return a_ / c_;
  }
  const Cplx den = c_ * z.value() + d_;
  if (den == 0.0) return ExtComplex::infinity();
  return (a_ * z.value() + b_) / den;
}

Cplx MoebiusMap::derivative(Cplx z) const {
  const Cplx den = c_ * z + d_;
  return determinant() / (den * den);
}

ExtComplex MoebiusMap::pole() const {
  if (c_ == 0.0) return ExtComplex::infinity();
  return -d_ / c_;
}

MoebiusMap MoebiusMap::inverse() const { return {d_, -b_, -c_, a_}; }

MoebiusMap MoebiusMap::compose(const MoebiusMap& in) const {
  return {a_ * in.a_ + b_ * in.c_, a_ * in.b_ + b_ * in.d_, c_ * in.a_ + d_ * in.c_, c_ * in.b_ + d_ * in.d_};
}

RationalFunction MoebiusMap::as_rational() const {
  return RationalFunction(Polynomial{b_, a_}, Polynomial{d_, c_});
}

std::optional<ClosedDisk> MoebiusMap::image_of_disk(const ClosedDisk& disk) const {
  const ExtComplex p = pole();
  if (p.is_finite() && std::abs(p.value() - disk.center) <= disk.radius * (1.0 + 1e-12)) return std::nullopt;
  const Cplx w0 = (*this)(disk.center + disk.radius).value();
  const Cplx w1 = (*this)(disk.center + Cplx(0.0, disk.radius)).value();
  const Cplx w2 = (*this)(disk.center - disk.radius).value();
  const Cplx c = circumcenter(w0, w1, w2);
  return ClosedDisk{c, (std::abs(w0 - c) + std::abs(w1 - c) + std::abs(w2 - c)) / 3.0};
}

RationalFunction compose_moebius(const MoebiusMap& t, const RationalFunction& f) {
  const Polynomial& p = f.numerator();
  const Polynomial& q = f.denominator();
  return RationalFunction(t.a() * p + t.b() * q, t.c() * p + t.d() * q);
}

RationalFunction precompose_moebius(const RationalFunction& f, const MoebiusMap& t) {
  const Polynomial num_lin{t.b(), t.a()}, den_lin{t.d(), t.c()};
  const int n = std::max(f.numerator().degree(), f.denominator().degree());
  // powers of the two linear factors
  std::vector<Polynomial> up(n + 1), down(n + 1);
  up[0] = down[0] = Polynomial::constant(1.0);
  for (int k = 1; k <= n; ++k) {
    up[k] = up[k - 1] * num_lin;
    down[k] = down[k - 1] * den_lin;
  }
  auto homogenize = [&](const Polynomial& p) {
    Polynomial acc;
    for (int i = 0; i <= p.degree(); ++i) {
      if (p[i] != 0.0) acc = acc + p[i] * (up[i] * down[n - i]);
    }
    return acc;
  };
  return RationalFunction(homogenize(f.numerator()), homogenize(f.denominator()));
}

}  // namespace univalent
