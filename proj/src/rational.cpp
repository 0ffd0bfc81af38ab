#include "univalent/rational.hpp"

#include <cmath>

#include "univalent/error.hpp"
#include "univalent/roots.hpp"

namespace univalent {

namespace {

// A denominator root r is cancelled when |P(r)| is below this fraction of sum |p_k| |r|^k.
constexpr double kCancelTolerance = 1e-10;

}  // namespace

RationalFunction::RationalFunction(Polynomial numerator)
    : num_(std::move(numerator)), den_(Polynomial::constant(1.0)) {}

RationalFunction::RationalFunction(Polynomial numerator, Polynomial denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  if (den_.is_zero()) throw Error(ErrorKind::InvalidArgument, "denominator is the zero polynomial");
  normalize();
}

void RationalFunction::normalize() {
  if (num_.is_zero()) {
    den_ = Polynomial::constant(1.0);
    return;
  }
  const int k = std::min(num_.low_order(), den_.low_order());
  num_ = num_.strip_z_power(k);
  den_ = den_.strip_z_power(k);

  if (num_.degree() >= 1 && den_.degree() >= 1) {
    // Multiple roots split by ~sqrt(eps) under rounding, so they are compared as refined cluster centers.
    const auto num_clusters = root_clusters(num_);
    std::vector<Cplx> common;
    for (const auto& dc : root_clusters(den_)) {
      const RootCluster* match = nullptr;
      for (const auto& nc : num_clusters) {
        if (std::abs(nc.center - dc.center) <= kCancelTolerance * (1.0 + std::abs(dc.center))) match = &nc;
      }
      if (match) {
        const Cplx r = 0.5 * (dc.center + match->center);
        common.insert(common.end(), std::min(match->multiplicity, dc.multiplicity), r);
      } else if (std::abs(num_(dc.center)) <= kCancelTolerance * num_.magnitude_bound(dc.center)) {
        common.push_back(dc.center);
      }
    }
    if (static_cast<int>(common.size()) > num_.degree()) common.resize(num_.degree());
    if (!common.empty()) {
      const Polynomial g = Polynomial::from_roots(common);
      num_ = divide_factor(num_, g);
      den_ = divide_factor(den_, g);
    }
  }
  const Cplx lead = den_.leading();
  if (lead != 1.0) {
    num_ = (1.0 / lead) * num_;
    den_ = den_.monic();
  }
}

ExtComplex RationalFunction::operator()(Cplx z) const {
  const Cplx d = den_(z);
  if (d == 0.0) return ExtComplex::infinity();
  const Cplx v = num_(z) / d;
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return ExtComplex::infinity();
  return v;
}

ExtComplex RationalFunction::at_infinity() const {
  if (num_.degree() > den_.degree()) return ExtComplex::infinity();
  if (num_.degree() < den_.degree()) return Cplx(0.0);
  return num_.leading() / den_.leading();
}

std::vector<Cplx> RationalFunction::poles() const {
  if (den_.degree() < 1) return {};
  return roots(den_);
}

std::vector<Cplx> RationalFunction::zeros() const {
  if (num_.degree() < 1) return {};
  return roots(num_);
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
  return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
  if (a.den_ == b.den_) return RationalFunction(a.num_ - b.num_, a.den_);
  return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  if (b.num_.is_zero()) throw Error(ErrorKind::InvalidArgument, "division by the zero function");
  return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
}

RationalFunction differentiate(const RationalFunction& f) {
  const Polynomial& p = f.numerator();
  const Polynomial& q = f.denominator();
  if (q.degree() == 0) return RationalFunction(p.derivative(), q);
  return RationalFunction(p.derivative() * q - p * q.derivative(), q * q);
}

RationalFunction schwarzian(const RationalFunction& f) {
  if (f.is_constant()) throw Error(ErrorKind::ConstantFunction, "Schwarzian of a constant");
  const Polynomial& p = f.numerator();
  const Polynomial& q = f.denominator();
  // f' = W / Q^2 and S = M / (W^2 Q); one factor of Q cancels symbolically
  const Polynomial w = p.derivative() * q - p * q.derivative();
  if (w.is_zero()) throw Error(ErrorKind::ConstantFunction, "Schwarzian of a constant");
  const Polynomial w1 = w.derivative(), w2 = w1.derivative();
  const Polynomial q1 = q.derivative(), q2 = q1.derivative();
  const Polynomial w_sq = w * w;
  const Polynomial m = q * (w2 * w - Cplx(1.5) * (w1 * w1)) - Cplx(2.0) * (w_sq * q2) + Cplx(2.0) * (w * w1 * q1);
  return RationalFunction(m, w_sq * q);
}

}  // namespace univalent
