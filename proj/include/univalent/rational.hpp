#pragma once

#include <vector>

#include "univalent/polynomial.hpp"

namespace univalent {

/// Quotient of polynomials with monic denominator and common roots cancelled.
class RationalFunction {
 public:
  RationalFunction() : den_(Polynomial::constant(1.0)) {}
  explicit RationalFunction(Polynomial numerator);
  RationalFunction(Polynomial numerator, Polynomial denominator);

  static RationalFunction identity() { return RationalFunction(Polynomial{0.0, 1.0}); }
  static RationalFunction constant(Cplx c) { return RationalFunction(Polynomial::constant(c)); }

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }

  /// Infinity at poles.
  ExtComplex operator()(Cplx z) const;
  /// Value at infinity.
  ExtComplex at_infinity() const;

  bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }
  bool is_polynomial() const { return den_.degree() == 0; }
  std::vector<Cplx> poles() const;
  std::vector<Cplx> zeros() const;

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);

 private:
  void normalize();
  Polynomial num_;
  Polynomial den_;
};

RationalFunction differentiate(const RationalFunction& f);
/// (f''/f')' - (f''/f')^2 / 2, assembled exactly from f = P/Q.
RationalFunction schwarzian(const RationalFunction& f);

}  // namespace univalent
