#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "univalent/complex_foundation.hpp"

namespace univalent {

/// Dense complex polynomial, coefficients in ascending degree.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Cplx> coefficients);
  Polynomial(std::initializer_list<Cplx> coefficients) : Polynomial(std::vector<Cplx>(coefficients)) {}

  static Polynomial constant(Cplx c);
  static Polynomial monomial(int k, Cplx c = 1.0);
  /// lead * prod (z - r).
  static Polynomial from_roots(std::span<const Cplx> roots, Cplx lead = 1.0);
  /// Parses "re,im;re,im;..." in ascending degree.
  static Polynomial parse(std::string_view text);

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Cplx>& coefficients() const { return c_; }
  Cplx operator[](int k) const { return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : Cplx(0.0); }
  Cplx leading() const { return c_.empty() ? Cplx(0.0) : c_.back(); }
  double max_abs_coefficient() const;

  Cplx operator()(Cplx z) const;
  /// sum |a_k| |z|^k, the natural scale for a residual |p(z)|.
  double magnitude_bound(Cplx z) const;
  Polynomial derivative() const;
  Polynomial monic() const;
  /// Drops the factor z^k with k the index of the first nonzero coefficient.
  Polynomial strip_z_power(int k) const;
  int low_order() const;
  std::string to_string() const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Cplx s, const Polynomial& p);
  friend Polynomial operator-(const Polynomial& p);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

 private:
  void trim();
  std::vector<Cplx> c_;
};

/// Quotient and remainder of a / b.
std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b);
/// Divides by (z - r), discarding the remainder.
Polynomial deflate(const Polynomial& p, Cplx r);
/// The q minimizing the coefficient residual of q * g - p; stable division by an approximate factor.
Polynomial divide_factor(const Polynomial& p, const Polynomial& g);

}  // namespace univalent
