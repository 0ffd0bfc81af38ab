#pragma once

#include <optional>

#include "univalent/rational.hpp"

namespace univalent {

/// z -> (a z + b) / (c z + d), scaled so the largest coefficient has modulus 1.
class MoebiusMap {
 public:
  MoebiusMap() : MoebiusMap(1.0, 0.0, 0.0, 1.0) {}
  MoebiusMap(Cplx a, Cplx b, Cplx c, Cplx d);

  static MoebiusMap identity() { return {}; }
  static MoebiusMap translation(Cplx t) { return {1.0, t, 0.0, 1.0}; }
  static MoebiusMap rotation(double theta) { return {std::polar(1.0, theta), 0.0, 0.0, 1.0}; }
  /// e^{i theta} (z + a) / (1 + conj(a) z), |a| < 1; sends 0 to e^{i theta} a.
  static MoebiusMap disk_automorphism(Cplx a, double theta = 0.0);
  /// The map sending z1, z2, z3 to w1, w2, w3 (all finite, each triple distinct).
  static MoebiusMap from_three_points(Cplx z1, Cplx z2, Cplx z3, Cplx w1, Cplx w2, Cplx w3);

  Cplx a() const { return a_; }
  Cplx b() const { return b_; }
  Cplx c() const { return c_; }
  Cplx d() const { return d_; }
  Cplx determinant() const { return a_ * d_ - b_ * c_; }

  ExtComplex operator()(ExtComplex z) const;
  Cplx derivative(Cplx z) const;
  /// The preimage of infinity.
  ExtComplex pole() const;

  MoebiusMap inverse() const;
  /// (*this) o inner.
  MoebiusMap compose(const MoebiusMap& inner) const;
  RationalFunction as_rational() const;

  /// Image of a closed disk when it is again a bounded closed disk (the pole lies outside).
  std::optional<ClosedDisk> image_of_disk(const ClosedDisk& disk) const;

 private:
  Cplx a_, b_, c_, d_;
};

/// T o f.
RationalFunction compose_moebius(const MoebiusMap& t, const RationalFunction& f);
/// f o T.
RationalFunction precompose_moebius(const RationalFunction& f, const MoebiusMap& t);

}  // namespace univalent
