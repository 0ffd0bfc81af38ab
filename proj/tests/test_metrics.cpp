#include <doctest.h>

#include <cmath>
#include <random>

#include "univalent/error.hpp"
#include "univalent/metrics.hpp"
#include "univalent/moebius.hpp"

using namespace univalent;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

double hyperbolic(Cplx z) { return 2.0 / (1.0 - std::norm(z)); }

}  // namespace

TEST_CASE("canonical densities") {
  CHECK(canonical_density(CanonicalGeometry::Hyperbolic, 0.0) == 2.0);
  CHECK(canonical_density(CanonicalGeometry::Spherical, 1.0) == 1.0);
  CHECK(canonical_density(CanonicalGeometry::Euclidean, Cplx(5, 5)) == 1.0);
  CHECK(kind_of([] { canonical_density(CanonicalGeometry::Hyperbolic, 1.0); }) == ErrorKind::OutsideDisk);
}

TEST_CASE("curvature of the canonical models") {
  const ClosedDisk k{0.0, 0.8};
  auto hyp = curvature(MetricDensity::sample(hyperbolic, k, 0.005), -1.0);
  CHECK(hyp.max_abs_deviation_from_c <= 1e-3);
  auto euc = curvature(MetricDensity::sample([](Cplx) { return 1.0; }, k, 0.005), 0.0);
  CHECK(euc.max_abs_deviation_from_c <= 1e-6);
  auto sph = curvature(MetricDensity::sample([](Cplx z) { return 2.0 / (1.0 + std::norm(z)); }, k, 0.005), 1.0);
  CHECK(sph.max_abs_deviation_from_c <= 1e-3);
  // e^{Re z}: log is harmonic, flat
  auto flat = curvature(MetricDensity::sample([](Cplx z) { return std::exp(z.real()); }, k, 0.005), 0.0);
  CHECK(flat.max_abs_deviation_from_c <= 1e-6);
  auto rich = curvature(MetricDensity::sample(hyperbolic, k, 0.01), -1.0, true);
  CHECK(rich.max_abs_deviation_from_c <= hyp.max_abs_deviation_from_c);
  CHECK(kind_of([] { curvature(MetricDensity::sample(hyperbolic, {0.0, 0.005}, 0.005)); }) ==
        ErrorKind::InsufficientInterior);
}

TEST_CASE("scaling identity") {
  const ClosedDisk k{0.0, 0.7};
  auto base = MetricDensity::sample(hyperbolic, k, 0.005);
  auto kb = curvature(base);
  for (double s : {0.5, 2.0, 3.0}) {
    auto ks = curvature(scale_density(base, s));
    double worst = 0.0;
    for (int j = 0; j < kb.grid.ny; ++j) {
      for (int i = 0; i < kb.grid.nx; ++i) {
        if (!std::isnan(kb.at(i, j))) worst = std::max(worst, std::abs(ks.at(i, j) - kb.at(i, j) / (s * s)));
      }
    }
    CHECK(worst <= 5e-3);
  }
  CHECK(kind_of([&] { MetricDensity(base.grid(), std::vector<double>(base.values().size(), -1.0), base.mask()); }) ==
        ErrorKind::NonPositiveTarget);
}

TEST_CASE("pullback by disk automorphisms") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int n = 0; n < 10; ++n) {
    MoebiusMap phi = MoebiusMap::disk_automorphism(Cplx(u(rng), u(rng)), 6.0 * u(rng));
    DensityFn pulled = pullback(hyperbolic, [&](Cplx z) { return phi(z).value(); },
                                [&](Cplx z) { return phi.derivative(z); });
    for (Cplx z : {Cplx(0.1, 0.2), Cplx(-0.6, 0.3), Cplx(0.0, -0.8)}) {
      CHECK(std::abs(pulled(z) - hyperbolic(z)) <= 1e-12 * hyperbolic(z));
    }
    auto kp = curvature(MetricDensity::sample(pulled, {0.0, 0.7}, 0.005), -1.0);
    CHECK(kp.max_abs_deviation_from_c <= 5e-3);
  }
  DensityFn canonical = [](Cplx z) { return canonical_density(CanonicalGeometry::Hyperbolic, z); };
  DensityFn escape = pullback(canonical, [](Cplx z) { return 2.0 * z; }, [](Cplx) { return Cplx(2.0); });
  CHECK(kind_of([&] { escape(0.6); }) == ErrorKind::RangeEscape);
  DensityFn crit = pullback(hyperbolic, [](Cplx z) { return z * z; }, [](Cplx z) { return 2.0 * z; });
  CHECK(kind_of([&] { crit(0.0); }) == ErrorKind::CriticalPoint);
}

TEST_CASE("Liouville construction") {
  // f = z/2 into the disk: density 2 * (1/2) / (1 - |z|^2/4)
  RationalFunction half(Polynomial{0.0, 0.5});
  auto l = liouville_construct(half, CanonicalGeometry::Hyperbolic, {0.0, 1.0}, 0.01);
  CHECK(curvature(l, -1.0).max_abs_deviation_from_c <= 1e-3);
  DensityFn d = liouville_density(half, CanonicalGeometry::Hyperbolic);
  CHECK(std::abs(d(Cplx(0.4, 0.2)) - 1.0 / (1.0 - std::norm(Cplx(0.4, 0.2)) / 4.0)) < 1e-14);

  auto sph = liouville_construct(RationalFunction(Polynomial{1.0}, Polynomial{0.0, 1.0}), CanonicalGeometry::Spherical,
                                 {0.0, 1.0}, 0.005);
  CHECK(curvature(sph, 1.0).max_abs_deviation_from_c <= 1e-3);

  auto ex = liouville_construct([](Cplx z) { return std::exp(z); }, CanonicalGeometry::Euclidean, {0.0, 1.0}, 0.01);
  CHECK(curvature(ex, 0.0).max_abs_deviation_from_c <= 1e-5);
  CHECK(kind_of([] {
          liouville_construct(RationalFunction(Polynomial{0.0, 2.0}), CanonicalGeometry::Hyperbolic, {0.0, 1.0}, 0.01);
        }) == ErrorKind::RangeEscape);
}

TEST_CASE("harmonic glue") {
  auto r = harmonic_glue([](Cplx z) { return std::exp(z.real()); }, [](Cplx) { return 1.0; }, 8.0, {0.0, 1.0}, 1e-3, 40);
  CHECK(r.degree_used <= 40);
  CHECK(r.error_on_k <= 1e-3);
  CHECK(r.error_on_image <= 1e-3);
  // independent check on interior points
  for (Cplx z : {Cplx(0.3, 0.3), Cplx(-0.5, 0.1)}) {
    CHECK(std::abs(std::exp(r.u(z)) - std::exp(z.real())) <= 1e-3);
    CHECK(std::abs(std::exp(r.u(z + 8.0)) - 1.0) <= 1e-3);
  }
  CHECK(kind_of([] { harmonic_glue([](Cplx) { return 1.0; }, [](Cplx) { return 1.0; }, 2.5, {0.0, 1.0}, 1e-3); }) ==
        ErrorKind::Overlap);
}
