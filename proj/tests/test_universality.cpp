#include <doctest.h>

#include <cmath>
#include <random>

#include "univalent/error.hpp"
#include "univalent/universality.hpp"

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

RationalFunction exp_taylor(int d) {
  std::vector<Cplx> c;
  double t = 1.0;
  for (int k = 0; k <= d; ++k) {
    c.emplace_back(t);
    t /= k + 1;
  }
  return RationalFunction(Polynomial(c));
}

// First n with the image circle of D(0, r) under the automorphism disjoint from it, from sampled boundary points.
int sampled_runaway(double r, int max_n) {
  for (int n = 1; n <= max_n; ++n) {
    MoebiusMap phi = MoebiusMap::disk_automorphism(1.0 - std::ldexp(1.0, -n));
    double closest = 1e9;
    for (int k = 0; k < 4096; ++k) closest = std::min(closest, std::abs(phi(std::polar(r, 2 * kPi * k / 4096)).value()));
    if (closest > r && std::abs(phi(0.0).value()) > r) return n;
  }
  return -1;
}

}  // namespace

TEST_CASE("run-away indices") {
  CHECK(runaway_index(SelfMapSequence::translations(1.0), CompactRegion::disk(0.0, 1.0), 10) == 3);
  CHECK_FALSE(runaway_index(SelfMapSequence::rotations(0.1, 100), CompactRegion::disk(0.0, 0.5), 100));
  std::vector<Cplx> a;
  std::vector<double> theta;
  for (int n = 1; n <= 20; ++n) {
    a.emplace_back(1.0 - std::ldexp(1.0, -n));
    theta.push_back(0.0);
  }
  auto idx = runaway_index(SelfMapSequence::disk_automorphisms(a, theta), CompactRegion::disk(0.0, 0.5), 20);
  REQUIRE(idx);
  CHECK(*idx == sampled_runaway(0.5, 20));
}

TEST_CASE("injectivity checks") {
  CHECK_FALSE(injectivity_check([](Cplx z) { return z * z; }, CompactRegion::disk(0.0, 1.0)));
  CHECK(injectivity_check([](Cplx z) { return z * z; }, CompactRegion::disk(2.0, 0.5)));
  CHECK(injectivity_check(MoebiusMap(1.0, 2.0, 3.0, 5.0), CompactRegion::disk(0.0, 0.3)));
  CHECK(injectivity_check([](Cplx z) { return std::exp(z); }, CompactRegion::disk(0.0, 1.0)));
  CHECK_FALSE(injectivity_check([](Cplx z) { return std::exp(z); }, CompactRegion::disk(0.0, 4.0)));
}

TEST_CASE("sequence diagnostics") {
  auto d = diagnose_sequence(SelfMapSequence::translations(1.0), {CompactRegion::disk(0.0, 1.0)}, 5);
  REQUIRE(d.regions.size() == 1);
  CHECK(d.regions[0].runaway_index == 3);
  CHECK(d.regions[0].eventually_injective);
}

TEST_CASE("finite-stage universal function") {
  auto single = build_finite_universal({RationalFunction::identity()}, {0.0, 1.0},
                                       SelfMapSequence::translations(8.0), 1e-6);
  CHECK(single.report.target_errors[0] <= 1e-6);

  std::vector<RationalFunction> targets{RationalFunction::identity(), exp_taylor(12),
                                        RationalFunction(Polynomial{1.0}, Polynomial{1.0, -0.1})};
  auto fu = build_finite_universal(targets, {0.0, 1.0}, SelfMapSequence::translations(8.0), 1e-3);
  CHECK(fu.report.univalence_certified);
  REQUIRE(fu.report.stages.size() == 3);
  // direct evaluation of F o phi_n against each target
  for (std::size_t i = 0; i < targets.size(); ++i) {
    CHECK(fu.report.target_errors[i] <= 1e-3);
    CHECK(fu.report.derivative_zero_counts[i] == 0);
    MoebiusMap phi = fu.stage_maps[i];
    for (int k = 0; k < 24; ++k) {
      Cplx z = std::polar(0.9, 2 * kPi * k / 24);
      CHECK(std::abs(fu.map(phi(z).value()) - targets[i](z).value()) <= 1e-3);
    }
  }
  CHECK(kind_of([&] { build_finite_universal(targets, {0.0, 1.0}, SelfMapSequence::translations(1.0), 1e-3); }) ==
        ErrorKind::StagesNotSeparable);
}

TEST_CASE("covering maps") {
  auto psi = covering_map_special("punctured-unit-disk");
  CHECK(std::abs(psi(0.0) - std::exp(-1.0)) <= 1e-14);
  auto id = covering_map_special("unit-disk");
  CHECK(id(Cplx(0.3)) == Cplx(0.3));
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    Cplx z = std::polar(std::sqrt(u(rng)) * 0.999, 2 * kPi * u(rng));
    Cplx w = psi(z);
    CHECK(std::abs(w) < 1.0);
    CHECK(std::abs(w) > 0.0);
    CHECK(std::abs(psi.derivative(z)) > 0.0);
  }
  CHECK(kind_of([] { covering_map_special("annulus"); }) == ErrorKind::UnsupportedDomain);
}

TEST_CASE("metric orbit") {
  auto m = metric_orbit_experiment({RationalFunction::identity()}, CanonicalGeometry::Euclidean, {0.0, 1.0},
                                   SelfMapSequence::translations(8.0), 1e-3);
  CHECK(m.density_errors[0] <= 1e-5);
  CHECK(kind_of([] {
          metric_orbit_experiment({RationalFunction::identity()}, CanonicalGeometry::Hyperbolic, {0.0, 1.0},
                                  SelfMapSequence::translations(8.0), 1e-3);
        }) == ErrorKind::RangeEscape);
}
