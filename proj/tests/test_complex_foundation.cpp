#include <doctest.h>

#include <cmath>

#include "univalent/complex_foundation.hpp"
#include "univalent/error.hpp"

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

}  // namespace

TEST_CASE("chordal distance by the closed formula") {
  CHECK(chordal_distance(0.0, ExtComplex::infinity()) == doctest::Approx(1.0));
  CHECK(chordal_distance(1.0, 1.0) == 0.0);
  CHECK(chordal_distance(0.0, 1.0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(chordal_distance(ExtComplex::infinity(), ExtComplex::infinity()) == 0.0);
  // |a-b| / sqrt((1+|a|^2)(1+|b|^2)) by hand for a = 1+i, b = -2
  double expected = std::abs(Cplx(3, 1)) / std::sqrt(3.0 * 5.0);
  CHECK(chordal_distance(Cplx(1, 1), Cplx(-2, 0)) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("sup distances") {
  auto region = CompactRegion::disk(0.0, 1.0);
  auto samples = boundary_samples(region, 64);
  MeroFn id = [](Cplx z) { return ExtComplex(z); };
  MeroFn shifted = [](Cplx z) { return ExtComplex(z + 1.0); };
  MeroFn square = [](Cplx z) { return ExtComplex(z * z); };
  MeroFn zero = [](Cplx) { return ExtComplex(0.0); };
  MeroFn inv = [](Cplx z) { return ExtComplex(1.0 / z); };
  MeroFn inf = [](Cplx) { return ExtComplex::infinity(); };
  CHECK(sup_distance(id, id, samples) == 0.0);
  CHECK(sup_distance(id, shifted, samples) == doctest::Approx(1.0));
  CHECK(sup_distance(square, zero, samples) == doctest::Approx(1.0));
  CHECK(chordal_sup_distance(inv, inv, samples) == 0.0);
  CHECK(chordal_sup_distance(zero, inf, samples) == doctest::Approx(1.0));
  SampleSet one{{Cplx(1.0)}, SampleRole::Boundary, 0.0};
  CHECK(chordal_sup_distance(inv, zero, one) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("trapezoidal contour integrals") {
  Contour unit(0.0, 1.0, 1, 64);
  CHECK(std::abs(contour_integral([](Cplx z) { return 1.0 / z; }, unit) - Cplx(0, 2 * kPi)) < 1e-12);
  CHECK(std::abs(contour_integral([](Cplx z) { return z; }, unit)) < 1e-12);
  CHECK(std::abs(contour_integral([](Cplx z) { return 1.0 / (z * z); }, unit)) < 1e-12);
  // Laurent monomials z^k on |z - 1| = 2: residue only at k = -1
  Contour off(1.0, 2.0, 1, default_node_count(12));
  for (int k = -6; k <= 6; ++k) {
    Cplx got = contour_integral([k](Cplx z) { return std::pow(z - 1.0, k); }, off);
    Cplx expected = k == -1 ? Cplx(0, 2 * kPi) : Cplx(0.0);
    CHECK(std::abs(got - expected) < 1e-12);
  }
}

TEST_CASE("winding numbers") {
  CHECK(winding_number(Contour(0.0, 1.0, 1), 0.0) == 1);
  CHECK(winding_number(Contour(0.0, 1.0, 1), 3.0) == 0);
  CHECK(winding_number(Contour(0.0, 1.0, -1), 0.0) == -1);
  CHECK(kind_of([] { winding_number(Contour(0.0, 1.0, 1), 1.0); }) == ErrorKind::PointOnContour);
  // z^3 - 0.125 has three zeros inside the unit circle
  CHECK(argument_winding([](Cplx z) { return z * z * z - 0.125; }, Contour(0.0, 1.0, 1)) == 3);
  CHECK(argument_winding([](Cplx z) { return std::exp(z); }, Contour(0.0, 1.0, 1)) == 0);
}

TEST_CASE("sample sets") {
  auto disk = CompactRegion::disk(0.0, 1.0);
  auto b = boundary_samples(disk, 64);
  CHECK(b.points.size() == 64);
  for (Cplx z : b.points) CHECK(std::abs(std::abs(z) - 1.0) < 1e-15);
  CHECK(boundary_samples(CompactRegion::annulus(0.0, 0.5, 2.0), 64).points.size() == 128);

  // lattice (0.5 j, 0.5 k) with j^2 + k^2 <= 4
  int expected = 0;
  for (int j = -2; j <= 2; ++j) {
    for (int k = -2; k <= 2; ++k) expected += (j * j + k * k <= 4) ? 1 : 0;
  }
  CHECK(expected == 13);
  CHECK(interior_grid(disk, 0.5).points.size() == static_cast<std::size_t>(expected));

  auto v = validation_samples(disk, 32);
  for (Cplx z : v.points) {
    for (Cplx w : boundary_samples(disk, 32).points) CHECK(std::abs(z - w) > 1e-3);
  }
}

TEST_CASE("region geometry") {
  auto ann = CompactRegion::annulus(0.0, 0.5, 2.0);
  CHECK(ann.contains(1.0));
  CHECK_FALSE(ann.contains(0.1));
  CHECK(ann.holes().size() == 1);
  CHECK_FALSE(ann.complement_connected());
  CHECK(CompactRegion::disk(0.0, 1.0).complement_connected());
  CHECK(kind_of([] { CompactRegion::annulus(0.0, 2.0, 1.0); }) == ErrorKind::InvalidGeometry);
  CHECK(kind_of([] { CompactRegion::disk_union({{0.0, 1.0}, {1.5, 1.0}}); }) == ErrorKind::InvalidGeometry);
  CHECK(kind_of([] { DomainSpec::punctured_plane({0.0}).check_compatible(CompactRegion::disk(0.0, 1.0)); }) ==
        ErrorKind::InvalidGeometry);
}

TEST_CASE("paths and quadrature") {
  Path p = Path::segment(0.0, 1.0).line_to(Cplx(1, 1));
  CHECK(p.length() == doctest::Approx(2.0));
  // integral of 2z along any path from 0 to 1+i is (1+i)^2
  CHECK(std::abs(path_integral([](Cplx z) { return 2.0 * z; }, p) - Cplx(0, 2)) < 1e-13);
  // half circle arc: integral of 1/z is i pi
  Path arc = Path(1.0).arc_by(0.0, kPi);
  CHECK(std::abs(arc.end() - Cplx(-1.0)) < 1e-15);
  CHECK(std::abs(path_integral([](Cplx z) { return 1.0 / z; }, arc) - Cplx(0, kPi)) < 1e-13);

  // routing around a hole keeps a holomorphic-on-the-annulus integral consistent
  std::vector<ClosedDisk> holes{{0.0, 0.5}};
  Path r = route_around(-1.0, 1.0, holes);
  for (Cplx z : r.sample(0.01)) CHECK(std::abs(z) >= 0.5 - 1e-12);
  CHECK(std::abs(path_integral([](Cplx z) { return 3.0 * z * z; }, r) - Cplx(2.0)) < 1e-12);
}

TEST_CASE("unwrapped log") {
  std::vector<Cplx> vals;
  for (int k = 0; k <= 64; ++k) vals.push_back(std::polar(2.0, 2 * kPi * k / 64));
  auto logs = unwrapped_log(vals, std::log(Cplx(2.0)));
  CHECK(std::abs(logs.back() - (std::log(2.0) + Cplx(0, 2 * kPi))) < 1e-13);
  std::vector<Cplx> jump{1.0, -1.0};
  CHECK(kind_of([&] { unwrapped_log(jump, 0.0); }) == ErrorKind::BranchAmbiguity);
}
