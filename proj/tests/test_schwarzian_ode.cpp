#include <doctest.h>

#include <cmath>

#include "univalent/error.hpp"
#include "univalent/moebius.hpp"
#include "univalent/schwarzian_ode.hpp"

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

std::vector<Cplx> line(Cplx a, Cplx b) { return {a, b}; }

// Schwarzian of an evaluator by central differences.
Cplx sampled_schwarzian(const std::function<Cplx(Cplx)>& f, Cplx z, double h = 0.02) {
  auto d = [&](int k) { return f(z + double(k) * h); };
  Cplx d1 = (d(-2) - 8.0 * d(-1) + 8.0 * d(1) - d(2)) / (12 * h);
  Cplx d2 = (-d(-2) + 16.0 * d(-1) - 30.0 * d(0) + 16.0 * d(1) - d(2)) / (12 * h * h);
  Cplx d3 = (d(-3) - 8.0 * d(-2) + 13.0 * d(-1) - 13.0 * d(1) + 8.0 * d(2) - d(3)) / (8 * h * h * h);
  return d3 / d1 - 1.5 * (d2 / d1) * (d2 / d1);
}

}  // namespace

TEST_CASE("initial value problems with closed forms") {
  auto s0 = solve_ivp_along(SchwarzianODE(Polynomial{0.0}), line(0.0, 1.0), {0.0, 1.0});
  CHECK(std::abs(s0.values.back().w - 1.0) < 1e-12);
  CHECK(std::abs(s0.values.back().dw - 1.0) < 1e-12);

  // w'' = w / 4: w = e^{z/2}
  auto se = solve_ivp_along(SchwarzianODE(Polynomial{-0.5}), line(0.0, 2.0), {1.0, 0.5});
  CHECK(std::abs(se.values.back().w - std::exp(1.0)) < 1e-8);

  // w'' = -w: w = sin z, also along a complex polyline
  auto ss = solve_ivp_along(SchwarzianODE(Polynomial{2.0}), line(0.0, kPi / 2), {0.0, 1.0});
  CHECK(std::abs(ss.values.back().w - 1.0) < 1e-8);
  std::vector<Cplx> bent{0.0, Cplx(0.5, 0.8), Cplx(1.0, -0.3)};
  auto sb = solve_ivp_along(SchwarzianODE(Polynomial{2.0}), bent, {0.0, 1.0});
  CHECK(std::abs(sb.values.back().w - std::sin(Cplx(1.0, -0.3))) < 1e-9);
  CHECK(std::abs(sb.values.back().dw - std::cos(Cplx(1.0, -0.3))) < 1e-9);

  // spacing bound holds on the reported nodes
  for (std::size_t k = 1; k < ss.nodes.size(); ++k) CHECK(std::abs(ss.nodes[k] - ss.nodes[k - 1]) <= 0.25 + 1e-12);

  CHECK(kind_of([] { solve_ivp_along(SchwarzianODE(Polynomial{0.0}), line(0.0, 1.0), {0.0, 1.0}, 1e-3); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("reconstruction from a Schwarzian") {
  ReconstructionFrame frame{0.0, {0.0, 1.0}, {1.0, 0.0}};
  auto id = reconstruct_from_schwarzian(SchwarzianODE(Polynomial{0.0}), frame);
  CHECK(std::abs(id(0.7).value() - 0.7) < 1e-10);

  auto tan_fn = reconstruct_from_schwarzian(SchwarzianODE(Polynomial{2.0}), frame);
  CHECK(std::abs(tan_fn(kPi / 4).value() - 1.0) < 1e-8);
  CHECK(std::abs(tan_fn(Cplx(0.3, 0.4)).value() - std::tan(Cplx(0.3, 0.4))) < 1e-9);
  // near the pole of tan the value goes through infinity chordally
  CHECK(chordal_distance(tan_fn(kPi / 2 + 0.01), std::tan(kPi / 2 + 0.01)) < 1e-8);

  // u1 = e^{z/2} - e^{-z/2}, u2 = e^{-z/2}: f = e^z - 1
  ReconstructionFrame ef{0.0, {0.0, 1.0}, {1.0, -0.5}};
  auto em1 = reconstruct_from_schwarzian(SchwarzianODE(Polynomial{-0.5}), ef);
  CHECK(std::abs(em1(1.0).value() - (std::exp(1.0) - 1.0)) < 1e-8);

  // round trip: sampled Schwarzian of the reconstruction equals p
  for (Cplx z : {Cplx(0.3, 0.1), Cplx(-0.2, 0.25)}) {
    CHECK(std::abs(sampled_schwarzian([&](Cplx w) { return tan_fn(w).value(); }, z) - 2.0) < 1e-5);
    CHECK(std::abs(sampled_schwarzian([&](Cplx w) { return em1(w).value(); }, z) - (-0.5)) < 1e-5);
  }

  ReconstructionFrame degenerate{0.0, {1.0, 0.0}, {1.0, 0.0}};
  CHECK(kind_of([&] { degenerate.validate(); }) == ErrorKind::DegenerateFrame);
}

TEST_CASE("two frames give Moebius-related reconstructions") {
  SchwarzianODE ode(Polynomial{1.0, 0.5});
  auto f = reconstruct_from_schwarzian(ode, {0.0, {0.0, 1.0}, {1.0, 0.0}});
  auto g = reconstruct_from_schwarzian(ode, {0.0, {1.0, 2.0}, {0.5, -1.0}});
  Cplx z1 = 0.1, z2 = Cplx(0.2, 0.3), z3 = Cplx(-0.3, 0.1);
  MoebiusMap t = MoebiusMap::from_three_points(f(z1).value(), f(z2).value(), f(z3).value(), g(z1).value(),
                                               g(z2).value(), g(z3).value());
  for (int k = 0; k < 20; ++k) {
    Cplx z = std::polar(0.5, 2 * kPi * k / 20);
    CHECK(chordal_distance(t(f(z)), g(z)) < 1e-7);
  }
}

TEST_CASE("Wronskian drift") {
  std::vector<Cplx> path{0.0, 2.0};
  SchwarzianODE p2(Polynomial{2.0});
  auto s = solve_ivp_along(p2, path, {0.0, 1.0});
  auto c = solve_ivp_along(p2, path, {1.0, 0.0});
  CHECK(wronskian_drift(s, c) <= 1e-8);
  SchwarzianODE p0(Polynomial{0.0});
  CHECK(wronskian_drift(solve_ivp_along(p0, path, {0.0, 1.0}), solve_ivp_along(p0, path, {1.0, 0.0})) <= 1e-10);
  CHECK(kind_of([&] { wronskian_drift(s, s); }) == ErrorKind::DegenerateFrame);
  auto other = solve_ivp_along(p2, std::vector<Cplx>{0.0, 1.0}, {1.0, 0.0});
  CHECK(kind_of([&] { wronskian_drift(s, other); }) == ErrorKind::PathMismatch);
}

TEST_CASE("meromorphic Runge through the ODE") {
  RationalFunction inv(Polynomial{1.0}, Polynomial{0.0, 1.0});
  auto r1 = meromorphic_lu_runge(inv, CompactRegion::disk(2.0, 1.0), 1e-10);
  CHECK(r1.report.certified_sup_error <= 1e-10);

  RationalFunction f(Polynomial{1.0, 0.0, 1.0}, Polynomial{0.0, 1.0});
  auto region = CompactRegion::disk(0.0, 0.5);
  auto r = meromorphic_lu_runge(f, region, 1e-6);
  CHECK(r.report.certified_sup_error <= 1e-6);
  for (Cplx z : interior_grid(region, 0.1).points) CHECK(chordal_distance(r.approximant(z), f(z)) <= 1e-6);
  CHECK(chordal_distance(r.approximant(0.0), ExtComplex::infinity()) <= 1e-6);

  RationalFunction ex1(Polynomial{-1.0}, Polynomial{0.0, 0.0, 1.0});
  CHECK(kind_of([&] { meromorphic_lu_runge(ex1, CompactRegion::annulus(0.0, 0.5, 2.0), 1e-6); }) ==
        ErrorKind::ComplementNotConnected);
}

TEST_CASE("obstruction residue") {
  RationalFunction s(Polynomial{-1.5}, Polynomial{0.0, 0.0, 1.0});
  Contour unit(0.0, 1.0, 1, 64);
  // coefficient of 1/z in S(z) z is -3/2
  CHECK(std::abs(obstruction_residue(s, unit) - Cplx(0, -3 * kPi)) < 1e-9);
  std::vector<Cplx> c;
  for (int k = 0; k <= 50; ++k) c.emplace_back(std::cos(k), std::sin(3.0 * k));
  CHECK(std::abs(obstruction_residue(s - RationalFunction(Polynomial(c)), unit) - Cplx(0, -3 * kPi)) < 1e-9);
  CHECK(std::abs(obstruction_residue(RationalFunction(Polynomial{1.0, 2.0, 3.0}), Contour(0.5, 2.0))) < 1e-12);
  CHECK(kind_of([&] { obstruction_residue(s, Contour(1.0, 1.0)); }) == ErrorKind::PoleOnContour);
}
