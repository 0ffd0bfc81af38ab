#include <doctest.h>

#include <cmath>

#include "univalent/error.hpp"
#include "univalent/runge.hpp"

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

const CompactRegion kAnnulus = CompactRegion::annulus(0.0, 0.5, 2.0);

RationalFunction exp_taylor(int d) {
  std::vector<Cplx> c;
  double t = 1.0;
  for (int k = 0; k <= d; ++k) {
    c.emplace_back(t);
    t /= k + 1;
  }
  return RationalFunction(Polynomial(c));
}

}  // namespace

TEST_CASE("least-squares fits") {
  auto exact = fit_analytic_ls(kAnnulus, [](Cplx z) { return z; }, BasisSpec{0.0, 1.0, 1, {}}, 64);
  CHECK(exact.certified_sup_error <= 1e-13);

  // log(1 + 0.1/z) = sum (-1)^(k+1) (0.1/z)^k / k; tail beyond 12 terms under 0.2^12 / 0.8
  BasisSpec laurent{0.0, 1.0, 0, {{0.0, 1.0, 12}}};
  auto lf = fit_analytic_ls(kAnnulus, [](Cplx z) { return std::log(1.0 + 0.1 / z); }, laurent, 128);
  CHECK(lf.certified_sup_error <= 1e-6);
  for (Cplx z : {Cplx(1.0, 0.3), Cplx(-0.7, 0.2)}) {
    Cplx series = 0.0;
    for (int k = 1; k <= 30; ++k) series += std::pow(-1.0, k + 1) * std::pow(0.1 / z, k) / double(k);
    CHECK(std::abs(lf.expansion(z) - series) < 1e-6);
  }

  auto bad = fit_analytic_ls(CompactRegion::disk(0.0, 1.0), [](Cplx z) { return 1.0 / (z - 0.9); },
                             BasisSpec{0.0, 1.0, 5, {}}, 64);
  CHECK(bad.certified_sup_error >= 1.0);
}

TEST_CASE("zero-free Runge") {
  auto pp = DomainSpec::punctured_plane({0.0});
  auto id = zero_free_runge(RationalFunction::identity(), kAnnulus, pp, 1e-6);
  CHECK(id.report.certified_sup_error <= 1e-12);

  RationalFunction g(Polynomial{0.1, 1.0});
  auto r = zero_free_runge(g, kAnnulus, pp, 1e-6);
  CHECK(r.report.certified_sup_error <= 1e-6);
  CHECK(r.report.degree_used <= 16);
  for (Cplx z : validation_samples(kAnnulus, 32).points) {
    CHECK(std::abs(r.approximant(z) - (z + 0.1)) <= 1e-6);
  }
  CHECK(kind_of([&] { zero_free_runge(RationalFunction(Polynomial{-1.0, 1.0}), kAnnulus, pp, 1e-6); }) ==
        ErrorKind::ZeroOnCompact);
}

TEST_CASE("functional matching") {
  auto base = ZeroFreeApproximant({{0.0, -1}}, AnalyticExpansion());
  CorrectionBasis one{CorrectionFunction(HoloFn([](Cplx) { return Cplx(1.0); }), "one")};
  std::vector<Functional> same{PeriodFunctional{Contour(0.0, 1.0, 1, 128), Cplx(0, 2 * kPi)}};
  auto r0 = match_functionals(base, one, same);
  CHECK(std::abs(r0.approximant.corrections()[0].first) < 1e-12);

  // closed form: e^s * 2 pi i = 2 pi i * 1.1
  std::vector<Functional> f{PeriodFunctional{Contour(0.0, 1.0, 1, 128), Cplx(0, 2 * kPi * 1.1)}};
  auto r = match_functionals(base, one, f);
  CHECK(std::abs(r.approximant.corrections()[0].first - std::log(1.1)) < 1e-12);

  CorrectionBasis inv{CorrectionFunction(HoloFn([](Cplx z) { return 1.0 / z; }), "inv")};
  CHECK(kind_of([&] { match_functionals(base, inv, f); }) == ErrorKind::SingularJacobian);
}

TEST_CASE("locally univalent Runge on the annulus") {
  RationalFunction f(Polynomial{0.0, 0.1, 0.5});
  auto r = lu_holomorphic_runge(f, kAnnulus, DomainSpec::punctured_plane({0.0}), 1e-6);
  CHECK(r.report.certified_sup_error <= 1e-6);
  for (Cplx z : interior_grid(kAnnulus, 0.2).points) CHECK(std::abs(r.map(z) - f(z).value()) <= 1e-6);
  // the derivative has no periods: closed loop integrals vanish
  CHECK(std::abs(r.map.integrate(Path(1.0).arc_by(0.0, 2 * kPi))) < 1e-9);

  auto disk = lu_holomorphic_runge(RationalFunction::identity(), CompactRegion::disk(0.0, 1.0),
                                   DomainSpec::whole_plane(), 1e-12);
  CHECK(disk.report.certified_sup_error <= 1e-12);
  CHECK(kind_of([] {
          lu_holomorphic_runge(RationalFunction(Polynomial{0.0, 0.0, 1.0}), CompactRegion::disk(0.0, 1.0),
                               DomainSpec::whole_plane(), 1e-6);
        }) == ErrorKind::NotLocallyUnivalent);
}

TEST_CASE("gluing targets on separated disks") {
  std::vector<GluePiece> one{{{0.0, 1.0}, RationalFunction::identity(), MoebiusMap::identity()}};
  auto single = glue_targets(one, DomainSpec::whole_plane(), 1e-6);
  CHECK(single.piece_errors[0] <= 1e-6);
  CHECK(std::abs(single.map(Cplx(0.3, 0.4)) - Cplx(0.3, 0.4)) <= 1e-6);

  std::vector<GluePiece> two{{{0.0, 1.0}, exp_taylor(12), MoebiusMap::identity()},
                             {{8.0, 1.0}, RationalFunction::identity(), MoebiusMap::translation(-8.0)}};
  auto g = glue_targets(two, DomainSpec::whole_plane(), 1e-3);
  CHECK(g.piece_errors[0] <= 1e-3);
  CHECK(g.piece_errors[1] <= 1e-3);
  for (Cplx z : {Cplx(0.5, 0.5), Cplx(-0.9, 0.0)}) {
    CHECK(std::abs(g.map(z) - std::exp(z)) <= 1e-3);
    CHECK(std::abs(g.map(z + 8.0) - z) <= 1e-3);
  }

  std::vector<GluePiece> overlap{{{0.0, 1.0}, exp_taylor(12), MoebiusMap::identity()},
                                 {{1.5, 1.0}, RationalFunction::identity(), MoebiusMap::identity()}};
  CHECK(kind_of([&] { glue_targets(overlap, DomainSpec::whole_plane(), 1e-3); }) == ErrorKind::OverlappingPieces);
}
