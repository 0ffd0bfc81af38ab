// Acceptance suite: one PASS/FAIL line per criterion, each within its runtime budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "univalent/error.hpp"
#include "univalent/harness.hpp"
#include "univalent/metrics.hpp"
#include "univalent/moebius.hpp"
#include "univalent/runge.hpp"
#include "univalent/schwarzian_ode.hpp"
#include "univalent/universality.hpp"

using namespace univalent;

namespace {

struct Verdict {
  bool ok = true;
  std::string note;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      note += (note.empty() ? "" : "; ") + what;
    }
  }
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<void(Verdict&)>& body) {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.ok = false;
    v.note += std::string("exception: ") + e.what();
  }
  const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (t > budget_s) {
    v.ok = false;
    v.note += (v.note.empty() ? "" : "; ") + std::string("over time budget");
  }
  if (!v.ok) ++failures;
  std::printf("%s criterion %2d: %s (%.2f s / %.0f s)%s%s\n", v.ok ? "PASS" : "FAIL", id, title, t, budget_s,
              v.note.empty() ? "" : " -- ", v.note.c_str());
  std::fflush(stdout);
}

bool raises(ErrorKind kind, const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
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

// f o g for rational f, g by Horner's scheme in rational arithmetic.
RationalFunction compose(const RationalFunction& f, const RationalFunction& g) {
  auto horner = [&](const Polynomial& p) {
    RationalFunction r = RationalFunction::constant(0.0);
    for (int k = p.degree(); k >= 0; --k) r = r * g + RationalFunction::constant(p[k]);
    return r;
  };
  return horner(f.numerator()) / horner(f.denominator());
}

Cplx finite(ExtComplex v) {
  if (!v.is_finite()) throw Error(ErrorKind::NonFiniteValue, "unexpected infinite value");
  return v.value();
}

double hyperbolic(Cplx z) { return 2.0 / (1.0 - std::norm(z)); }

}  // namespace

int main() {
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto rc = [&] { return Cplx(unit(rng), unit(rng)); };

  criterion(1, "Schwarzian identities", 1.0, [&](Verdict& v) {
    int nonzero = 0;
    for (int k = 0; k < 100; ++k) {
      MoebiusMap t;
      do {
        t = MoebiusMap(rc(), rc(), rc(), rc());
      } while (std::abs(t.determinant()) < 1e-3);
      if (!schwarzian(t.as_rational()).numerator().is_zero()) ++nonzero;
    }
    v.require(nonzero == 0, "Moebius Schwarzian not identically zero");

    const Polynomial num{-1.5}, den{0.0, 0.0, 1.0};
    for (const RationalFunction& f : {RationalFunction(Polynomial{-1.0}, Polynomial{0.0, 0.0, 1.0}),
                                      RationalFunction(Polynomial{0.0, 0.0, 1.0})}) {
      RationalFunction s = schwarzian(f);
      v.require(s.numerator() == num && s.denominator() == den, "S(f) differs from -3/(2z^2)");
    }

    // S(f o g) = (S_f o g) g'^2 + S_g
    RationalFunction f(Polynomial{0.5, 1.0, 0.0, 0.3}, Polynomial{2.0, 0.5, 1.0});
    RationalFunction g(Polynomial{0.2, 1.0, 0.4});
    RationalFunction lhs = schwarzian(compose(f, g));
    RationalFunction sf = schwarzian(f), sg = schwarzian(g), dg = differentiate(g);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      Cplx z = 0.8 * rc();
      Cplx l = finite(lhs(z));
      Cplx gp = finite(dg(z));
      Cplx r = finite(sf(finite(g(z)))) * gp * gp + finite(sg(z));
      worst = std::max(worst, std::abs(l - r) / std::max(1.0, std::abs(l)));
    }
    v.require(worst <= 1e-9, "chain rule error " + std::to_string(worst));
  });

  criterion(2, "Residue obstruction for -1/z^2 on the annulus", 5.0, [&](Verdict& v) {
    RationalFunction s = schwarzian(RationalFunction(Polynomial{-1.0}, Polynomial{0.0, 0.0, 1.0}));
    const Cplx expected(0.0, -3.0 * kPi);
    Contour unit_circle(0.0, 1.0, 1, default_node_count(52));
    v.require(std::abs(obstruction_residue(s, unit_circle) - expected) <= 1e-9, "residue");
    for (int d = 0; d <= 50; d += 5) {
      std::vector<Cplx> c;
      for (int k = 0; k <= d; ++k) c.push_back(rc());
      Cplx r = obstruction_residue(s - RationalFunction(Polynomial(c)), unit_circle);
      v.require(std::abs(r - expected) <= 1e-9, "residue after subtracting degree " + std::to_string(d));
    }
    // bound: |residue| <= 2 pi r * r * sup|S - p|  =>  sup >= 1.5
    const double bound = 3.0 * kPi / (2.0 * kPi);
    auto disk = CompactRegion::disk(0.0, 1.0);
    auto target = [&](Cplx z) { return finite(s(z)); };
    for (int d = 8; d <= 50; ++d) {
      BasisSpec spec{0.0, 1.0, d, {}};
      LsFit fit = fit_analytic_ls(disk, target, spec, samples_per_circle(spec.size(), 1));
      double sup = 0.0;
      for (int k = 0; k < 2000; ++k) {
        Cplx z = std::polar(1.0, 2 * kPi * (k + 0.37) / 2000);
        sup = std::max(sup, std::abs(fit.expansion(z) - target(z)));
      }
      v.require(sup > bound - 1e-6, "fit of degree " + std::to_string(d) + " beats the bound");
    }
  });

  criterion(3, "Period machinery", 1.0, [&](Verdict& v) {
    Contour c(Cplx(0.3, -0.2), 1.5, 1, default_node_count(10));
    for (int k = -10; k <= 10; ++k) {
      Cplx got = contour_integral([&](Cplx z) { return std::pow(z - c.center, k); }, c);
      Cplx want = k == -1 ? Cplx(0.0, 2 * kPi) : Cplx(0.0);
      v.require(std::abs(got - want) <= 1e-12, "period of monomial " + std::to_string(k));
    }
    auto base = ZeroFreeApproximant({{0.0, -1}}, AnalyticExpansion());
    CorrectionBasis one{CorrectionFunction(HoloFn([](Cplx) { return Cplx(1.0); }), "one")};
    std::vector<Functional> f{PeriodFunctional{Contour(0.0, 1.0, 1, 128), Cplx(0, 2 * kPi * 1.1)}};
    auto r = match_functionals(base, one, f);
    v.require(std::abs(r.approximant.corrections()[0].first - std::log(1.1)) <= 1e-12, "s = ln 1.1");
    CorrectionBasis inv{CorrectionFunction(HoloFn([](Cplx z) { return 1.0 / z; }), "inv")};
    v.require(raises(ErrorKind::SingularJacobian, [&] { match_functionals(base, inv, f); }), "w = 1/z accepted");
  });

  criterion(4, "Locally univalent Runge on annulus(0, 1/2, 2)", 10.0, [&](Verdict& v) {
    RationalFunction f(Polynomial{0.0, 0.1, 0.5});
    auto region = CompactRegion::annulus(0.0, 0.5, 2.0);
    auto r = lu_holomorphic_runge(f, region, DomainSpec::punctured_plane({0.0}), 1e-6);
    v.require(r.report.certified_sup_error <= 1e-6, "certified error");
    double direct = 0.0;
    for (Cplx z : boundary_samples(region, 500, 0.41).points) direct = std::max(direct, std::abs(r.map(z) - finite(f(z))));
    for (Cplx z : interior_grid(region, 0.1).points) direct = std::max(direct, std::abs(r.map(z) - finite(f(z))));
    v.require(direct <= 1e-6, "direct error " + std::to_string(direct));

    // zeros of G' inside each circle equal those of f' = z + 0.1 (one, at -0.1); none in the annulus
    HoloFn dg = [&](Cplx z) { return r.map.derivative(z); };
    int outer = argument_winding(dg, Contour(0.0, 2.0, 1, 256));
    int inner = argument_winding(dg, Contour(0.0, 0.5, 1, 256));
    v.require(outer - inner == 0, "G' has zeros in the annulus");
    v.require(outer == 1 && inner == 1, "winding of G' differs from f'");

    // path independence: two routes around the hole
    Cplx z = -1.0;
    Cplx upper = r.map.integrate(Path(1.0).arc_by(0.0, kPi));
    Cplx lower = r.map.integrate(Path(1.0).arc_by(0.0, -kPi));
    v.require(std::abs(upper - lower) <= 1e-9, "route dependence");
    v.require(std::abs(r.map(z) - (r.map(1.0) + upper)) <= 1e-9, "evaluator disagrees with the integral");
  });

  criterion(5, "ODE reconstruction", 10.0, [&](Verdict& v) {
    ReconstructionFrame frame{0.0, {0.0, 1.0}, {1.0, 0.0}};
    auto id = reconstruct_from_schwarzian(SchwarzianODE(Polynomial{0.0}), frame);
    for (Cplx z : {Cplx(0.7), Cplx(-0.4, 0.9), Cplx(2.0, -1.0)}) {
      v.require(std::abs(finite(id(z)) - z) <= 1e-10, "p = 0 is not the identity");
    }
    auto tan_fn = reconstruct_from_schwarzian(SchwarzianODE(Polynomial{2.0}), frame);
    v.require(std::abs(finite(tan_fn(kPi / 4)) - 1.0) <= 1e-8, "tan(pi/4)");

    std::vector<Cplx> path{0.0, Cplx(1.0, 0.5), 2.0};
    SchwarzianODE p2(Polynomial{2.0});
    double drift = wronskian_drift(solve_ivp_along(p2, path, {0.0, 1.0}), solve_ivp_along(p2, path, {1.0, 0.0}));
    v.require(drift <= 1e-8, "Wronskian drift");

    RationalFunction f(Polynomial{1.0, 0.0, 1.0}, Polynomial{0.0, 1.0});
    auto region = CompactRegion::disk(0.0, 0.5);
    auto r = meromorphic_lu_runge(f, region, 1e-6);
    double worst = 0.0;
    for (Cplx z : interior_grid(region, 0.05).points) worst = std::max(worst, chordal_distance(r.approximant(z), f(z)));
    for (Cplx z : boundary_samples(region, 64, 0.5).points) worst = std::max(worst, chordal_distance(r.approximant(z), f(z)));
    v.require(worst <= 1e-6, "chordal error " + std::to_string(worst));
    v.require(chordal_distance(r.approximant(0.0), ExtComplex::infinity()) <= 1e-6, "pole at 0 missed");
  });

  criterion(6, "Curvature suite at h = 0.005", 30.0, [&](Verdict& v) {
    const double h = 0.005;
    const ClosedDisk k{0.0, 0.8};
    auto hyp = MetricDensity::sample(hyperbolic, k, h);
    v.require(curvature(hyp, -1.0).max_abs_deviation_from_c <= 1e-3, "hyperbolic");
    v.require(curvature(MetricDensity::sample([](Cplx) { return 1.0; }, k, h), 0.0).max_abs_deviation_from_c <= 1e-6,
              "euclidean");
    v.require(curvature(MetricDensity::sample([](Cplx z) { return 2.0 / (1.0 + std::norm(z)); }, k, h), 1.0)
                      .max_abs_deviation_from_c <= 1e-3,
              "spherical");

    const ClosedDisk k7{0.0, 0.7};
    for (int n = 0; n < 10; ++n) {
      MoebiusMap phi = MoebiusMap::disk_automorphism(0.5 * rc(), kPi * unit(rng));
      HoloFn fn = [&](Cplx z) { return finite(phi(z)); };
      HoloFn dfn = [&](Cplx z) { return phi.derivative(z); };
      DensityFn pulled = pullback(hyperbolic, fn, dfn);
      // kappa_lambda is -1 everywhere in closed form, so kappa_lambda o phi = -1
      CurvatureReport kp = curvature(MetricDensity::sample(pulled, k7, h), -1.0);
      double worst = kp.max_abs_deviation_from_c;
      v.require(worst <= 5e-3, "pullback invariance");
      for (int s = 0; s < 20; ++s) {
        Cplx z = 0.9 * rc();
        if (std::abs(z) >= 0.95) continue;
        v.require(std::abs(pulled(z) - hyperbolic(z)) <= 1e-12 * hyperbolic(z), "phi* lambda_D != lambda_D");
      }
    }

    CurvatureReport kb = curvature(hyp);
    for (double s : {0.5, 2.0, 3.0}) {
      CurvatureReport ks = curvature(scale_density(hyp, s));
      double worst = 0.0;
      for (int j = 0; j < kb.grid.ny; ++j) {
        for (int i = 0; i < kb.grid.nx; ++i) {
          if (!std::isnan(kb.at(i, j))) worst = std::max(worst, std::abs(ks.at(i, j) - kb.at(i, j) / (s * s)));
        }
      }
      v.require(worst <= 5e-3, "scaling identity");
    }
  });

  criterion(7, "Harmonic glue (e^Re z, 1, T = 8)", 10.0, [&](Verdict& v) {
    auto r = harmonic_glue([](Cplx z) { return std::exp(z.real()); }, [](Cplx) { return 1.0; }, 8.0, {0.0, 1.0}, 1e-3,
                           40);
    v.require(r.degree_used <= 40, "degree above 40");
    double e1 = 0.0, e2 = 0.0;
    for (int k = 0; k < 720; ++k) {
      for (double rad : {1.0, 0.6, 0.2}) {
        Cplx z = std::polar(rad, 2 * kPi * (k + 0.5) / 720);
        e1 = std::max(e1, std::abs(std::exp(r.u(z)) - std::exp(z.real())));
        e2 = std::max(e2, std::abs(std::exp(r.u(z + 8.0)) - 1.0));
      }
    }
    v.require(e1 <= 1e-3 && e2 <= 1e-3, "glue errors " + std::to_string(e1) + ", " + std::to_string(e2));
  });

  criterion(8, "Finite-stage universality with Translations(8)", 60.0, [&](Verdict& v) {
    std::vector<RationalFunction> targets{RationalFunction::identity(), exp_taylor(12),
                                          RationalFunction(Polynomial{1.0}, Polynomial{1.0, -0.1})};
    auto seq = SelfMapSequence::translations(8.0);
    auto fu = build_finite_universal(targets, {0.0, 1.0}, seq, 1e-3);
    v.require(fu.report.univalence_certified, "no univalence certificate");
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const MoebiusMap& phi = fu.stage_maps[i];
      double worst = 0.0;
      for (int k = 0; k < 256; ++k) {
        Cplx z = std::polar(1.0, 2 * kPi * (k + 0.3) / 256);
        worst = std::max(worst, std::abs(fu.map(finite(phi(z))) - finite(targets[i](z))));
      }
      v.require(worst <= 1e-3, "orbit error " + std::to_string(worst));
      // critical points of F inside the stage image: argument principle on its boundary circle
      ClosedDisk img = *phi.image_of_disk({0.0, 1.0});
      v.require(argument_winding([&](Cplx z) { return fu.map.derivative(z); }, Contour(img.center, img.radius, 1, 256)) ==
                    0,
                "critical point in a stage image");
    }

    std::vector<RationalFunction> maps{RationalFunction::identity(), exp_taylor(12)};
    auto m = metric_orbit_experiment(maps, CanonicalGeometry::Euclidean, {0.0, 1.0}, seq, 1e-3);
    for (double e : m.density_errors) v.require(e <= 2e-3, "density error " + std::to_string(e));
  });

  criterion(9, "Sequence diagnostics", 1.0, [&](Verdict& v) {
    auto idx = runaway_index(SelfMapSequence::translations(1.0), CompactRegion::disk(0.0, 1.0), 10);
    v.require(idx && *idx == 3, "translation run-away index");
    v.require(!runaway_index(SelfMapSequence::rotations(0.1, 100), CompactRegion::disk(0.0, 0.5), 100),
              "rotations run away");
    HoloFn sq = [](Cplx z) { return z * z; };
    v.require(!injectivity_check(sq, CompactRegion::disk(0.0, 1.0)), "z^2 injective on the unit disk");
    v.require(injectivity_check(sq, CompactRegion::disk(2.0, 0.5)), "z^2 not injective on D(2, 1/2)");
  });

  criterion(10, "Covering map of the punctured disk", 1.0, [&](Verdict& v) {
    auto psi = covering_map_special("punctured-unit-disk");
    v.require(std::abs(psi(0.0) - std::exp(-1.0)) <= 1e-14, "psi(0)");
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
      Cplx z = std::polar(std::sqrt(u(rng)), 2 * kPi * u(rng));
      if (std::abs(z) >= 1.0) continue;
      Cplx w = psi(z);
      v.require(std::abs(w) < 1.0 && std::abs(w) > 0.0 && std::abs(psi.derivative(z)) > 0.0, "point escapes");
    }
  });

  criterion(11, "Deterministic run fingerprints", 30.0, [&](Verdict& v) {
    for (const char* kind : {"counterexample", "curvature", "schwarzian", "orbit"}) {
      Config c;
      auto a = run_experiment(kind, c, 7);
      auto b = run_experiment(kind, c, 7);
      v.require(a.report["fingerprint"] == b.report["fingerprint"], std::string(kind) + " fingerprints differ");
    }
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
