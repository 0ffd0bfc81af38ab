#include "univalent/roots.hpp"

#include <cmath>
#include <limits>

#include "univalent/error.hpp"

namespace univalent {

namespace {

constexpr int kMaxIterations = 200;
constexpr double kStepTolerance = 1e-12;
constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

std::vector<Cplx> roots(const Polynomial& p) {
  if (p.degree() < 1) throw Error(ErrorKind::InvalidArgument, "roots needs degree >= 1");
  const int zeros = p.low_order();
  std::vector<Cplx> out(zeros, Cplx(0.0));
  const Polynomial q = p.strip_z_power(zeros).monic();
  const int n = q.degree();
  if (n == 0) return out;
  if (n == 1) {
    out.push_back(-q[0]);
    return out;
  }

  double bound = 0.0;
  for (int k = 0; k < n; ++k) bound = std::max(bound, std::abs(q[k]));
  const double radius = 1.0 + bound;
  const Polynomial dq = q.derivative();

  std::vector<Cplx> z(n);
  for (int k = 0; k < n; ++k) z[k] = std::polar(radius, 2.0 * kPi * k / n + 0.4);
  std::vector<bool> done(n, false);

  int remaining = n;
  for (int it = 0; it < kMaxIterations && remaining > 0; ++it) {
    for (int k = 0; k < n; ++k) {
      if (done[k]) continue;
      const Cplx pv = q(z[k]);
      if (std::abs(pv) <= 4.0 * kEps * q.magnitude_bound(z[k])) {
        done[k] = true;
        --remaining;
        continue;
      }
      Cplx s = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j != k) s += 1.0 / (z[k] - z[j]);
      }
      Cplx denom = dq(z[k]) - pv * s;
      if (denom == 0.0) denom = kEps * (1.0 + std::abs(z[k]));
      const Cplx w = pv / denom;
      z[k] -= w;
      if (std::abs(w) <= kStepTolerance * (1.0 + std::abs(z[k]))) {
        done[k] = true;
        --remaining;
      }
    }
  }
  if (remaining > 0) throw Error(ErrorKind::NoConvergence, "Aberth iteration hit its iteration cap");
  out.insert(out.end(), z.begin(), z.end());
  return out;
}

std::vector<RootCluster> cluster_roots(const std::vector<Cplx>& roots, double tol) {
  const int n = static_cast<int>(roots.size());
  std::vector<int> label(n, -1);
  int clusters = 0;
  for (int i = 0; i < n; ++i) {
    if (label[i] >= 0) continue;
    label[i] = clusters;
    // grow the cluster transitively
    std::vector<int> stack{i};
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      for (int j = 0; j < n; ++j) {
        if (label[j] < 0 && std::abs(roots[a] - roots[j]) <= tol * (1.0 + std::abs(roots[a]))) {
          label[j] = clusters;
          stack.push_back(j);
        }
      }
    }
    ++clusters;
  }
  std::vector<RootCluster> out(clusters, RootCluster{Cplx(0.0), 0});
  for (int i = 0; i < n; ++i) {
    out[label[i]].center += roots[i];
    out[label[i]].multiplicity += 1;
  }
  for (auto& c : out) c.center /= static_cast<double>(c.multiplicity);
  return out;
}

std::vector<RootCluster> root_clusters(const Polynomial& p, double tol) {
  auto clusters = cluster_roots(roots(p), tol);
  for (auto& c : clusters) {
    if (c.multiplicity < 2) continue;
    Polynomial d = p;
    for (int k = 1; k < c.multiplicity; ++k) d = d.derivative();
    const Polynomial dd = d.derivative();
    Cplx z = c.center;
    for (int it = 0; it < 8; ++it) {
      const Cplx slope = dd(z);
      if (slope == 0.0) break;
      const Cplx step = d(z) / slope;
      if (!(std::abs(step) <= tol * (1.0 + std::abs(c.center)))) break;
      z -= step;
      if (std::abs(step) <= 4.0 * kEps * (1.0 + std::abs(z))) break;
    }
    c.center = z;
  }
  return clusters;
}

}  // namespace univalent
