#include "univalent/univalence.hpp"

#include <algorithm>

#include "univalent/error.hpp"
#include "univalent/roots.hpp"

namespace univalent {

namespace {

constexpr double kBoundaryClearance = 1e-8;

void require_clear(const std::vector<Cplx>& points, const CompactRegion& region, const char* what) {
  for (Cplx p : points) {
    if (region.boundary_distance(p) < kBoundaryClearance) {
      throw Error(ErrorKind::BoundaryDegeneracy, std::string(what) + " lies on the region boundary");
    }
  }
}

}  // namespace

UnivalenceCertificate certify_local_univalence(const RationalFunction& f, const CompactRegion& region) {
  if (f.is_constant()) throw Error(ErrorKind::ConstantFunction, "constant function is not locally univalent");
  const RationalFunction df = differentiate(f);
  const auto critical = df.zeros();
  const auto poles = f.poles();
  require_clear(critical, region, "a zero of f'");
  require_clear(poles, region, "a pole of f");

  int double_poles = 0;
  for (const auto& c : cluster_roots(poles)) {
    if (c.multiplicity >= 2 && region.contains(c.center)) ++double_poles;
  }
  // poles of f' inside the region enter the argument principle with negative sign
  int derivative_poles = 0;
  for (Cplx p : df.poles()) {
    if (region.contains(p)) ++derivative_poles;
  }

  const int nodes = default_node_count(std::max(df.numerator().degree(), df.denominator().degree()));
  int winding = 0;
  for (const auto& bc : region.boundary(nodes)) {
    winding += argument_winding([&df](Cplx z) { return df(z).value(); }, bc.contour);
  }
  const int zeros = winding + derivative_poles;
  return UnivalenceCertificate{region, zeros, double_poles, zeros == 0 && double_poles == 0};
}

}  // namespace univalent
