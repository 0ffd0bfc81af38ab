#pragma once

#include <vector>

#include "univalent/polynomial.hpp"

namespace univalent {

/// All roots with multiplicity, by Aberth-Ehrlich iteration.
std::vector<Cplx> roots(const Polynomial& p);

struct RootCluster {
  Cplx center;
  int multiplicity = 1;
};

/// Groups roots closer than tol * (1 + |r|) and replaces each group by its mean.
std::vector<RootCluster> cluster_roots(const std::vector<Cplx>& roots, double tol = 1e-6);
/// Clustered roots of p; a cluster of multiplicity m is refined as a simple root of p^(m-1).
std::vector<RootCluster> root_clusters(const Polynomial& p, double tol = 1e-6);

}  // namespace univalent
