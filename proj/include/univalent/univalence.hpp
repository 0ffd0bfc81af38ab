#pragma once

#include "univalent/rational.hpp"

namespace univalent {

struct UnivalenceCertificate {
  CompactRegion region;
  int derivative_zero_count = 0;
  int double_pole_count = 0;
  bool verdict = false;
};

/// Zeros of f' in the region by the argument principle, poles of order >= 2 by root multiplicity.
UnivalenceCertificate certify_local_univalence(const RationalFunction& f, const CompactRegion& region);

}  // namespace univalent
