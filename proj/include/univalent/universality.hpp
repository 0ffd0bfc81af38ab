#pragma once

// Self-map sequences and their run-away / injectivity diagnostics, finite-stage
// universal locally univalent functions built by gluing, the special covering maps
// and metric orbit experiments through Liouville pullbacks.

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "univalent/metrics.hpp"
#include "univalent/moebius.hpp"
#include "univalent/runge.hpp"

namespace univalent {

/// phi_n(z) = z + n stride.
struct Translations {
  Cplx stride;
};

/// phi_n = e^{i theta_n} (z + a_n) / (1 + conj(a_n) z), n = 1..size.
struct DiskAutomorphisms {
  std::vector<Cplx> a;
  std::vector<double> theta;
};

/// phi_n = maps[n - 1].
struct ExplicitMaps {
  std::vector<MoebiusMap> maps;
};

class SelfMapSequence {
 public:
  using Variant = std::variant<Translations, DiskAutomorphisms, ExplicitMaps>;

  static SelfMapSequence translations(Cplx stride);
  static SelfMapSequence disk_automorphisms(std::vector<Cplx> a, std::vector<double> theta);
  /// Rotations by n * step, n = 1..count.
  static SelfMapSequence rotations(double step, int count);
  static SelfMapSequence explicit_maps(std::vector<MoebiusMap> maps, DomainSpec domain);

  const Variant& variant() const { return variant_; }
  const DomainSpec& domain() const { return domain_; }
  /// Number of members; nullopt for infinite sequences.
  std::optional<int> size() const;
  /// phi_n; phi_0 is the identity.
  MoebiusMap member(int n) const;

 private:
  SelfMapSequence(Variant v, DomainSpec d) : variant_(std::move(v)), domain_(std::move(d)) {}
  Variant variant_;
  DomainSpec domain_;
};

/// Smallest n <= max_n with phi_n(K) disjoint from K, using exact Mobius images of disks.
std::optional<int> runaway_index(const SelfMapSequence& seq, const CompactRegion& k, int max_n);

/// Argument-principle injectivity test with 8 probes and 64 boundary samples.
bool injectivity_check(const HoloFn& phi, const CompactRegion& k);
bool injectivity_check(const MoebiusMap& phi, const CompactRegion& k);

struct SequenceDiagnostics {
  struct RegionReport {
    CompactRegion region;
    std::optional<int> runaway_index;
    std::vector<bool> injective;  // n = 1..max_n
    bool eventually_injective = false;
  };
  int max_n = 0;
  std::vector<RegionReport> regions;
};

SequenceDiagnostics diagnose_sequence(const SelfMapSequence& seq, const std::vector<CompactRegion>& regions,
                                      int max_n);

struct OrbitReport {
  std::vector<int> stages;
  std::vector<double> target_errors;     // sup over K of |F o phi_n - g|
  std::vector<int> derivative_zero_counts;  // zeros of F' inside each stage image
  bool univalence_certified = false;
  ApproximationReport glue;
};

struct FiniteUniversal {
  LocallyUnivalentMap map;
  std::vector<MoebiusMap> stage_maps;
  OrbitReport report;
};

/// Greedy stage choice among n = 0 .. 2m - 1: images pairwise separated by half the radius of K.
std::vector<int> select_stages(const SelfMapSequence& seq, const ClosedDisk& k, int count);

FiniteUniversal build_finite_universal(const std::vector<RationalFunction>& targets, const ClosedDisk& k,
                                       const SelfMapSequence& seq, double eps);

enum class CoveringDomain { UnitDisk, PuncturedUnitDisk };

struct CoveringMap {
  CoveringDomain domain;
  Cplx operator()(Cplx z) const;
  Cplx derivative(Cplx z) const;
};

/// "unit-disk" or "punctured-unit-disk"; UnsupportedDomain otherwise.
CoveringMap covering_map_special(std::string_view domain);
CoveringMap covering_map_special(CoveringDomain domain);

struct MetricOrbitReport {
  OrbitReport orbit;
  std::vector<double> density_errors;  // sup over K of |phi_n* Lambda - f_i* lambda_c|
};

MetricOrbitReport metric_orbit_experiment(const std::vector<RationalFunction>& maps, CanonicalGeometry geom,
                                          const ClosedDisk& k, const SelfMapSequence& seq, double eps);

}  // namespace univalent
