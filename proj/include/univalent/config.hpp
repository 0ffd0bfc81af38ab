#pragma once

// Flat key=value experiment configuration with dotted section keys, and the
// textual function and geometry specs shared by every experiment.

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "univalent/complex_foundation.hpp"
#include "univalent/metrics.hpp"
#include "univalent/rational.hpp"

namespace univalent {

/// Lines "key = value"; '#' starts a comment. Keys are [a-z0-9_-]+ with at most one dot.
/// Malformed input throws InvalidConfig.
class Config {
 public:
  Config() = default;
  static Config parse(std::string_view text);
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  void set(const std::string& key, const std::string& value);
  const std::map<std::string, std::string>& entries() const { return entries_; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  /// Value within [lo, hi], else InvalidConfig.
  double get_double(const std::string& key, double fallback, double lo, double hi) const;
  int get_int(const std::string& key, int fallback, int lo, int hi) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// "re,im" or "re".
  Cplx get_complex(const std::string& key, Cplx fallback) const;

  /// Keys outside `known` throw InvalidConfig.
  void require_known(const std::set<std::string>& known) const;

  /// Sorted "key = value" lines; parse(echo()) gives back the same entries.
  std::string echo() const;

 private:
  std::map<std::string, std::string> entries_;
};

/// "re,im" or "re".
Cplx parse_complex(std::string_view text);

/// identity | reciprocal | exp-taylor(d) | poly:<coeffs> | rational:<num>/<den>,
/// coefficient lists "re,im;re,im;..." in ascending degree.
RationalFunction parse_function(std::string_view spec);

/// hyperbolic | euclidean | spherical.
CanonicalGeometry parse_geometry(std::string_view name);

/// "cx,cy,r" entries separated by '|'.
std::vector<ClosedDisk> parse_disks(std::string_view text);

/// Splits on a separator, trimming blanks; empty fields are kept.
std::vector<std::string> split(std::string_view text, char separator);

}  // namespace univalent
