#include "univalent/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "univalent/error.hpp"

namespace univalent {
namespace {

[[noreturn]] void bad(const std::string& message) { throw Error(ErrorKind::InvalidConfig, message); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_key(std::string_view key) {
  if (key.empty() || key.front() == '.' || key.back() == '.') return false;
  int dots = 0;
  for (char c : key) {
    if (c == '.') {
      ++dots;
    } else if (!(std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) ||
                 c == '_' || c == '-')) {
      return false;
    }
  }
  return dots <= 1;
}

double parse_number(std::string_view text, const std::string& what) {
  text = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    bad("not a finite number in " + what + ": '" + std::string(text) + "'");
  }
  return v;
}

ClosedDisk parse_disk(std::string_view text) {
  auto parts = split(text, ',');
  if (parts.size() != 3) bad("disk must be 'cx,cy,r': '" + std::string(text) + "'");
  ClosedDisk d{Cplx(parse_number(parts[0], "disk"), parse_number(parts[1], "disk")), parse_number(parts[2], "disk")};
  if (!(d.radius > 0.0)) bad("disk radius must be positive");
  return d;
}

Polynomial parse_coefficients(std::string_view text) {
  text = trim(text);
  if (text.empty()) bad("empty coefficient list");
  for (const auto& term : split(text, ';')) {
    for (const auto& part : split(term, ',')) parse_number(part, "coefficient list");
  }
  return Polynomial::parse(text);
}

}  // namespace

std::vector<std::string> split(std::string_view text, char separator) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(separator, start);
    out.emplace_back(trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Config Config::parse(std::string_view text) {
  Config config;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    auto eq = view.find('=');
    if (eq == std::string_view::npos) bad("line " + std::to_string(lineno) + ": expected key = value");
    std::string key(trim(view.substr(0, eq)));
    std::string value(trim(view.substr(eq + 1)));
    if (!valid_key(key)) bad("line " + std::to_string(lineno) + ": invalid key '" + key + "'");
    if (value.empty()) bad("line " + std::to_string(lineno) + ": empty value for '" + key + "'");
    if (config.has(key)) bad("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    config.entries_[key] = value;
  }
  return config;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

void Config::set(const std::string& key, const std::string& value) {
  if (!valid_key(key)) bad("invalid key '" + key + "'");
  entries_[key] = value;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : parse_number(it->second, key);
}

double Config::get_double(const std::string& key, double fallback, double lo, double hi) const {
  double v = get_double(key, fallback);
  if (!(v >= lo && v <= hi)) {
    std::ostringstream os;
    os << key << " = " << v << " outside [" << lo << ", " << hi << "]";
    bad(os.str());
  }
  return v;
}

int Config::get_int(const std::string& key, int fallback, int lo, int hi) const {
  auto it = entries_.find(key);
  int v = fallback;
  if (it != entries_.end()) {
    const std::string& s = it->second;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) bad("not an integer in " + key + ": '" + s + "'");
  }
  if (v < lo || v > hi) {
    bad(key + " = " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  bad("not a boolean in " + key + ": '" + it->second + "'");
}

Cplx Config::get_complex(const std::string& key, Cplx fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : parse_complex(it->second);
}

void Config::require_known(const std::set<std::string>& known) const {
  for (const auto& [key, value] : entries_) {
    if (!known.count(key)) bad("unknown key '" + key + "'");
  }
}

std::string Config::echo() const {
  std::string out;
  for (const auto& [key, value] : entries_) out += key + " = " + value + "\n";
  return out;
}

Cplx parse_complex(std::string_view text) {
  auto parts = split(text, ',');
  if (parts.size() == 1) return {parse_number(parts[0], "complex value"), 0.0};
  if (parts.size() == 2) return {parse_number(parts[0], "complex value"), parse_number(parts[1], "complex value")};
  bad("complex value must be 're,im': '" + std::string(text) + "'");
}

RationalFunction parse_function(std::string_view spec) {
  spec = trim(spec);
  if (spec == "identity") return RationalFunction::identity();
  if (spec == "reciprocal") return RationalFunction(Polynomial{1.0}, Polynomial{0.0, 1.0});
  if (spec.starts_with("exp-taylor(") && spec.ends_with(")")) {
    std::string_view arg = spec.substr(11, spec.size() - 12);
    double d = parse_number(arg, "exp-taylor degree");
    if (d != std::floor(d) || d < 0 || d > 60) bad("exp-taylor degree must be an integer in [0, 60]");
    std::vector<Cplx> c;
    double term = 1.0;
    for (int k = 0; k <= static_cast<int>(d); ++k) {
      c.emplace_back(term);
      term /= k + 1;
    }
    return RationalFunction(Polynomial(c));
  }
  if (spec.starts_with("poly:")) return RationalFunction(parse_coefficients(spec.substr(5)));
  if (spec.starts_with("rational:")) {
    auto parts = split(spec.substr(9), '/');
    if (parts.size() != 2) bad("rational spec must be 'rational:<num>/<den>'");
    Polynomial den = parse_coefficients(parts[1]);
    if (den.is_zero()) bad("zero denominator in '" + std::string(spec) + "'");
    return RationalFunction(parse_coefficients(parts[0]), den);
  }
  bad("unknown function spec '" + std::string(spec) + "'");
}

std::vector<ClosedDisk> parse_disks(std::string_view text) {
  std::vector<ClosedDisk> out;
  for (const auto& piece : split(text, '|')) out.push_back(parse_disk(piece));
  return out;
}

CanonicalGeometry parse_geometry(std::string_view name) {
  name = trim(name);
  if (name == "hyperbolic") return CanonicalGeometry::Hyperbolic;
  if (name == "euclidean") return CanonicalGeometry::Euclidean;
  if (name == "spherical") return CanonicalGeometry::Spherical;
  bad("unknown geometry '" + std::string(name) + "'");
}

}  // namespace univalent
