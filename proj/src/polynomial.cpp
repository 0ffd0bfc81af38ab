#include "univalent/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <Eigen/Dense>

#include "univalent/error.hpp"

namespace univalent {

namespace {

// Coefficients of a sum that cancel below this fraction of the inputs are set to zero.
constexpr double kCancelChop = 1e-10;

Polynomial add_scaled(const Polynomial& a, const Polynomial& b, double sign) {
  const int n = std::max(a.degree(), b.degree()) + 1;
  std::vector<Cplx> out(std::max(n, 0));
  for (int k = 0; k < n; ++k) {
    const Cplx x = a[k], y = b[k];
    const Cplx s = x + sign * y;
    out[k] = std::abs(s) <= kCancelChop * std::max(std::abs(x), std::abs(y)) ? Cplx(0.0) : s;
  }
  return Polynomial(std::move(out));
}

}  // namespace

Polynomial::Polynomial(std::vector<Cplx> coefficients) : c_(std::move(coefficients)) {
  for (const Cplx& a : c_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw Error(ErrorKind::NonFiniteValue, "polynomial coefficient not finite");
    }
  }
  trim();
}

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

Polynomial Polynomial::constant(Cplx c) { return Polynomial(std::vector<Cplx>{c}); }

Polynomial Polynomial::monomial(int k, Cplx c) {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "monomial degree must be nonnegative");
  std::vector<Cplx> v(k + 1);
  v[k] = c;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::from_roots(std::span<const Cplx> roots, Cplx lead) {
  std::vector<Cplx> c{lead};
  for (Cplx r : roots) {
    c.push_back(0.0);
    for (std::size_t k = c.size() - 1; k > 0; --k) c[k] = c[k - 1] - r * c[k];
    c[0] = -r * c[0];
  }
  return Polynomial(std::move(c));
}

Polynomial Polynomial::parse(std::string_view text) {
  std::vector<Cplx> c;
  std::stringstream ss{std::string(text)};
  std::string term;
  while (std::getline(ss, term, ';')) {
    term.erase(std::remove_if(term.begin(), term.end(), [](unsigned char ch) { return std::isspace(ch); }),
               term.end());
    if (term.empty()) continue;
    const auto comma = term.find(',');
    try {
      std::size_t used = 0;
      const double re = std::stod(term.substr(0, comma), &used);
      if (used != (comma == std::string::npos ? term.size() : comma)) throw std::invalid_argument("trailing");
      double im = 0.0;
      if (comma != std::string::npos) {
        const std::string rest = term.substr(comma + 1);
        im = std::stod(rest, &used);
        if (used != rest.size()) throw std::invalid_argument("trailing");
      }
      c.emplace_back(re, im);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::InvalidArgument, "bad polynomial coefficient '" + term + "'");
    }
  }
  if (c.empty()) throw Error(ErrorKind::InvalidArgument, "empty polynomial text");
  return Polynomial(std::move(c));
}

double Polynomial::max_abs_coefficient() const {
  double m = 0.0;
  for (const Cplx& a : c_) m = std::max(m, std::abs(a));
  return m;
}

Cplx Polynomial::operator()(Cplx z) const {
  Cplx acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

double Polynomial::magnitude_bound(Cplx z) const {
  const double r = std::abs(z);
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * r + std::abs(*it);
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Cplx> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::monic() const {
  if (c_.empty()) throw Error(ErrorKind::InvalidArgument, "zero polynomial has no monic form");
  const Cplx lead = c_.back();
  std::vector<Cplx> m(c_.size());
  for (std::size_t k = 0; k < c_.size(); ++k) m[k] = c_[k] / lead;
  m.back() = 1.0;
  return Polynomial(std::move(m));
}

int Polynomial::low_order() const {
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (c_[k] != 0.0) return static_cast<int>(k);
  }
  return 0;
}

Polynomial Polynomial::strip_z_power(int k) const {
  if (k <= 0) return *this;
  if (k > degree()) return {};
  return Polynomial(std::vector<Cplx>(c_.begin() + k, c_.end()));
}

std::string Polynomial::to_string() const {
  if (c_.empty()) return "0,0";
  std::string out;
  char buf[64];
  for (std::size_t k = 0; k < c_.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%s%.17g,%.17g", k ? ";" : "", c_[k].real(), c_[k].imag());
    out += buf;
  }
  return out;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) { return add_scaled(a, b, 1.0); }
Polynomial operator-(const Polynomial& a, const Polynomial& b) { return add_scaled(a, b, -1.0); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Cplx> out(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  }
  return Polynomial(std::move(out));
}

Polynomial operator*(Cplx s, const Polynomial& p) {
  std::vector<Cplx> out = p.c_;
  for (auto& a : out) a *= s;
  return Polynomial(std::move(out));
}

Polynomial operator-(const Polynomial& p) { return Cplx(-1.0) * p; }

std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw Error(ErrorKind::InvalidArgument, "division by the zero polynomial");
  if (a.degree() < b.degree()) return {Polynomial{}, a};
  std::vector<Cplx> r = a.coefficients();
  const int db = b.degree();
  std::vector<Cplx> q(a.degree() - db + 1);
  for (int k = a.degree() - db; k >= 0; --k) {
    const Cplx t = r[k + db] / b.leading();
    q[k] = t;
    for (int j = 0; j <= db; ++j) r[k + j] -= t * b[j];
    r[k + db] = 0.0;
  }
  r.resize(std::max(db, 0));
  return {Polynomial(std::move(q)), Polynomial(std::move(r))};
}

Polynomial deflate(const Polynomial& p, Cplx r) {
  const int n = p.degree();
  if (n < 1) return {};
  std::vector<Cplx> q(n);
  Cplx acc = 0.0;
  for (int k = n; k >= 1; --k) {
    acc = acc * r + p[k];
    q[k - 1] = acc;
  }
  return Polynomial(std::move(q));
}

Polynomial divide_factor(const Polynomial& p, const Polynomial& g) {
  const int n = p.degree(), m = g.degree();
  if (m < 0) throw Error(ErrorKind::InvalidArgument, "division by the zero polynomial");
  if (n < m) return {};
  const int cols = n - m + 1;
  Eigen::MatrixXcd conv = Eigen::MatrixXcd::Zero(n + 1, cols);
  for (int j = 0; j < cols; ++j) {
    for (int k = 0; k <= m; ++k) conv(j + k, j) = g[k];
  }
  Eigen::VectorXcd rhs(n + 1);
  for (int k = 0; k <= n; ++k) rhs(k) = p[k];
  const Eigen::VectorXcd q = conv.colPivHouseholderQr().solve(rhs);
  return Polynomial(std::vector<Cplx>(q.data(), q.data() + cols));
}

}  // namespace univalent
