#ifndef BLOCHJAC_POLY_HPP
#define BLOCHJAC_POLY_HPP

#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "blochjac/rational.hpp"

namespace blochjac {

inline bool is_zero(const Rational& r) { return r.is_zero(); }
inline bool is_zero(const CRational& r) { return r.is_zero(); }

inline Rational divide_exact(const Rational& a, const Rational& b) { return a / b; }
inline CRational divide_exact(const CRational& a, const CRational& b) { return a / b; }

/// Dense univariate polynomial, coefficient i multiplies x^i.
/// The zero polynomial has no coefficients and degree -1.
template <class R>
class Poly {
 public:
  using coeff_type = R;

  Poly() = default;
  Poly(int v) {  // NOLINT(google-explicit-constructor)
    if (v != 0) c_.push_back(R(v));
  }
  Poly(R v) {  // NOLINT(google-explicit-constructor)
    c_.push_back(std::move(v));
    trim();
  }
  explicit Poly(std::vector<R> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly monomial(R coeff, int deg) {
    std::vector<R> c(deg + 1, R(0));
    c[deg] = std::move(coeff);
    return Poly(std::move(c));
  }
  static Poly x() { return monomial(R(1), 1); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool zero() const { return c_.empty(); }
  const std::vector<R>& coeffs() const { return c_; }
  /// Coefficient of x^i, zero outside the stored range.
  R operator[](int i) const { return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : R(0); }
  const R& lead() const {
    if (c_.empty()) throw std::domain_error("leading coefficient of zero polynomial");
    return c_.back();
  }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), R(0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), R(0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(const Poly& a) {
    Poly r = a;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.zero() || b.zero()) return Poly();
    std::vector<R> c(a.c_.size() + b.c_.size() - 1, R(0));
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (is_zero(a.c_[i])) continue;
      for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(c));
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly scaled(const R& s) const {
    Poly r = *this;
    for (auto& x : r.c_) x *= s;
    r.trim();
    return r;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<R> d(c_.size() - 1, R(0));
    for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * R(static_cast<int>(i));
    return Poly(std::move(d));
  }

  Poly pow(int e) const {
    Poly result(1);
    Poly base = *this;
    while (e > 0) {
      if (e & 1) result *= base;
      base *= base;
      e >>= 1;
    }
    return result;
  }

  /// Horner evaluation at a point of any ring S that R converts into.
  template <class S>
  S eval(const S& x) const {
    S acc = S(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + S(*it);
    return acc;
  }

 private:
  void trim() {
    while (!c_.empty() && is_zero(c_.back())) c_.pop_back();
  }
  std::vector<R> c_;
};

template <class R>
bool is_zero(const Poly<R>& p) {
  return p.zero();
}

/// Exact division a / b in R[x], throws when b does not divide a.
template <class R>
Poly<R> divide_exact(const Poly<R>& a, const Poly<R>& b) {
  if (b.zero()) throw std::domain_error("division by zero polynomial");
  if (a.zero()) return Poly<R>();
  int db = b.degree();
  std::vector<R> rem = a.coeffs();
  if (a.degree() < db) throw std::domain_error("inexact polynomial division");
  std::vector<R> quot(a.degree() - db + 1, R(0));
  for (int k = a.degree() - db; k >= 0; --k) {
    const R& top = rem[k + db];
    if (is_zero(top)) continue;
    R qk = divide_exact(top, b.lead());
    for (int j = 0; j <= db; ++j) rem[k + j] -= qk * b.coeffs()[j];
    quot[k] = std::move(qk);
  }
  for (const auto& r : rem)
    if (!is_zero(r)) throw std::domain_error("inexact polynomial division");
  return Poly<R>(std::move(quot));
}

/// Euclidean division over a field: a = q*b + r with deg r < deg b.
template <class R>
std::pair<Poly<R>, Poly<R>> divmod(const Poly<R>& a, const Poly<R>& b) {
  if (b.zero()) throw std::domain_error("division by zero polynomial");
  int db = b.degree();
  std::vector<R> rem = a.coeffs();
  if (a.degree() < db) return {Poly<R>(), a};
  std::vector<R> quot(a.degree() - db + 1, R(0));
  for (int k = a.degree() - db; k >= 0; --k) {
    R qk = rem[k + db] / b.lead();
    if (is_zero(qk)) continue;
    for (int j = 0; j <= db; ++j) rem[k + j] -= qk * b.coeffs()[j];
    quot[k] = std::move(qk);
  }
  return {Poly<R>(std::move(quot)), Poly<R>(std::move(rem))};
}

template <class R>
Poly<R> make_monic(const Poly<R>& p) {
  if (p.zero()) return p;
  return p.scaled(R(1) / p.lead());
}

using RatPoly = Poly<Rational>;
using CRatPoly = Poly<CRational>;
/// Polynomial in τ whose coefficients are polynomials in z.
using BiPoly = Poly<RatPoly>;

std::string to_string(const RatPoly& p, const std::string& var = "z");
std::string to_string(const CRatPoly& p, const std::string& var = "z");

inline std::ostream& operator<<(std::ostream& os, const RatPoly& p) { return os << to_string(p); }
inline std::ostream& operator<<(std::ostream& os, const CRatPoly& p) { return os << to_string(p); }

}  // namespace blochjac

#endif  // BLOCHJAC_POLY_HPP
