#include "blochjac/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace blochjac {

Rational::Rational(long long v) {
  // mpq_class has no long long constructor on every platform.
  value_ = mpq_class(mpz_class(std::to_string(v), 10));
}

Rational::Rational(long long num, long long den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  value_ = mpq_class(mpz_class(std::to_string(num), 10), mpz_class(std::to_string(den), 10));
  value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  auto bad = [&]() { return std::invalid_argument("not an exact number: '" + s + "'"); };
  if (s.empty()) throw bad();

  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational n = parse(std::string_view(s).substr(0, slash));
    Rational d = parse(std::string_view(s).substr(slash + 1));
    if (!n.is_integer() || !d.is_integer() || d.is_zero()) throw bad();
    return n / d;
  }

  size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  std::string digits;
  int frac_digits = 0;
  bool seen_point = false;
  for (; pos < s.size(); ++pos) {
    char ch = s[pos];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      if (seen_point) ++frac_digits;
    } else if (ch == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (digits.empty()) throw bad();

  long exponent = 0;
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') throw bad();
    ++pos;
    std::string exp_text = s.substr(pos);
    if (exp_text.empty()) throw bad();
    size_t used = 0;
    try {
      exponent = std::stol(exp_text, &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (used != exp_text.size() || std::labs(exponent) > 4000) throw bad();
  }

  mpz_class num(digits, 10);
  if (negative) num = -num;
  long scale = exponent - frac_digits;
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
  mpq_class q = scale >= 0 ? mpq_class(num * ten_pow) : mpq_class(num, ten_pow);
  q.canonicalize();
  return Rational(q);
}

std::string Rational::str() const {
  if (is_integer()) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::decimal_str() const {
  mpz_class den = value_.get_den();
  int twos = 0;
  int fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) { den /= 2; ++twos; }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) { den /= 5; ++fives; }
  if (den != 1) return str();
  int places = std::max(twos, fives);
  if (places == 0) return value_.get_num().get_str();

  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(places));
  mpz_class scaled = value_.get_num() * ten_pow / value_.get_den();
  bool negative = scaled < 0;
  std::string digits = mpz_class(::abs(scaled)).get_str();
  if (static_cast<int>(digits.size()) <= places) digits.insert(0, places + 1 - digits.size(), '0');
  digits.insert(digits.size() - places, ".");
  return negative ? "-" + digits : digits;
}

Rational Rational::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  mpq_class r = 1 / value_;
  return Rational(r);
}

Rational Rational::pow(int e) const {
  if (e < 0) return inverse().pow(-e);
  Rational result(1);
  Rational base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  value_ /= o.value_;
  return *this;
}

std::optional<Rational> snap_to_rational(double x, long long max_den, double tol) {
  if (!std::isfinite(x) || std::fabs(x) > 1e15) return std::nullopt;
  // Continued-fraction convergents of x.
  long double rest = x;
  long long h_prev = 1, h = static_cast<long long>(std::floor(rest));
  long long k_prev = 0, k = 1;
  rest -= std::floor(rest);
  for (int iter = 0; iter < 64; ++iter) {
    Rational candidate(h, k);
    if (std::fabs(candidate.to_double() - x) <= tol) return candidate;
    if (rest < 1e-18L) break;
    rest = 1.0L / rest;
    long double a = std::floor(rest);
    rest -= a;
    if (a > 1e15L) break;
    long long ai = static_cast<long long>(a);
    long long h_next = ai * h + h_prev;
    long long k_next = ai * k + k_prev;
    if (k_next > max_den || k_next <= 0) break;
    h_prev = h; h = h_next;
    k_prev = k; k = k_next;
  }
  return std::nullopt;
}

CRational& CRational::operator/=(const CRational& o) {
  Rational n = o.norm2();
  if (n.is_zero()) throw std::domain_error("division by zero");
  CRational num = *this * o.conj();
  re = num.re / n;
  im = num.im / n;
  return *this;
}

std::ostream& operator<<(std::ostream& os, const CRational& c) {
  if (c.im.is_zero()) return os << c.re;
  return os << "(" << c.re << (c.im.sign() < 0 ? " - " : " + ") << c.im.abs() << "i)";
}

}  // namespace blochjac
