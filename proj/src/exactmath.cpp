#include "blochjac/exactmath.hpp"

#include <algorithm>
#include <stdexcept>

namespace blochjac {

RatPoly chebyshev(int n) {
  if (n < 0) throw std::invalid_argument("chebyshev index must be >= 0");
  RatPoly prev(1);
  if (n == 0) return prev;
  RatPoly cur = RatPoly::x();
  const RatPoly two_x = RatPoly::monomial(Rational(2), 1);
  for (int k = 1; k < n; ++k) {
    RatPoly next = two_x * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

RatPoly scale_variable(const RatPoly& p, const Rational& s) {
  std::vector<Rational> c = p.coeffs();
  Rational f(1);
  for (auto& x : c) {
    x *= f;
    f *= s;
  }
  return RatPoly(std::move(c));
}

LaurentSym::LaurentSym(int m_, std::vector<RatPoly> c) : m(m_), coeffs(std::move(c)) {
  if (static_cast<int>(coeffs.size()) != 2 * m + 1) throw std::invalid_argument("Laurent coefficient count");
}

bool LaurentSym::palindromic() const {
  for (int k = 1; k <= m; ++k)
    if (at(k) != at(-k)) return false;
  return true;
}

BiPoly LaurentSym::times_tau_m() const { return BiPoly(coeffs); }

CRatPoly LaurentSym::eval_tau(const CRational& tau) const {
  return bipoly_eval_tau(times_tau_m(), tau) * CRatPoly(CRational(1) / power(tau, m));
}

BiPoly palindrome_to_nu(const LaurentSym& L) {
  if (!L.palindromic()) throw std::invalid_argument("not palindromic");
  BiPoly P(L.at(0));
  for (int k = 1; k <= L.m; ++k) {
    const RatPoly t = chebyshev(k).scaled(Rational(2));
    std::vector<RatPoly> c;
    for (const auto& tk : t.coeffs()) c.push_back(L.at(k).scaled(tk));
    P += BiPoly(std::move(c));
  }
  return P;
}

LaurentSym nu_to_palindrome(const BiPoly& P) {
  // ν^j = 2^{-j} (τ + 1/τ)^j; expand binomially into Laurent terms.
  const int m = std::max(P.degree(), 0);
  std::vector<RatPoly> c(2 * m + 1);
  for (int j = 0; j <= P.degree(); ++j) {
    const RatPoly& pj = P.coeffs()[j];
    if (pj.zero()) continue;
    Rational binom(1);
    Rational scale = Rational(1, 2).pow(j);
    for (int i = 0; i <= j; ++i) {
      // (τ + 1/τ)^j has τ^{j-2i} with coefficient C(j, i).
      c[j - 2 * i + m] += pj.scaled(binom * scale);
      binom = binom * Rational(j - i) / Rational(i + 1);
    }
  }
  return LaurentSym(m, std::move(c));
}

RatPoly gcd(const RatPoly& f, const RatPoly& g) {
  if (f.zero() && g.zero()) throw std::domain_error("gcd of two zero polynomials");
  RatPoly a = f;
  RatPoly b = g;
  while (!b.zero()) {
    RatPoly r = divmod(a, b).second;
    a = std::move(b);
    b = make_monic(r);
  }
  return make_monic(a);
}

RatPoly squarefree_part(const RatPoly& f) {
  if (f.degree() <= 0) return make_monic(f);
  return make_monic(divide_exact(f, gcd(f, f.derivative())));
}

namespace {

template <class P>
std::vector<std::pair<P, int>> yun(const P& f, P (*gcd_fn)(const P&, const P&), P (*normalize)(const P&)) {
  std::vector<std::pair<P, int>> out;
  if (f.degree() <= 0) return out;
  P fp = f.derivative();
  P a = gcd_fn(f, fp);
  P b = divide_exact(f, a);
  P c = divide_exact(fp, a);
  P d = c - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    P g = gcd_fn(b, d);
    P bn = divide_exact(b, g);
    if (g.degree() > 0) out.emplace_back(normalize(g), i);
    c = divide_exact(d, g);
    b = std::move(bn);
    d = c - b.derivative();
    ++i;
  }
  return out;
}

RatPoly monic_rat(const RatPoly& p) { return make_monic(p); }
RatPoly gcd_rat(const RatPoly& a, const RatPoly& b) { return gcd(a, b); }
BiPoly gcd_bi(const BiPoly& a, const BiPoly& b) { return gcd(a, b); }
BiPoly prim_bi(const BiPoly& p) { return primitive_part(p); }

// Pseudo-remainder of a by b in Q[z][ν].
BiPoly pseudo_rem(const BiPoly& a, const BiPoly& b) {
  BiPoly r = a;
  const int db = b.degree();
  const RatPoly& lb = b.lead();
  while (!r.zero() && r.degree() >= db) {
    RatPoly lr = r.lead();
    BiPoly shift = BiPoly::monomial(lr, r.degree() - db);
    r = BiPoly(r.scaled(lb)) - shift * b;
  }
  return r;
}

}  // namespace

std::vector<std::pair<RatPoly, int>> squarefree_decomposition(const RatPoly& f) {
  return yun<RatPoly>(f, &gcd_rat, &monic_rat);
}

RatPoly content(const BiPoly& f) {
  RatPoly g;
  for (const auto& c : f.coeffs()) {
    if (c.zero()) continue;
    g = g.zero() ? make_monic(c) : gcd(g, c);
    if (g.degree() == 0) break;
  }
  return g;
}

BiPoly primitive_part(const BiPoly& f) {
  if (f.zero()) return f;
  RatPoly cont = content(f);
  std::vector<RatPoly> c;
  for (const auto& x : f.coeffs()) c.push_back(divide_exact(x, cont));
  BiPoly p(std::move(c));
  // Fix the scalar so the leading z-coefficient of the leading ν-coefficient is 1.
  Rational s = Rational(1) / p.lead().lead();
  return p.scaled(RatPoly(s));
}

BiPoly gcd(const BiPoly& f, const BiPoly& g) {
  if (f.zero() && g.zero()) throw std::domain_error("gcd of two zero polynomials");
  if (f.zero()) return primitive_part(g);
  if (g.zero()) return primitive_part(f);
  RatPoly cg = gcd(content(f), content(g));
  BiPoly a = primitive_part(f);
  BiPoly b = primitive_part(g);
  if (a.degree() < b.degree()) std::swap(a, b);
  while (!b.zero()) {
    BiPoly r = pseudo_rem(a, b);
    a = std::move(b);
    b = r.zero() ? r : primitive_part(r);
  }
  return primitive_part(a).scaled(cg);
}

std::vector<std::pair<BiPoly, int>> squarefree_decomposition(const BiPoly& f) {
  return yun<BiPoly>(f, &gcd_bi, &prim_bi);
}

CRatPoly to_complex(const RatPoly& p) {
  std::vector<CRational> c;
  for (const auto& x : p.coeffs()) c.emplace_back(x);
  return CRatPoly(std::move(c));
}

CRatPoly bipoly_eval_tau(const BiPoly& D, const CRational& tau) {
  CRatPoly acc;
  for (auto it = D.coeffs().rbegin(); it != D.coeffs().rend(); ++it)
    acc = acc * CRatPoly(tau) + to_complex(*it);
  return acc;
}

RatPoly bipoly_eval_z(const BiPoly& D, const Rational& z) {
  std::vector<Rational> c;
  for (const auto& x : D.coeffs()) c.push_back(x.eval(z));
  return RatPoly(std::move(c));
}

BiPoly swap_variables(const BiPoly& D) {
  int dz = -1;
  for (const auto& x : D.coeffs()) dz = std::max(dz, x.degree());
  std::vector<std::vector<Rational>> grid(dz + 1, std::vector<Rational>(D.coeffs().size()));
  for (size_t t = 0; t < D.coeffs().size(); ++t)
    for (int z = 0; z <= D.coeffs()[t].degree(); ++z) grid[z][t] = D.coeffs()[t].coeffs()[z];
  std::vector<RatPoly> out;
  for (auto& row : grid) out.emplace_back(std::move(row));
  return BiPoly(std::move(out));
}

namespace {

std::string term_coeff(const std::string& c, bool constant) {
  if (constant) return c;
  if (c == "1") return "";
  if (c == "-1") return "-";
  return c + "*";
}

template <class C>
std::string poly_string(const std::vector<C>& coeffs, const std::string& var, bool (*zero)(const C&),
                        std::string (*fmt)(const C&)) {
  std::ostringstream os;
  bool first = true;
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k) {
    if (zero(coeffs[k])) continue;
    std::string c = fmt(coeffs[k]);
    if (!first && c[0] == '-') {
      os << " - ";
      c.erase(0, 1);
    } else if (!first) {
      os << " + ";
    }
    first = false;
    os << term_coeff(c, k == 0);
    if (k >= 1) os << var;
    if (k >= 2) os << "^" << k;
  }
  return first ? "0" : os.str();
}

bool rat_zero(const Rational& r) { return r.is_zero(); }
bool crat_zero(const CRational& r) { return r.is_zero(); }
std::string rat_fmt(const Rational& r) { return r.str(); }
std::string crat_fmt(const CRational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

}  // namespace

std::string to_string(const RatPoly& p, const std::string& var) {
  return poly_string<Rational>(p.coeffs(), var, &rat_zero, &rat_fmt);
}

std::string to_string(const CRatPoly& p, const std::string& var) {
  return poly_string<CRational>(p.coeffs(), var, &crat_zero, &crat_fmt);
}

}  // namespace blochjac
