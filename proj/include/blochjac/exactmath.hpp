#ifndef BLOCHJAC_EXACTMATH_HPP
#define BLOCHJAC_EXACTMATH_HPP

#include <utility>
#include <vector>

#include "blochjac/matrix.hpp"
#include "blochjac/poly.hpp"
#include "blochjac/rational.hpp"

namespace blochjac {

/// Chebyshev polynomial of the first kind: T_0 = 1, T_1 = x, T_{n+1} = 2x T_n - T_{n-1}.
RatPoly chebyshev(int n);

/// p(s*x) for a rational scale s.
RatPoly scale_variable(const RatPoly& p, const Rational& s);

/// Symmetric Laurent polynomial Σ_{k=-m}^{m} L_k(z) τ^k with L_k = L_{-k}.
struct LaurentSym {
  int m = 0;
  std::vector<RatPoly> coeffs;  // coeffs[k + m]

  LaurentSym() = default;
  LaurentSym(int m_, std::vector<RatPoly> c);

  const RatPoly& at(int k) const { return coeffs.at(k + m); }
  bool palindromic() const;
  /// Coefficient list of τ^m · L, a polynomial in τ of degree 2m.
  BiPoly times_tau_m() const;
  CRatPoly eval_tau(const CRational& tau) const;
};

/// Rewrites L in ν = (τ + 1/τ)/2 using τ^k + τ^{-k} = 2 T_k(ν).
/// The result is a polynomial in ν with z-polynomial coefficients.
BiPoly palindrome_to_nu(const LaurentSym& L);

/// Substitutes ν = (τ + 1/τ)/2 back and returns the Laurent form.
LaurentSym nu_to_palindrome(const BiPoly& P);

/// Square Sylvester matrix: deg g shifted rows of f followed by deg f rows of g.
template <class R>
Matrix<R> sylvester(const Poly<R>& f, const Poly<R>& g) {
  const int n = f.degree();
  const int s = g.degree();
  Matrix<R> S(n + s, n + s);
  for (int row = 0; row < s; ++row)
    for (int k = 0; k <= n; ++k) S(row, row + k) = f[n - k];
  for (int row = 0; row < n; ++row)
    for (int k = 0; k <= s; ++k) S(s + row, row + k) = g[s - k];
  return S;
}

template <class R>
R power(const R& x, int e) {
  R r = R(1);
  for (int i = 0; i < e; ++i) r = r * x;
  return r;
}

template <class R>
R resultant(const Poly<R>& f, const Poly<R>& g) {
  if (f.zero() || g.zero()) throw std::domain_error("resultant of zero polynomial");
  if (f.degree() == 0) return power(f.lead(), g.degree());
  if (g.degree() == 0) return power(g.lead(), f.degree());
  return determinant(sylvester(f, g));
}

/// (-1)^{n(n-1)/2} Res(f, f') / lc(f); equals Π_{i<j} (r_i - r_j)^2 for monic f.
template <class R>
R discriminant(const Poly<R>& f) {
  const int n = f.degree();
  if (n < 1) throw std::domain_error("discriminant needs degree >= 1");
  if (n == 1) return R(1);
  R res = determinant(sylvester(f, f.derivative()));
  R d = divide_exact(res, f.lead());
  return ((n * (n - 1) / 2) % 2) ? -d : d;
}

/// Monic gcd over Q.
RatPoly gcd(const RatPoly& f, const RatPoly& g);
RatPoly squarefree_part(const RatPoly& f);
/// Yun decomposition: f = lc · Π P_i^i with P_i squarefree, pairwise coprime, monic.
/// Returns (P_i, i) for nonconstant P_i.
std::vector<std::pair<RatPoly, int>> squarefree_decomposition(const RatPoly& f);

/// Content (monic gcd of coefficients) and primitive part over Q[z][ν].
RatPoly content(const BiPoly& f);
BiPoly primitive_part(const BiPoly& f);
/// gcd in Q(z)[ν], normalized primitive with monic content-free leading coefficient.
BiPoly gcd(const BiPoly& f, const BiPoly& g);
std::vector<std::pair<BiPoly, int>> squarefree_decomposition(const BiPoly& f);

/// Partial evaluations of D(z, τ) stored as Poly<RatPoly> in τ.
CRatPoly bipoly_eval_tau(const BiPoly& D, const CRational& tau);
RatPoly bipoly_eval_z(const BiPoly& D, const Rational& z);
/// Coefficient grid swap: polynomial in τ with z-coefficients -> polynomial in z with τ-coefficients.
BiPoly swap_variables(const BiPoly& D);

CRatPoly to_complex(const RatPoly& p);

}  // namespace blochjac

#endif  // BLOCHJAC_EXACTMATH_HPP
