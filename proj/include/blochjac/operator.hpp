#ifndef BLOCHJAC_OPERATOR_HPP
#define BLOCHJAC_OPERATOR_HPP

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "blochjac/matrix.hpp"

namespace blochjac {

/// (J y)_n = a_n y_{n+1} + b_n y_n + a_{n-1}^T y_{n-1}, coefficients p-periodic.
/// a[0..p-1] and b[0..p-1] hold a_1..a_p and b_1..b_p; a_0 means a_p.
struct PeriodicOperator {
  int p = 1;
  int m = 1;
  std::vector<RatMatrix> a;
  std::vector<RatMatrix> b;

  /// 1-based accessors with periodic wrap-around.
  const RatMatrix& a_at(int n) const { return a[((n - 1) % p + p) % p]; }
  const RatMatrix& b_at(int n) const { return b[((n - 1) % p + p) % p]; }
};

/// Human-readable violations; empty when the operator is valid.
std::vector<std::string> validate(const PeriodicOperator& op);
/// Throws std::invalid_argument listing every violation.
void require_valid(const PeriodicOperator& op);

/// A_p = (a_1 a_2 ... a_p)^{-1}.
RatMatrix A_p(const PeriodicOperator& op);

MatrixPoly transfer_matrix(const PeriodicOperator& op, int n);
/// T_p ... T_1.
MatrixPoly monodromy(const PeriodicOperator& op);
/// P_0 M_p P_0^{-1} with P_0 = diag(a_0^T, I).
MatrixPoly modified_monodromy(const PeriodicOperator& op);
/// J = (0 I; -I 0).
MatrixPoly symplectic_form(int m);

/// Block matrix L(τ) for any nonzero τ (Hermitian only on |τ| = 1).
Eigen::MatrixXcd floquet_matrix_general(const PeriodicOperator& op, std::complex<double> tau);
/// Hermitian Floquet matrix; requires | |τ| - 1 | <= 1e-12.
Eigen::MatrixXcd floquet_matrix(const PeriodicOperator& op, std::complex<double> tau);
/// Exact Floquet matrix for a Gaussian-rational τ.
CRatMatrix floquet_matrix_exact(const PeriodicOperator& op, const CRational& tau);
/// det(L(τ) - z I) as an exact polynomial in z.
CRatPoly floquet_char_poly(const PeriodicOperator& op, const CRational& tau);

}  // namespace blochjac

#endif  // BLOCHJAC_OPERATOR_HPP
