#ifndef BLOCHJAC_INVERSE_HPP
#define BLOCHJAC_INVERSE_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "blochjac/spectral.hpp"

namespace blochjac {

/// The eigenvalue data cannot come from any operator (or the κ's are degenerate).
class InconsistentDataError : public std::runtime_error {
 public:
  InconsistentDataError(const std::string& what, std::vector<double> residuals = {})
      : std::runtime_error(what), residuals(std::move(residuals)) {}
  std::vector<double> residuals;
};

struct SpectralData {
  int p = 0;
  int m = 0;
  std::vector<double> kappas;             // κ_0..κ_m
  std::vector<std::vector<cplx>> lambda;  // Λ_0 (pm values), Λ_j ((m-j)p + 1 values)
};

/// Throws std::invalid_argument on wrong cardinalities or repeated cos κ.
void check_spectral_data(const SpectralData& sd);

/// K_s = {p(m-s-1)+1, ..., p(m-s)} for s < m, K_m = {0}.
std::vector<int> index_set(int p, int m, int s);
/// The s with n in K_s.
int index_level(int p, int m, int n);

/// W_{r,j} = cos(j κ_r), r, j = 0..s for the first s+1 angles.
Eigen::MatrixXd cosine_matrix(const std::vector<double>& kappas, int s);

/// r = h g with h = Π (z - roots_k), deg g <= s, and the coefficients of r at
/// z^{k+i}, i = 0..s, prescribed by top[i]. Ascending coefficients of r.
std::vector<cplx> constrained_poly(const std::vector<cplx>& roots, const std::vector<cplx>& top);

enum class SubsetRule { ascending, descending, random };

/// Λ_j from Hermitian eigenvalues of L(e^{iκ_j}); Λ_0 complete, Λ_j a subset
/// of size (m-j)p + 1 chosen by the rule (random uses the seed).
SpectralData forward_spectral_data(const PeriodicOperator& op, const std::vector<double>& kappas,
                                   SubsetRule rule = SubsetRule::ascending, unsigned seed = 0);

struct Recovery {
  int p = 0;
  int m = 0;
  /// eta[n][j]: η_n(τ) = eta[n][0] + Σ_{j>=1} eta[n][j] (τ^j + τ^{-j}), j <= level of n.
  std::vector<std::vector<double>> eta;
  double c = 0;
  /// Float q_k(z), k = 0..m, ascending in z (q_{-k} = q_k).
  std::vector<std::vector<double>> q;
  std::vector<double> residuals;  // worst relative residual per κ_j
  /// Present when every coefficient snapped to a rational with denominator <= 1e6.
  std::optional<CharDeterminant> exact;
};

Recovery recover_determinant(const SpectralData& sd);

/// Spectrum from the float q alone: union over x in [0, π] of the real roots
/// of q(·, e^{ix}). Works whether or not the exact snap succeeded.
std::vector<std::pair<double, double>> recovered_spectrum(const Recovery& r, int samples = 257);

/// Evaluates the float q at z and τ.
cplx eval_recovered(const Recovery& r, cplx z, cplx tau);

}  // namespace blochjac

#endif  // BLOCHJAC_INVERSE_HPP
