#ifndef BLOCHJAC_NUMERICS_HPP
#define BLOCHJAC_NUMERICS_HPP

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "blochjac/poly.hpp"

namespace blochjac {

using cplx = std::complex<double>;

/// Thrown when Aberth iteration does not meet the residual bound.
class RootFindingError : public std::runtime_error {
 public:
  RootFindingError(const std::string& what, std::vector<cplx> best, std::vector<double> residuals)
      : std::runtime_error(what), best_iterate(std::move(best)), residuals(std::move(residuals)) {}
  std::vector<cplx> best_iterate;
  std::vector<double> residuals;
};

struct RootOptions {
  double rel_tol = 1e-12;
  int max_iter = 500;
};

struct RootCluster {
  cplx value;
  int multiplicity = 1;
};

/// Ascending coefficient vector in double precision.
std::vector<cplx> to_cplx_coeffs(const RatPoly& p);
std::vector<cplx> to_cplx_coeffs(const CRatPoly& p);

cplx horner(const std::vector<cplx>& coeffs, cplx x);
/// Σ |c_k| |x|^k, the scale in the residual bound.
double horner_scale(const std::vector<cplx>& coeffs, cplx x);

/// All complex roots by Aberth-Ehrlich iteration, sorted by (re, im).
/// Each root r satisfies |f(r)| <= rel_tol * Σ|c_k||r|^k.
std::vector<cplx> roots_all(const std::vector<cplx>& coeffs, const RootOptions& opt = {});
/// Exact input: squarefree decomposition first, so repeated roots are reported
/// with their exact multiplicity.
std::vector<cplx> roots_all(const RatPoly& f, const RootOptions& opt = {});

/// Groups roots closer than 1e-6 (1 + |r|).
std::vector<RootCluster> cluster_roots(const std::vector<cplx>& sorted_roots);
/// Exact multiplicities via squarefree decomposition.
std::vector<RootCluster> root_clusters(const RatPoly& f, const RootOptions& opt = {});

/// Real roots only (|im| <= 1e-9 (1 + |r|)), ascending, with multiplicity.
std::vector<RootCluster> real_root_clusters(const RatPoly& f);

void sort_complex(std::vector<cplx>& v);

/// Ascending eigenvalues of a Hermitian matrix.
std::vector<double> hermitian_eigs(const Eigen::MatrixXcd& H);

/// Bisection on a sign change; returns the midpoint once |hi - lo| <= tol.
double refine_bracket(const std::function<double(double)>& f, double lo, double hi, double tol);

}  // namespace blochjac

#endif  // BLOCHJAC_NUMERICS_HPP
