#ifndef BLOCHJAC_SPECTRAL_HPP
#define BLOCHJAC_SPECTRAL_HPP

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "blochjac/exactmath.hpp"
#include "blochjac/numerics.hpp"
#include "blochjac/operator.hpp"

namespace blochjac {

/// Two independent computations disagreed; indicates a bug, not bad input.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// D(z, τ) = det(M(z) - τ I) = Σ_j ξ_j(z) τ^{2m-j} and q = D / (c τ^m).
struct CharDeterminant {
  int p = 0;
  int m = 0;
  BiPoly D;                 // polynomial in τ, coefficients in z
  std::vector<RatPoly> xi;  // ξ_0 .. ξ_{2m}
  Rational c;
  LaurentSym q;             // q_k = D_{k+m} / c, monic of degree pm in z

  /// η_n(τ) as a Laurent polynomial: coefficient of z^n in q.
  std::vector<Rational> eta(int n) const;
};

/// ξ_1..ξ_upto from Newton's identities on T_n = Tr M^n.
std::vector<RatPoly> xi_from_traces(const MatrixPoly& M, int upto);

/// Throws ConsistencyError if the determinant and trace routes disagree or
/// the leading coefficient of ξ_m is not (-1)^m det A_p.
CharDeterminant char_determinant(const PeriodicOperator& op);
/// ξ_j, c and q read off a given D (no operator, no cross-checks).
CharDeterminant char_determinant_from(int p, int m, const BiPoly& D);

/// Φ(z, ν) = D / (2τ)^m rewritten in ν = (τ + 1/τ)/2.
struct SurfacePoly {
  int m = 0;
  std::vector<RatPoly> phi;  // Φ = Σ φ_j(z) ν^{m-j}, φ_0 = 1
  BiPoly Phi;                // same polynomial, in ν with z coefficients
  /// Squarefree decomposition in ν: factors with constant unit leading
  /// coefficient and their multiplicities.
  std::vector<std::pair<BiPoly, int>> factors;
};

SurfacePoly surface_poly(const CharDeterminant& cd);

struct BranchValues {
  std::vector<cplx> values;  // sorted by (re, im)
  std::vector<bool> real;    // |im| <= 1e-9 (1 + |re|)
};

/// The m roots Δ_j(z) of Φ(z, ·), repeated factors expanded.
BranchValues lyapunov_at(const SurfacePoly& sp, cplx z);

struct MultiplierPair {
  cplx tau;      // |tau| >= 1
  cplx tau_inv;
  bool on_circle = false;
};

/// Multipliers τ^{±1} from τ² - 2Δ_j τ + 1 = 0 for each branch.
std::vector<MultiplierPair> multipliers_at(const SurfacePoly& sp, cplx z);

struct ResonancePoly {
  RatPoly rho;
  /// Dis_ν Φ vanished identically; rho is the discriminant of the squarefree part.
  bool degenerate = false;
};

ResonancePoly resonance_poly(const SurfacePoly& sp);

struct ResonanceSet {
  std::vector<cplx> values;  // with multiplicity, sorted by (re, im)
  std::vector<bool> real;
  std::vector<RootCluster> clusters;
  bool degenerate = false;
};

ResonanceSet resonances(const SurfacePoly& sp);

/// q(z, 1) and q(z, -1).
RatPoly periodic_poly(const CharDeterminant& cd);
RatPoly antiperiodic_poly(const CharDeterminant& cd);
std::vector<RootCluster> periodic_eigs(const CharDeterminant& cd);
std::vector<RootCluster> antiperiodic_eigs(const CharDeterminant& cd);

enum class EdgeKind { periodic, antiperiodic, resonance };
const char* to_string(EdgeKind k);

struct Segment {
  double lo = 0;
  double hi = 0;
  int multiplicity = 0;
};

struct Edge {
  double value = 0;
  std::vector<EdgeKind> kinds;
  std::vector<int> branches;  // branches entering or leaving a band here
};

struct Candidate {
  double value = 0;
  std::vector<EdgeKind> kinds;
};

struct BandStructure {
  std::vector<Segment> segments;                          // merged, positive multiplicity
  std::vector<Edge> edges;
  std::vector<std::vector<std::pair<double, double>>> branch_bands;  // per tracked branch
  std::vector<Candidate> candidates;
};

struct BandOptions {
  int grid = 257;           // Floquet cross-validation samples on [0, π]
  double tol = 1e-9;        // candidate dedupe
  int track_points = 1024;  // branch-tracking grid size
};

/// Bands from the exact data alone (no Floquet cross-check).
BandStructure band_structure(const CharDeterminant& cd, const SurfacePoly& sp, const BandOptions& opt = {});
/// Same, then checks every eigenvalue of L(e^{ix}) on the grid lies in a band.
BandStructure band_structure(const PeriodicOperator& op, const BandOptions& opt = {});

/// Branches followed along an increasing grid; values[j][i] is branch j at grid[i].
/// Branches are labelled by ascending (re, im) at grid[0].
struct TrackedBranches {
  std::vector<double> grid;
  std::vector<std::vector<cplx>> values;
};

TrackedBranches track_branches(const SurfacePoly& sp, const std::vector<double>& grid);

/// [min, max] over x in [0, π] of each ascending level returned by levels(x),
/// sampled on a grid and refined by golden-section search.
std::vector<std::pair<double, double>> level_ranges(const std::function<std::vector<double>(double)>& levels, int count,
                                                   int samples = 257);
/// [min, max] over x in [0, π] of the k-th ascending eigenvalue of L(e^{ix}).
std::vector<std::pair<double, double>> floquet_level_ranges(const PeriodicOperator& op, int samples = 257);
/// Union of intervals, joining those that overlap or lie within tol.
std::vector<std::pair<double, double>> merge_intervals(std::vector<std::pair<double, double>> v, double tol = 1e-9);

enum class GapKind { stable, resonance, mixed };
const char* to_string(GapKind k);

struct Gap {
  double lo = 0;
  double hi = 0;
  GapKind kind = GapKind::stable;
  std::vector<EdgeKind> lo_kinds;
  std::vector<EdgeKind> hi_kinds;
};

/// Interval between consecutive real resonances on which some branches are non-real.
struct ResonanceInterval {
  double lo = 0;
  double hi = 0;
  bool inside_spectral_gap = false;
};

struct GapReport {
  std::vector<Gap> gaps;
  std::vector<ResonanceInterval> resonance_intervals;
};

GapReport classify_gaps(const BandStructure& bs, const SurfacePoly& sp);

struct IdentityCheck {
  std::string name;
  bool applicable = true;
  bool exact = true;
  bool passed = false;
  double residual = 0;
  std::string detail;
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;
  /// True when every applicable check passed.
  bool ok() const;
  const IdentityCheck* find(const std::string& name) const;
};

/// Σλ² and the lower bound 2pm |det(a_1 … a_p)|^{2/pm}.
std::pair<double, double> square_sum_bound(const PeriodicOperator& op);

/// ‖J‖_∞ = max |a_n(j,k)|, |b_n(j,k)|.
double entry_norm(const PeriodicOperator& op);

IdentityReport verify_identities(const PeriodicOperator& op, unsigned seed = 1);

IdentityReport leading_asymptotics(const CharDeterminant& cd, const SurfacePoly& sp, const PeriodicOperator& op);

}  // namespace blochjac

#endif  // BLOCHJAC_SPECTRAL_HPP
