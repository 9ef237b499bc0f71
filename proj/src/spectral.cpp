#include "blochjac/spectral.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace blochjac {

namespace {

struct RawDeterminant {
  CharDeterminant cd;
  std::vector<RatPoly> xi_traces;  // ξ_0..ξ_m from Newton's identities
  Rational c_expected;
};

RawDeterminant compute_determinant(const PeriodicOperator& op) {
  require_valid(op);
  const int m = op.m;
  const int n = 2 * m;
  MatrixPoly M = modified_monodromy(op);
  Matrix<BiPoly> A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = BiPoly(M(i, j));
  for (int i = 0; i < n; ++i) A(i, i) -= BiPoly::x();

  RawDeterminant raw;
  CharDeterminant& cd = raw.cd;
  cd.p = op.p;
  cd.m = m;
  cd.D = determinant(A);
  if (cd.D.degree() != n || cd.D.lead() != RatPoly(1)) throw ConsistencyError("det(M - τI) is not monic of degree 2m in τ");
  for (int j = 0; j <= n; ++j) cd.xi.push_back(cd.D[n - j]);

  raw.xi_traces = xi_from_traces(monodromy(op), m);
  raw.c_expected = determinant(A_p(op));
  if (m % 2) raw.c_expected = -raw.c_expected;
  cd.c = cd.xi[m][op.p * m];

  std::vector<RatPoly> qc;
  if (!cd.c.is_zero()) {
    const Rational cinv = cd.c.inverse();
    for (int j = 0; j <= n; ++j) qc.push_back(cd.D[j].scaled(cinv));
  } else {
    qc.assign(n + 1, RatPoly());
  }
  cd.q = LaurentSym(m, std::move(qc));
  return raw;
}

// Float copy of a polynomial in ν with z coefficients.
struct FloatFactor {
  std::vector<std::vector<cplx>> coeffs;  // coeffs[k] = coefficient of ν^k as z-polynomial
  int multiplicity = 1;

  std::vector<cplx> at(cplx z) const {
    std::vector<cplx> out;
    for (const auto& c : coeffs) out.push_back(horner(c, z));
    return out;
  }
};

std::vector<FloatFactor> float_factors(const SurfacePoly& sp) {
  std::vector<FloatFactor> out;
  for (const auto& [f, mult] : sp.factors) {
    FloatFactor ff;
    for (const auto& c : f.coeffs()) ff.coeffs.push_back(to_cplx_coeffs(c));
    ff.multiplicity = mult;
    out.push_back(std::move(ff));
  }
  return out;
}

std::vector<cplx> factor_roots(const FloatFactor& f, cplx z) {
  std::vector<cplx> c = f.at(z);
  if (c.size() == 2) return {-c[0] / c[1]};
  return roots_all(c);
}

bool is_real_branch(cplx v) { return std::fabs(v.imag()) <= 1e-9 * (1 + std::fabs(v.real())); }
bool in_band(cplx v) { return is_real_branch(v) && std::fabs(v.real()) <= 1.0; }

bool complex_less(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// Assignment of new roots to predicted positions minimising the squared
// distance; permutations are enumerated in lexicographic order so ties keep
// the lowest index.
std::vector<cplx> match(const std::vector<cplx>& pred, std::vector<cplx> roots) {
  const size_t d = pred.size();
  std::vector<size_t> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  if (d <= 6) {
    std::vector<size_t> best = perm;
    double best_cost = INFINITY;
    do {
      double cost = 0;
      for (size_t j = 0; j < d; ++j) cost += std::norm(pred[j] - roots[perm[j]]);
      if (cost < best_cost) {
        best_cost = cost;
        best = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::vector<cplx> out(d);
    for (size_t j = 0; j < d; ++j) out[j] = roots[best[j]];
    return out;
  }
  std::vector<cplx> out(d);
  std::vector<bool> used(d, false);
  for (size_t j = 0; j < d; ++j) {
    size_t pick = 0;
    double best = INFINITY;
    for (size_t k = 0; k < d; ++k) {
      if (used[k]) continue;
      double cost = std::norm(pred[j] - roots[k]);
      if (cost < best) {
        best = cost;
        pick = k;
      }
    }
    used[pick] = true;
    out[j] = roots[pick];
  }
  return out;
}

void add_kind(std::vector<EdgeKind>& kinds, EdgeKind k) {
  if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
  std::sort(kinds.begin(), kinds.end());
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

std::vector<Rational> CharDeterminant::eta(int n) const {
  std::vector<Rational> out;
  for (int k = -m; k <= m; ++k) out.push_back(q.at(k)[n]);
  return out;
}

std::vector<RatPoly> xi_from_traces(const MatrixPoly& M, int upto) {
  std::vector<RatPoly> T(upto + 1);
  MatrixPoly P = M;
  for (int n = 1; n <= upto; ++n) {
    T[n] = P.trace();
    if (n < upto) P = P * M;
  }
  std::vector<RatPoly> xi(upto + 1);
  xi[0] = RatPoly(1);
  for (int s = 1; s <= upto; ++s) {
    RatPoly acc;
    for (int j = 0; j < s; ++j) acc += T[s - j] * xi[j];
    xi[s] = acc.scaled(Rational(-1, s));
  }
  return xi;
}

CharDeterminant char_determinant(const PeriodicOperator& op) {
  RawDeterminant raw = compute_determinant(op);
  const CharDeterminant& cd = raw.cd;
  for (int j = 1; j <= cd.m; ++j)
    if (raw.xi_traces[j] != cd.xi[j])
      throw ConsistencyError("trace recursion disagrees with det(M - τI) at ξ_" + std::to_string(j));
  if (cd.c != raw.c_expected)
    throw ConsistencyError("leading coefficient of ξ_m is " + cd.c.str() + ", expected (-1)^m det A_p = " +
                           raw.c_expected.str());
  return cd;
}

CharDeterminant char_determinant_from(int p, int m, const BiPoly& D) {
  CharDeterminant cd;
  cd.p = p;
  cd.m = m;
  cd.D = D;
  for (int j = 0; j <= 2 * m; ++j) cd.xi.push_back(D[2 * m - j]);
  cd.c = cd.xi[m][p * m];
  if (cd.c.is_zero()) throw std::invalid_argument("ξ_m has no z^{pm} term");
  std::vector<RatPoly> qc;
  for (int j = 0; j <= 2 * m; ++j) qc.push_back(D[j].scaled(cd.c.inverse()));
  cd.q = LaurentSym(m, std::move(qc));
  return cd;
}

SurfacePoly surface_poly(const CharDeterminant& cd) {
  const int m = cd.m;
  std::vector<RatPoly> L;
  for (int j = 0; j <= 2 * m; ++j) L.push_back(cd.D[j]);
  SurfacePoly sp;
  sp.m = m;
  sp.Phi = palindrome_to_nu(LaurentSym(m, std::move(L))).scaled(RatPoly(Rational(1, 2).pow(m)));
  if (sp.Phi.degree() != m || sp.Phi.lead() != RatPoly(1)) throw ConsistencyError("Φ is not monic of degree m in ν");
  for (int j = 0; j <= m; ++j) sp.phi.push_back(sp.Phi[m - j]);
  sp.factors = squarefree_decomposition(sp.Phi);
  BiPoly prod(1);
  for (const auto& [f, mult] : sp.factors) prod *= f.pow(mult);
  if (prod != sp.Phi) throw ConsistencyError("squarefree decomposition of Φ does not multiply back");
  return sp;
}

BranchValues lyapunov_at(const SurfacePoly& sp, cplx z) {
  BranchValues out;
  for (const auto& f : float_factors(sp)) {
    std::vector<cplx> r = factor_roots(f, z);
    for (int k = 0; k < f.multiplicity; ++k) out.values.insert(out.values.end(), r.begin(), r.end());
  }
  sort_complex(out.values);
  for (cplx v : out.values) out.real.push_back(is_real_branch(v));
  return out;
}

std::vector<MultiplierPair> multipliers_at(const SurfacePoly& sp, cplx z) {
  std::vector<MultiplierPair> out;
  for (cplx nu : lyapunov_at(sp, z).values) {
    cplx s = std::sqrt(nu * nu - 1.0);
    cplx t1 = nu + s, t2 = nu - s;
    MultiplierPair mp;
    mp.tau = std::abs(t1) >= std::abs(t2) ? t1 : t2;
    mp.tau_inv = 1.0 / mp.tau;
    mp.on_circle = std::fabs(std::abs(mp.tau) - 1.0) <= 1e-9;
    out.push_back(mp);
  }
  return out;
}

ResonancePoly resonance_poly(const SurfacePoly& sp) {
  if (sp.m == 1) return {RatPoly(1), false};
  RatPoly rho = discriminant(sp.Phi);
  if (!rho.zero()) return {rho, false};
  BiPoly deflated(1);
  for (const auto& [f, mult] : sp.factors) deflated *= f;
  return {discriminant(deflated), true};
}

ResonanceSet resonances(const SurfacePoly& sp) {
  ResonancePoly rp = resonance_poly(sp);
  ResonanceSet out;
  out.degenerate = rp.degenerate;
  if (rp.rho.degree() < 1) return out;
  out.clusters = root_clusters(rp.rho);
  for (const auto& cl : out.clusters)
    for (int k = 0; k < cl.multiplicity; ++k) out.values.push_back(cl.value);
  for (cplx v : out.values) out.real.push_back(std::fabs(v.imag()) <= 1e-9 * (1 + std::abs(v)));
  return out;
}

RatPoly periodic_poly(const CharDeterminant& cd) {
  RatPoly s;
  for (int k = -cd.m; k <= cd.m; ++k) s += cd.q.at(k);
  return s;
}

RatPoly antiperiodic_poly(const CharDeterminant& cd) {
  RatPoly s;
  for (int k = -cd.m; k <= cd.m; ++k) s += (k % 2 ? -cd.q.at(k) : cd.q.at(k));
  return s;
}

std::vector<RootCluster> periodic_eigs(const CharDeterminant& cd) { return root_clusters(periodic_poly(cd)); }
std::vector<RootCluster> antiperiodic_eigs(const CharDeterminant& cd) { return root_clusters(antiperiodic_poly(cd)); }

const char* to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::periodic: return "periodic";
    case EdgeKind::antiperiodic: return "antiperiodic";
    case EdgeKind::resonance: return "resonance";
  }
  return "?";
}

const char* to_string(GapKind k) {
  switch (k) {
    case GapKind::stable: return "stable";
    case GapKind::resonance: return "resonance";
    case GapKind::mixed: return "mixed";
  }
  return "?";
}

TrackedBranches track_branches(const SurfacePoly& sp, const std::vector<double>& grid) {
  TrackedBranches tb;
  tb.grid = grid;
  if (grid.empty()) return tb;
  std::vector<std::vector<cplx>> all;  // branches before expansion of multiplicities
  std::vector<int> mult;
  for (const auto& f : float_factors(sp)) {
    const size_t d = f.coeffs.size() - 1;
    std::vector<std::vector<cplx>> br(d, std::vector<cplx>(grid.size()));
    std::vector<cplx> cur = factor_roots(f, grid[0]);
    for (size_t j = 0; j < d; ++j) br[j][0] = cur[j];
    for (size_t i = 1; i < grid.size(); ++i) {
      std::vector<cplx> pred(d);
      for (size_t j = 0; j < d; ++j) {
        pred[j] = br[j][i - 1];
        if (i >= 2) {
          double h0 = grid[i - 1] - grid[i - 2];
          double h1 = grid[i] - grid[i - 1];
          if (h0 > 0) pred[j] += (br[j][i - 1] - br[j][i - 2]) * (h1 / h0);
        }
      }
      std::vector<cplx> r = match(pred, factor_roots(f, grid[i]));
      for (size_t j = 0; j < d; ++j) br[j][i] = r[j];
    }
    for (auto& b : br) {
      all.push_back(std::move(b));
      mult.push_back(f.multiplicity);
    }
  }
  for (size_t j = 0; j < all.size(); ++j)
    for (int k = 0; k < mult[j]; ++k) tb.values.push_back(all[j]);
  std::stable_sort(tb.values.begin(), tb.values.end(),
                   [](const std::vector<cplx>& a, const std::vector<cplx>& b) { return complex_less(a[0], b[0]); });
  return tb;
}

BandStructure band_structure(const CharDeterminant& cd, const SurfacePoly& sp, const BandOptions& opt) {
  BandStructure bs;
  std::vector<Candidate> raw;
  for (const auto& c : real_root_clusters(periodic_poly(cd))) raw.push_back({c.value.real(), {EdgeKind::periodic}});
  for (const auto& c : real_root_clusters(antiperiodic_poly(cd)))
    raw.push_back({c.value.real(), {EdgeKind::antiperiodic}});
  ResonanceSet rs = resonances(sp);
  for (size_t i = 0; i < rs.values.size(); ++i)
    if (rs.real[i]) raw.push_back({rs.values[i].real(), {EdgeKind::resonance}});
  std::sort(raw.begin(), raw.end(), [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
  for (const auto& c : raw) {
    if (!bs.candidates.empty() && c.value - bs.candidates.back().value <= opt.tol) {
      add_kind(bs.candidates.back().kinds, c.kinds[0]);
      continue;
    }
    bs.candidates.push_back(c);
  }
  const auto& C = bs.candidates;
  const int m = cd.m;
  bs.branch_bands.assign(m, {});
  if (C.size() < 2) return bs;

  // Tracking grid: a lead-in stretch left of every candidate, then the
  // interior of each candidate interval with its midpoint as a grid point.
  const int nint = static_cast<int>(C.size()) - 1;
  const double range = C.back().value - C.front().value;
  const double lead = C.front().value - 0.1 * (1 + range);
  int K = std::max(16, opt.track_points / nint);
  if (K % 2) ++K;
  std::vector<double> grid;
  const int lead_points = 64;
  for (int i = 0; i < lead_points; ++i) grid.push_back(lead + (C.front().value - lead) * i / lead_points);
  std::vector<size_t> mid_index(nint);
  for (int i = 0; i < nint; ++i) {
    const double lo = C[i].value, hi = C[i + 1].value;
    for (int j = 1; j < K; ++j) {
      if (j == K / 2) mid_index[i] = grid.size();
      grid.push_back(lo + (hi - lo) * j / K);
    }
  }
  TrackedBranches tb = track_branches(sp, grid);

  // status[i][j]: branch j real with |Δ_j| <= 1 on interval i
  std::vector<std::vector<bool>> status(nint, std::vector<bool>(m, false));
  std::vector<int> mult(nint, 0);
  for (int i = 0; i < nint; ++i)
    for (int j = 0; j < m; ++j) {
      status[i][j] = in_band(tb.values[j][mid_index[i]]);
      mult[i] += status[i][j];
    }

  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < nint; ++i) {
      if (!status[i][j]) continue;
      auto& bands = bs.branch_bands[j];
      if (!bands.empty() && bands.back().second == C[i].value)
        bands.back().second = C[i + 1].value;
      else
        bands.push_back({C[i].value, C[i + 1].value});
    }
  }

  for (int i = 0; i < nint; ++i) {
    if (mult[i] == 0) continue;
    if (!bs.segments.empty() && bs.segments.back().hi == C[i].value && bs.segments.back().multiplicity == mult[i])
      bs.segments.back().hi = C[i + 1].value;
    else
      bs.segments.push_back({C[i].value, C[i + 1].value, mult[i]});
  }

  for (int i = 0; i <= nint; ++i) {
    Edge e{C[i].value, C[i].kinds, {}};
    for (int j = 0; j < m; ++j) {
      bool left = i > 0 && status[i - 1][j];
      bool right = i < nint && status[i][j];
      if (left != right) e.branches.push_back(j);
    }
    if (!e.branches.empty()) bs.edges.push_back(std::move(e));
  }
  return bs;
}

BandStructure band_structure(const PeriodicOperator& op, const BandOptions& opt) {
  CharDeterminant cd = char_determinant(op);
  SurfacePoly sp = surface_poly(cd);
  BandStructure bs = band_structure(cd, sp, opt);
  const int n = std::max(opt.grid, 2);
  for (int i = 0; i < n; ++i) {
    const double x = M_PI * i / (n - 1);
    for (double e : hermitian_eigs(floquet_matrix(op, std::polar(1.0, x)))) {
      bool inside = std::any_of(bs.segments.begin(), bs.segments.end(),
                                [&](const Segment& s) { return e >= s.lo - 1e-7 && e <= s.hi + 1e-7; });
      if (!inside)
        throw ConsistencyError("eigenvalue " + fmt(e) + " of L(e^{ix}) at x = " + fmt(x) + " lies outside every band");
    }
  }
  return bs;
}

std::vector<std::pair<double, double>> level_ranges(const std::function<std::vector<double>(double)>& levels, int count,
                                                   int samples) {
  const int n = std::max(samples, 3);
  auto level = [&](int k, double x) { return levels(x).at(k); };
  std::vector<double> xs(n);
  std::vector<std::vector<double>> vals(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = M_PI * i / (n - 1);
    vals[i] = levels(xs[i]);
    if (static_cast<int>(vals[i].size()) != count) throw std::invalid_argument("level count changed along the grid");
  }
  // Golden-section search for an extremum of sign * level on [a, b].
  auto golden = [&](int k, double a, double b, double sign) {
    const double g = (std::sqrt(5.0) - 1) / 2;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = sign * level(k, c), fd = sign * level(k, d);
    for (int it = 0; it < 80 && b - a > 1e-13; ++it) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - g * (b - a);
        fc = sign * level(k, c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + g * (b - a);
        fd = sign * level(k, d);
      }
    }
    return sign * std::min(fc, fd);
  };
  std::vector<std::pair<double, double>> out;
  for (int k = 0; k < count; ++k) {
    int imin = 0, imax = 0;
    for (int i = 1; i < n; ++i) {
      if (vals[i][k] < vals[imin][k]) imin = i;
      if (vals[i][k] > vals[imax][k]) imax = i;
    }
    double lo = vals[imin][k], hi = vals[imax][k];
    if (imin > 0 && imin < n - 1) lo = std::min(lo, golden(k, xs[imin - 1], xs[imin + 1], 1.0));
    if (imax > 0 && imax < n - 1) hi = std::max(hi, golden(k, xs[imax - 1], xs[imax + 1], -1.0));
    out.push_back({lo, hi});
  }
  return out;
}

std::vector<std::pair<double, double>> floquet_level_ranges(const PeriodicOperator& op, int samples) {
  return level_ranges([&](double x) { return hermitian_eigs(floquet_matrix(op, std::polar(1.0, x))); }, op.p * op.m,
                      samples);
}

std::vector<std::pair<double, double>> merge_intervals(std::vector<std::pair<double, double>> v, double tol) {
  std::sort(v.begin(), v.end());
  std::vector<std::pair<double, double>> out;
  for (const auto& iv : v) {
    if (!out.empty() && iv.first <= out.back().second + tol) out.back().second = std::max(out.back().second, iv.second);
    else out.push_back(iv);
  }
  return out;
}

GapReport classify_gaps(const BandStructure& bs, const SurfacePoly& sp) {
  GapReport rep;
  auto kinds_at = [&](double v) {
    for (const auto& c : bs.candidates)
      if (std::fabs(c.value - v) <= 1e-12 * (1 + std::fabs(v))) return c.kinds;
    return std::vector<EdgeKind>{};
  };
  auto eigen_kind = [](const std::vector<EdgeKind>& k) {
    return std::find(k.begin(), k.end(), EdgeKind::periodic) != k.end() ||
           std::find(k.begin(), k.end(), EdgeKind::antiperiodic) != k.end();
  };
  for (size_t i = 0; i + 1 < bs.segments.size(); ++i) {
    const double lo = bs.segments[i].hi, hi = bs.segments[i + 1].lo;
    if (!(hi > lo)) continue;
    Gap g;
    g.lo = lo;
    g.hi = hi;
    g.lo_kinds = kinds_at(lo);
    g.hi_kinds = kinds_at(hi);
    const bool e_lo = eigen_kind(g.lo_kinds), e_hi = eigen_kind(g.hi_kinds);
    if (e_lo && e_hi)
      g.kind = GapKind::stable;
    else if (!e_lo && !e_hi)
      g.kind = GapKind::resonance;
    else
      g.kind = GapKind::mixed;
    rep.gaps.push_back(g);
  }

  std::vector<double> real_res;
  for (const auto& c : bs.candidates)
    if (std::find(c.kinds.begin(), c.kinds.end(), EdgeKind::resonance) != c.kinds.end()) real_res.push_back(c.value);
  for (size_t i = 0; i + 1 < real_res.size(); ++i) {
    const double lo = real_res[i], hi = real_res[i + 1];
    BranchValues bv = lyapunov_at(sp, cplx((lo + hi) / 2, 0));
    if (std::all_of(bv.real.begin(), bv.real.end(), [](bool r) { return r; })) continue;
    ResonanceInterval ri{lo, hi, false};
    for (const auto& g : rep.gaps)
      if (g.lo <= lo + 1e-9 && hi <= g.hi + 1e-9) ri.inside_spectral_gap = true;
    rep.resonance_intervals.push_back(ri);
  }
  return rep;
}

bool IdentityReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return !c.applicable || c.passed; });
}

const IdentityCheck* IdentityReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

double entry_norm(const PeriodicOperator& op) {
  double best = 0;
  for (int n = 0; n < op.p; ++n)
    for (int i = 0; i < op.m; ++i)
      for (int j = 0; j < op.m; ++j) {
        best = std::max(best, std::fabs(op.a[n](i, j).to_double()));
        best = std::max(best, std::fabs(op.b[n](i, j).to_double()));
      }
  return best;
}

namespace {

Rational trace_b(const PeriodicOperator& op) {
  Rational s(0);
  for (const auto& b : op.b) s += b.trace();
  return s;
}

Rational trace_b2_aat(const PeriodicOperator& op) {
  Rational s(0);
  for (int n = 0; n < op.p; ++n) {
    s += (op.b[n] * op.b[n]).trace();
    s += Rational(2) * (op.a[n] * op.a[n].transpose()).trace();
  }
  return s;
}

// Power sums s_1, s_2 of the roots of a monic polynomial of degree N.
std::pair<CRational, CRational> power_sums(const CRatPoly& f) {
  const int N = f.degree();
  CRational s1 = -f[N - 1];
  CRational s2 = s1 * s1 - CRational(2) * f[N - 2];
  return {s1, s2};
}

const std::vector<std::pair<std::string, CRational>>& special_taus() {
  static const std::vector<std::pair<std::string, CRational>> t = {
      {"1", CRational(1)}, {"-1", CRational(-1)}, {"i", CRational::i()}};
  return t;
}

}  // namespace

std::pair<double, double> square_sum_bound(const PeriodicOperator& op) {
  const double lhs = trace_b2_aat(op).to_double();
  RatMatrix prod = RatMatrix::identity(op.m);
  for (const auto& a : op.a) prod = prod * a;
  const double det = std::fabs(determinant(prod).to_double());
  const double pm = op.p * op.m;
  return {lhs, 2 * pm * std::pow(det, 2.0 / pm)};
}

IdentityReport verify_identities(const PeriodicOperator& op, unsigned seed) {
  require_valid(op);
  IdentityReport rep;
  const int p = op.p, m = op.m, N = p * m;
  auto add = [&](IdentityCheck c) { rep.checks.push_back(std::move(c)); };

  MatrixPoly M = modified_monodromy(op);
  MatrixPoly J = symplectic_form(m);
  add({"symplectic", true, true, (M.transpose() * J * M - J).is_zero_matrix(), 0, "M^T J M = J"});
  add({"unit_determinant", true, true, determinant(M) == RatPoly(1), 0, "det M = 1"});

  RawDeterminant raw = compute_determinant(op);
  const CharDeterminant& cd = raw.cd;
  bool pal = true, sym = true, deg = true, tr = true;
  for (int j = 0; j <= 2 * m; ++j) {
    if (cd.D[j] != cd.D[2 * m - j]) pal = false;
    if (cd.xi[j] != cd.xi[2 * m - j]) sym = false;
    if (cd.xi[j].degree() > p * std::min(j, 2 * m - j)) deg = false;
  }
  for (int j = 1; j <= m; ++j)
    if (raw.xi_traces[j] != cd.xi[j]) tr = false;
  add({"palindrome", true, true, pal, 0, "D(z,τ) = τ^{2m} D(z,1/τ)"});
  add({"xi_symmetry", true, true, sym, 0, "ξ_j = ξ_{2m-j}"});
  add({"xi_degree", true, true, deg, 0, "deg ξ_j <= p min(j, 2m-j)"});
  add({"trace_route", true, true, tr, 0, "ξ_1..ξ_m from Tr M^n agree with det(M - τI)"});
  add({"leading_c", true, true, cd.c == raw.c_expected, 0, "c = " + cd.c.str() + ", (-1)^m det A_p = " + raw.c_expected.str()});

  const int sign = N % 2 ? -1 : 1;
  std::vector<CRatPoly> q_at;
  for (const auto& [label, tau] : special_taus()) {
    CRatPoly lhs = cd.q.eval_tau(tau).scaled(CRational(sign));
    q_at.push_back(lhs);
    add({"floquet_determinant_" + label, true, true, lhs == floquet_char_poly(op, tau), 0,
         "(-1)^{pm} q(z, " + label + ") = det(L(" + label + ") - zI)"});
  }

  const Rational sum_b = trace_b(op);
  const Rational sum_sq = trace_b2_aat(op);
  {
    IdentityCheck c{"trace_sum", true, true, true, 0, ""};
    if (p >= 2) {
      for (int k = -m; k <= m; ++k)
        if (k != 0 && !cd.q.at(k)[N - 1].is_zero()) c.passed = false;
      if (cd.q.at(0)[N - 1] != -sum_b) c.passed = false;
      c.detail = "η_{pm-1} is constant and equals -Σ Tr b_n = " + (-sum_b).str();
    } else {
      for (size_t t = 0; t < q_at.size(); ++t) {
        CRatMatrix L = floquet_matrix_exact(op, special_taus()[t].second);
        CRational s1 = power_sums(cd.q.eval_tau(special_taus()[t].second)).first;
        if (s1 != L.trace()) c.passed = false;
      }
      c.detail = "p = 1: Σλ(τ) = Tr L(τ) at τ = 1, -1, i";
    }
    add(c);
  }
  {
    IdentityCheck c{"square_sum", true, true, true, 0, ""};
    for (const auto& [label, tau] : special_taus()) {
      CRational s2 = power_sums(cd.q.eval_tau(tau)).second;
      if (p >= 3) {
        if (s2 != CRational(sum_sq)) c.passed = false;
      } else {
        CRatMatrix L = floquet_matrix_exact(op, tau);
        if (s2 != (L * L).trace()) c.passed = false;
      }
    }
    c.detail = p >= 3 ? "Σλ²(τ) = Σ Tr(b_n² + 2 a_n a_n^T) = " + sum_sq.str() + " at τ = 1, -1, i"
                      : "p < 3: Σλ²(τ) = Tr L(τ)² at τ = 1, -1, i";
    add(c);
  }
  {
    auto [lhs, rhs] = square_sum_bound(op);
    IdentityCheck c{"square_sum_bound", p >= 3, false, false, rhs - lhs, ""};
    c.passed = lhs >= rhs * (1 - 1e-9);
    c.detail = "Σλ² = " + fmt(lhs) + " >= 2pm |det(a_1...a_p)|^{2/pm} = " + fmt(rhs);
    add(c);
  }

  {
    IdentityCheck c1{"norm_sandwich", true, false, false, 0, ""};
    IdentityCheck c2{"centered_sandwich", sum_b.is_zero(), false, false, 0, ""};
    try {
      BandStructure bs = band_structure(op);
      const double lo = bs.segments.front().lo, hi = bs.segments.back().hi;
      const double ninf = entry_norm(op);
      const double norm = std::max(std::fabs(lo), std::fabs(hi));
      const double upper = (4 * m - 1) * ninf;
      c1.passed = ninf <= norm * (1 + 1e-9) && norm <= upper * (1 + 1e-9);
      c1.residual = std::max(ninf - norm, norm - upper);
      c1.detail = "‖J‖_∞ = " + fmt(ninf) + ", ‖J‖ = " + fmt(norm) + ", (4m-1)‖J‖_∞ = " + fmt(upper);
      const double left = ninf + std::fabs(hi + lo) / 2, mid = (hi - lo) / 2;
      c2.passed = left <= mid * (1 + 1e-9) && mid <= upper * (1 + 1e-9);
      c2.residual = std::max(left - mid, mid - upper);
      c2.detail = "‖J‖_∞ + |λ+ + λ-|/2 = " + fmt(left) + ", (λ+ - λ-)/2 = " + fmt(mid) + ", bound " + fmt(upper);
    } catch (const std::exception& e) {
      c1.detail = c2.detail = std::string("band structure failed: ") + e.what();
    }
    add(c1);
    add(c2);
  }

  {
    IdentityCheck c{"chebyshev_traces", true, false, true, 0, ""};
    SurfacePoly sp = surface_poly(cd);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(-21, 21);
    std::ostringstream zs;
    for (int s = 0; s < 5; ++s) {
      const Rational z(num(rng), 7);
      zs << (s ? ", " : "") << z.str();
      RatMatrix Mz = M.map([&](const RatPoly& e) { return e.eval(z); });
      RatMatrix P = Mz;
      std::vector<cplx> branches = lyapunov_at(sp, cplx(z.to_double(), 0)).values;
      for (int n = 1; n <= 3; ++n) {
        const double lhs = (P.trace() * Rational(1, 2)).to_double();
        cplx rhs = 0;
        double scale = std::fabs(lhs);
        const std::vector<cplx> Tn = to_cplx_coeffs(chebyshev(n));
        for (cplx d : branches) {
          cplx t = horner(Tn, d);
          rhs += t;
          scale += std::abs(t);
        }
        const double err = std::abs(lhs - rhs) / std::max(1.0, scale);
        c.residual = std::max(c.residual, err);
        P = P * Mz;
      }
    }
    c.passed = c.residual <= 1e-8;
    c.detail = "(1/2) Tr M^n(z) = Σ T_n(Δ_j(z)), n <= 3, z in {" + zs.str() + "}";
    add(c);
  }
  return rep;
}

IdentityReport leading_asymptotics(const CharDeterminant& cd, const SurfacePoly& sp, const PeriodicOperator& op) {
  IdentityReport rep;
  const int p = cd.p, m = cd.m, N = p * m;
  bool monic = cd.q.at(0).degree() == N && cd.q.at(0).lead() == Rational(1);
  for (int k = 1; k <= m; ++k)
    if (cd.q.at(k).degree() >= N) monic = false;
  rep.checks.push_back({"q_monic", true, true, monic, 0, "q(z,τ) = z^{pm} + lower terms"});
  rep.checks.push_back({"xi_m_leading", true, true, cd.xi[m][N] == cd.c && cd.xi[m].degree() == N, 0,
                        "ξ_m = c z^{pm} + O(z^{pm-1}), c = " + cd.c.str()});
  bool deg = true;
  for (int j = 0; j <= m; ++j)
    if (cd.xi[j].degree() > p * j) deg = false;
  rep.checks.push_back({"xi_degree", true, true, deg, 0, "deg ξ_j <= pj"});

  RatMatrix Ap = A_p(op);
  Eigen::MatrixXd A(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) A(i, j) = Ap(i, j).to_double();
  Eigen::EigenSolver<Eigen::MatrixXd> es(A);
  std::vector<cplx> tau0(m);
  for (int i = 0; i < m; ++i) tau0[i] = es.eigenvalues()(i);
  sort_complex(tau0);

  const double z = 1000.0;
  const double zp = std::pow(z, p);
  std::vector<cplx> scaled;
  for (cplx d : lyapunov_at(sp, cplx(z, 0)).values) scaled.push_back(d / zp);
  std::vector<cplx> half(m);
  for (int i = 0; i < m; ++i) half[i] = tau0[i] / 2.0;
  std::vector<cplx> matched = match(half, scaled);
  double worst = 0;
  for (int i = 0; i < m; ++i) worst = std::max(worst, std::abs(matched[i] - half[i]) / std::abs(half[i]));
  rep.checks.push_back({"branch_asymptotics", true, false, worst <= 0.1, worst,
                        "Δ_j(z)/z^p vs eigenvalues of A_p/2 at z = 1000"});

  // Leading coefficient of ρ is 2^{m(1-m)} Π_{i<j} (τ_i - τ_j)² over the
  // eigenvalues of A_p, i.e. a scaled discriminant of det(x - A_p).
  MatrixPoly xA = Ap.map([](const Rational& v) { return RatPoly(-v); });
  for (int i = 0; i < m; ++i) xA(i, i) += RatPoly::x();
  const RatPoly chi = determinant(xA);
  const Rational dis = m >= 2 ? discriminant(chi) : Rational(0);
  ResonancePoly rp = resonance_poly(sp);
  IdentityCheck rc{"resonance_asymptotics", m >= 2 && !rp.degenerate && !dis.is_zero(), true, false, 0, ""};
  if (rc.applicable) {
    const int e = N * (m - 1);
    const Rational want = dis * Rational(2).pow(m * (1 - m));
    rc.passed = rp.rho.degree() == e && rp.rho[e] == want;
    if (!rc.passed) rc.residual = std::fabs((rp.rho[e] - want).to_double()) / std::fabs(want.to_double());
    rc.detail = "deg ρ = " + std::to_string(rp.rho.degree()) + ", coefficient of z^" + std::to_string(e) + " = " +
                rp.rho[e].str() + " vs 2^{m(1-m)} Dis det(x - A_p) = " + want.str();
  } else {
    rc.detail = "needs m >= 2, nondegenerate ρ and distinct eigenvalues of A_p";
  }
  rep.checks.push_back(rc);
  return rep;
}

}  // namespace blochjac
