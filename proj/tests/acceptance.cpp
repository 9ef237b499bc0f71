// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "blochjac/fixtures.hpp"
#include "blochjac/inverse.hpp"
#include "blochjac/spectral.hpp"

using namespace blochjac;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

bool same_sorted(std::vector<double> a, std::vector<double> b, double tol) {
  if (a.size() != b.size()) return false;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (size_t i = 0; i < a.size(); ++i)
    if (!near(a[i], b[i], tol)) return false;
  return true;
}

RatPoly P(std::initializer_list<Rational> c) { return RatPoly(std::vector<Rational>(c)); }

std::vector<PeriodicOperator> seeded_operators(unsigned seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<PeriodicOperator> ops;
  for (int i = 0; i < count; ++i) ops.push_back(random_operator(rng, 1 + i % 3, 1 + (i / 3) % 3));
  return ops;
}

std::vector<double> edges_of(const std::vector<std::pair<double, double>>& bands) {
  std::vector<double> out;
  for (auto [lo, hi] : bands) {
    out.push_back(lo);
    out.push_back(hi);
  }
  return out;
}

// Scalar Lyapunov function from a 2x2 transfer-matrix product in doubles.
double scalar_lyapunov(const std::vector<double>& a, const std::vector<double>& b, double z) {
  const int p = static_cast<int>(a.size());
  double m00 = 1, m01 = 0, m10 = 0, m11 = 1;
  for (int n = 0; n < p; ++n) {
    const double t10 = -a[(n + p - 1) % p] / a[n], t11 = (z - b[n]) / a[n];
    const double n10 = t10 * m00 + t11 * m10, n11 = t10 * m01 + t11 * m11;
    m00 = m10;
    m01 = m11;
    m10 = n10;
    m11 = n11;
  }
  return (m00 + m11) / 2;
}

// q(z, e^{ix}) as float coefficients in z.
std::vector<cplx> q_at(const CharDeterminant& cd, cplx tau) {
  std::vector<cplx> out(cd.p * cd.m + 1, 0.0);
  for (int k = -cd.m; k <= cd.m; ++k) {
    auto c = to_cplx_coeffs(cd.q.at(k));
    for (size_t i = 0; i < c.size(); ++i) out[i] += c[i] * std::pow(tau, k);
  }
  return out;
}

const std::vector<PeriodicOperator>& battery25() {
  static const std::vector<PeriodicOperator> ops = seeded_operators(20241, 25);
  return ops;
}

Outcome criterion1() {
  Outcome o;
  const auto t0 = Clock::now();
  for (size_t i = 0; i < battery25().size(); ++i) {
    const PeriodicOperator& op = battery25()[i];
    const int m = op.m, p = op.p;
    const std::string tag = "operator " + std::to_string(i);
    MatrixPoly M = modified_monodromy(op);
    MatrixPoly J = symplectic_form(m);
    o.require(M.transpose() * J * M == J, tag + " M^T J M = J");

    // D from the determinant of M - τI, built here from M directly
    Matrix<BiPoly> Mt(2 * m, 2 * m);
    for (int r = 0; r < 2 * m; ++r)
      for (int c = 0; c < 2 * m; ++c) Mt(r, c) = BiPoly(M(r, c)) - (r == c ? BiPoly::x() : BiPoly());
    const BiPoly D = determinant(Mt);
    const CharDeterminant cd = char_determinant(op);
    o.require(D == cd.D, tag + " det(M - τI)");
    for (int j = 0; j <= 2 * m; ++j) {
      o.require(D[j] == D[2 * m - j], tag + " palindrome");
      o.require(cd.xi[j] == D[2 * m - j], tag + " ξ as coefficient");
      o.require(cd.xi[j] == cd.xi[2 * m - j], tag + " ξ symmetry");
      o.require(cd.xi[j].degree() <= p * std::min(j, 2 * m - j), tag + " deg ξ");
    }
    // Newton recursion on traces of the unmodified monodromy
    std::vector<RatPoly> xi = xi_from_traces(monodromy(op), m);
    for (int j = 1; j <= m; ++j) o.require(xi[j] == cd.xi[j], tag + " trace route ξ_" + std::to_string(j));
  }
  const double secs = seconds_since(t0);
  o.require(secs <= 60, "runtime");
  o.detail << battery25().size() << " operators, " << std::fixed << std::setprecision(2) << secs << " s (limit 60 s)";
  return o;
}

Outcome criterion2() {
  Outcome o;
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ux(0, 2 * M_PI);
  double worst = 0;
  for (size_t i = 0; i < battery25().size(); ++i) {
    const PeriodicOperator& op = battery25()[i];
    const CharDeterminant cd = char_determinant(op);
    const std::string tag = "operator " + std::to_string(i);
    const int N = op.p * op.m;
    for (const CRational& tau : {CRational(1), CRational(-1), CRational::i()}) {
      CRatPoly lhs = cd.q.eval_tau(tau);
      if (N % 2) lhs = -lhs;
      o.require(lhs == floquet_char_poly(op, tau), tag + " exact Floquet determinant");
    }
    for (int s = 0; s < 32; ++s) {
      const cplx tau = std::polar(1.0, ux(rng));
      std::vector<double> eig = hermitian_eigs(floquet_matrix(op, tau));
      std::vector<double> re;
      for (cplx r : roots_all(q_at(cd, tau))) re.push_back(r.real());
      std::sort(re.begin(), re.end());
      for (size_t k = 0; k < eig.size(); ++k) worst = std::max(worst, std::fabs(re[k] - eig[k]));
    }
  }
  o.require(worst <= 1e-7, "eigenvalues vs roots");
  o.detail << "exact at τ = 1, -1, i; 32 samples per operator, worst |Δλ| = " << std::scientific << std::setprecision(2)
           << worst << " (tol 1e-7)";
  return o;
}

Outcome criterion3() {
  Outcome o;
  const PeriodicOperator op = example3(Rational(1));
  o.require(modified_monodromy(op).trace() == P({-5, 0, 2}), "T1 = 2z² - 5");
  const SurfacePoly sp = surface_poly(char_determinant(op));
  o.require(resonance_poly(sp).rho.scaled(Rational(4)) == P({1, 4, 4}), "4ρ = 4z² + 4z + 1");
  const RatPoly d1 = P({Rational(-3, 2), Rational(-1, 2), Rational(1, 2)});
  const RatPoly d2 = P({-1, Rational(1, 2), Rational(1, 2)});
  o.require(sp.Phi == BiPoly(std::vector<RatPoly>{d1 * d2, -(d1 + d2), RatPoly(1)}), "Φ = (ν - Δ1)(ν - Δ2)");

  const BandStructure bs = band_structure(op);
  const double s5 = std::sqrt(5.0), s17 = std::sqrt(17.0), s21 = std::sqrt(21.0);
  const std::vector<double> b1 = {(1 - s21) / 2, (1 - s5) / 2, (1 + s5) / 2, (1 + s21) / 2};
  const std::vector<double> b2 = {-(1 + s17) / 2, -1, 0, (s17 - 1) / 2};
  bool matched = false;
  if (bs.branch_bands.size() == 2)
    for (int swap = 0; swap < 2; ++swap)
      matched = matched || (same_sorted(edges_of(bs.branch_bands[swap]), b1, 1e-9) &&
                            same_sorted(edges_of(bs.branch_bands[1 - swap]), b2, 1e-9));
  o.require(matched, "branch band endpoints");
  o.detail << "T1, 4ρ, Δ1, Δ2 exact; endpoints (1±√21)/2, (1±√5)/2 and -(1+√17)/2, -1, 0, (√17-1)/2 to 1e-9";
  return o;
}

Outcome criterion4() {
  Outcome o;
  BandStructure bs = band_structure(example4(Rational(0)));
  bool bands = bs.branch_bands.size() == 2;
  if (bands) {
    std::vector<std::vector<double>> e = {edges_of(bs.branch_bands[0]), edges_of(bs.branch_bands[1])};
    bands = (same_sorted(e[0], {-1, 3}, 1e-9) && same_sorted(e[1], {-2, 2}, 1e-9)) ||
            (same_sorted(e[1], {-1, 3}, 1e-9) && same_sorted(e[0], {-2, 2}, 1e-9));
  }
  o.require(bands, "t = 0 bands [-1,3] and [-2,2]");

  const double t = 0.5, w = t / (2 * std::sqrt(t * t + 1));
  const double rm = 0.5 - w, rp = 0.5 + w;
  const PeriodicOperator op = example4(Rational(1, 2));
  const SurfacePoly sp = surface_poly(char_determinant(op));
  bs = band_structure(op);
  const GapReport gr = classify_gaps(bs, sp);
  bool gap = false;
  for (const Gap& g : gr.gaps)
    if (near(g.lo, rm, 1e-9) && near(g.hi, rp, 1e-9) && g.kind == GapKind::resonance) gap = true;
  o.require(gap, "resonance gap (r-, r+)");
  bool inside = false;
  for (const ResonanceInterval& r : gr.resonance_intervals)
    if (near(r.lo, rm, 1e-9) && near(r.hi, rp, 1e-9) && r.inside_spectral_gap) inside = true;
  o.require(inside, "resonance interval inside a spectral gap");
  // independent: no Floquet eigenvalue enters (r-, r+)
  for (auto [lo, hi] : floquet_level_ranges(op, 513))
    o.require(hi <= rm + 1e-9 || lo >= rp - 1e-9, "Floquet eigenvalue inside the resonance gap");
  o.detail << "t = 0 edges to 1e-9; t = 1/2 gap (" << std::setprecision(9) << rm << ", " << rp
           << ") is a resonance gap with no Floquet eigenvalue inside";
  return o;
}

Outcome criterion5() {
  Outcome o;
  const PeriodicOperator op = example2_const(Rational(1));
  const CharDeterminant cd = char_determinant(op);
  auto values = [](const std::vector<RootCluster>& cs) {
    std::vector<double> v;
    for (const auto& c : cs)
      for (int k = 0; k < c.multiplicity; ++k) v.push_back(c.value.real());
    return v;
  };
  const double r2 = std::sqrt(2.0);
  o.require(same_sorted(values(periodic_eigs(cd)), {-2, -2, 0, 4}, 1e-9), "periodic");
  o.require(same_sorted(values(antiperiodic_eigs(cd)), {-r2, -r2, r2, r2}, 1e-9), "antiperiodic");
  // independent: L(±1) eigenvalues
  o.require(same_sorted(hermitian_eigs(floquet_matrix(op, 1.0)), {-2, -2, 0, 4}, 1e-9), "L(1) spectrum");
  o.require(same_sorted(hermitian_eigs(floquet_matrix(op, -1.0)), {-r2, -r2, r2, r2}, 1e-9), "L(-1) spectrum");
  bool triple = false;
  for (const auto& c : periodic_eigs(char_determinant(example2_const(Rational(2)))))
    triple = triple || (near(c.value.real(), -2, 1e-9) && c.multiplicity == 3);
  o.require(triple, "β = 2 triple -2");
  o.detail << "β = 1 periodic {-2 (x2), 0, 4}, antiperiodic {±√2 (x2)}; β = 2 cluster -2 of size 3";
  return o;
}

Outcome criterion6() {
  Outcome o;
  int exact_checks = 0;
  for (size_t i = 0; i < battery25().size(); ++i) {
    const PeriodicOperator& op = battery25()[i];
    const CharDeterminant cd = char_determinant(op);
    const int p = op.p, m = op.m, N = p * m;
    const std::string tag = "operator " + std::to_string(i);
    Rational sum_b, sum_sq;
    for (int n = 1; n <= p; ++n) {
      const RatMatrix& a = op.a_at(n);
      const RatMatrix& b = op.b_at(n);
      sum_b += b.trace();
      sum_sq += (b * b).trace() + (a * a.transpose()).trace() * Rational(2);
    }
    // q = det(z - L): coefficient of z^{N-1} is -Σλ, of z^{N-2} is e2 = Σ_{i<j} λ_i λ_j
    if (p >= 2) {
      o.require(cd.q.at(0)[N - 1] == -sum_b, tag + " Σλ = ΣTr b");
      for (int k = 1; k <= m; ++k) o.require(cd.q.at(k)[N - 1].is_zero(), tag + " Σλ τ-free");
      ++exact_checks;
    }
    if (p >= 3) {
      const Rational s1 = -cd.q.at(0)[N - 1];
      o.require(s1 * s1 - cd.q.at(0)[N - 2] * Rational(2) == sum_sq, tag + " Σλ² = ΣTr(b² + 2aa^T)");
      for (int k = 1; k <= m; ++k) o.require(cd.q.at(k)[N - 2].is_zero(), tag + " Σλ² τ-free");
      ++exact_checks;
      auto [lhs, rhs] = square_sum_bound(op);
      o.require(lhs >= rhs * (1 - 1e-9), tag + " Σλ² lower bound");
    }
    if (p < 3) {
      // general Newton identities at τ = 1, -1, i where the τ-free forms do not apply
      for (const CRational& tau : {CRational(1), CRational(-1), CRational::i()}) {
        const CRatPoly q = cd.q.eval_tau(tau);
        const CRatMatrix L = floquet_matrix_exact(op, tau);
        const CRational s1 = -q[N - 1];
        const CRational e2 = N >= 2 ? q[N - 2] : CRational(0);
        o.require(s1 == L.trace(), tag + " Σλ = Tr L");
        o.require(s1 * s1 - e2 * CRational(2) == (L * L).trace(), tag + " Σλ² = Tr L²");
      }
      ++exact_checks;
    }
    // sandwich with ‖J‖ from the band extremes
    const BandStructure bs = band_structure(op);
    const double lo = bs.segments.front().lo, hi = bs.segments.back().hi;
    double ninf = 0;
    for (int n = 1; n <= p; ++n)
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
          ninf = std::max({ninf, std::fabs(op.a_at(n)(r, c).to_double()), std::fabs(op.b_at(n)(r, c).to_double())});
    const double norm = std::max(std::fabs(lo), std::fabs(hi));
    o.require(ninf <= norm * (1 + 1e-9) && norm <= (4 * m - 1) * ninf * (1 + 1e-9), tag + " norm sandwich");
  }

  // equality case: b = 0, a_n a_n^T = s I
  auto orthogonal_family = [](int p, const RatMatrix& a) {
    PeriodicOperator op;
    op.p = p;
    op.m = a.rows();
    for (int n = 0; n < p; ++n) {
      op.a.push_back(a);
      op.b.push_back(RatMatrix(op.m, op.m));
    }
    return op;
  };
  std::vector<PeriodicOperator> equal_ops = {
      orthogonal_family(3, RatMatrix::from_rows({{1, 1}, {-1, 1}})),
      orthogonal_family(4, RatMatrix::from_rows({{1, 2}, {-2, 1}})),
      orthogonal_family(3, RatMatrix::from_rows({{0, 2, 0}, {0, 0, 2}, {2, 0, 0}})),
      orthogonal_family(5, RatMatrix::from_rows({{Rational(1, 2)}})),
  };
  double worst_eq = 0;
  for (const auto& op : equal_ops) {
    auto [lhs, rhs] = square_sum_bound(op);
    worst_eq = std::max(worst_eq, std::fabs(lhs - rhs) / std::max(1.0, rhs));
  }
  o.require(worst_eq <= 1e-9, "equality for b = 0, aa^T = sI");

  // centered sandwich on trace-zero fixtures
  std::vector<PeriodicOperator> centered = {example3(Rational(1)), example3(Rational(2)), example3(Rational(1, 2)),
                                            example2_const(Rational(1)), free_operator(3, 2)};
  for (const auto& op : centered) {
    const BandStructure bs = band_structure(op);
    const double lo = bs.segments.front().lo, hi = bs.segments.back().hi;
    const double ninf = entry_norm(op);
    const double left = ninf + std::fabs(hi + lo) / 2, mid = (hi - lo) / 2;
    o.require(left <= mid * (1 + 1e-9) && mid <= (4 * op.m - 1) * ninf * (1 + 1e-9), "centered sandwich");
  }
  o.detail << exact_checks << " exact trace/square-sum checks on 25 operators; bound equality to "
           << std::scientific << std::setprecision(1) << worst_eq << "; sandwiches on 25 random + "
           << centered.size() << " trace-zero fixtures";
  return o;
}

Outcome criterion7() {
  Outcome o;
  double worst = 0;
  for (int p : {2, 3, 4})
    for (int m : {1, 2}) {
      const PeriodicOperator op = free_operator(p, m);
      for (double kappa : {0.0, M_PI / 3, M_PI / 2}) {
        std::vector<double> want;
        for (int n = 0; n < p; ++n)
          for (int k = 0; k < m; ++k) want.push_back(2 * std::cos((kappa + 2 * M_PI * n) / p));
        std::sort(want.begin(), want.end());
        std::vector<double> got = hermitian_eigs(floquet_matrix(op, std::polar(1.0, kappa)));
        for (size_t i = 0; i < got.size(); ++i) worst = std::max(worst, std::fabs(got[i] - want[i]));
      }
      // T_p(z/2) by T_{n+1} = z T_n - T_{n-1}
      RatPoly t0(1), t1 = P({0, Rational(1, 2)});
      for (int n = 1; n < p; ++n) {
        RatPoly t2 = RatPoly::x() * t1 - t0;
        t0 = t1;
        t1 = t2;
      }
      const BiPoly base(std::vector<RatPoly>{RatPoly(1), t1.scaled(Rational(-2)), RatPoly(1)});
      o.require(char_determinant(op).D == base.pow(m), "D = (τ² + 1 - 2τ T_p(z/2))^m");
    }
  o.require(worst <= 1e-9, "free eigenvalues");
  o.detail << "p = 2..4, m = 1..2, κ = 0, π/3, π/2: worst |Δλ| = " << std::scientific << std::setprecision(2) << worst
           << "; D exact";
  return o;
}

Outcome criterion8() {
  Outcome o;
  const auto t0 = Clock::now();
  const std::vector<double> battery = {0, M_PI, M_PI / 2, M_PI / 3};
  const std::vector<PeriodicOperator> ops = seeded_operators(808, 20);
  double worst_q = 0, worst_band = 0;
  int runs = 0, snapped = 0;
  for (size_t i = 0; i < ops.size(); ++i) {
    const PeriodicOperator& op = ops[i];
    const CharDeterminant cd = char_determinant(op);
    std::vector<std::pair<double, double>> direct;
    for (const Segment& s : band_structure(op).segments) direct.push_back({s.lo, s.hi});
    direct = merge_intervals(direct);
    const std::vector<double> kappas(battery.begin(), battery.begin() + op.m + 1);
    for (SubsetRule rule : {SubsetRule::ascending, SubsetRule::descending, SubsetRule::random}) {
      const std::string tag = "operator " + std::to_string(i) + " rule " + std::to_string(static_cast<int>(rule));
      const Recovery r = recover_determinant(forward_spectral_data(op, kappas, rule, 17 + i));
      ++runs;
      for (int k = 0; k <= op.m; ++k)
        for (int n = 0; n <= op.p * op.m; ++n) {
          const double want = cd.q.at(k)[n].to_double();
          worst_q = std::max(worst_q, std::fabs(r.q[k][n] - want) / std::max(1.0, std::fabs(want)));
        }
      if (r.exact) {
        ++snapped;
        o.require(r.exact->D == cd.D, tag + " snapped D");
      }
      const auto rec = recovered_spectrum(r);
      o.require(rec.size() == direct.size(), tag + " band count");
      if (rec.size() == direct.size())
        for (size_t b = 0; b < rec.size(); ++b)
          worst_band = std::max({worst_band, std::fabs(rec[b].first - direct[b].first),
                                 std::fabs(rec[b].second - direct[b].second)});
    }
  }
  const double secs = seconds_since(t0);
  o.require(worst_q <= 1e-6, "q coefficients");
  o.require(worst_band <= 1e-6, "bands");
  o.require(secs <= 120, "runtime");
  o.detail << runs << " recoveries, worst q error " << std::scientific << std::setprecision(2) << worst_q
           << ", worst band edge error " << worst_band << ", " << snapped << " exact snaps all equal to D, "
           << std::fixed << std::setprecision(2) << secs << " s (limit 120 s)";
  return o;
}

Outcome criterion9() {
  Outcome o;
  // components: b = (α2, α0), (α3, α1) with a = 1
  const std::array<Rational, 4> alpha = {Rational(1), Rational(2), Rational(-1), Rational(0)};
  const SurfacePoly sp = surface_poly(char_determinant(example1_diag(alpha)));
  double worst = 0;
  for (int i = 0; i <= 40; ++i) {
    const double z = -4 + 0.2 * i;
    std::vector<double> want = {scalar_lyapunov({1, 1}, {-1, 1}, z), scalar_lyapunov({1, 1}, {0, 2}, z)};
    std::sort(want.begin(), want.end());
    const BranchValues bv = lyapunov_at(sp, z);
    std::vector<double> got = {bv.values[0].real(), bv.values[1].real()};
    std::sort(got.begin(), got.end());
    for (int k = 0; k < 2; ++k) worst = std::max(worst, std::fabs(got[k] - want[k]) / std::max(1.0, std::fabs(want[k])));
  }
  o.require(worst <= 1e-9, "diagonal Δ_j");
  o.require(resonance_poly(surface_poly(char_determinant(free_operator(2, 2)))).degenerate, "free m = 2 degenerate");
  o.require(resonance_poly(surface_poly(char_determinant(free_operator(3, 2)))).degenerate, "free p = 3 degenerate");
  o.detail << "diagonal example vs scalar monodromy, worst " << std::scientific << std::setprecision(2) << worst
           << " on 41 points; free m = 2 flagged degenerate";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"exact identity suite", criterion1},
      {"Floquet/monodromy equivalence", criterion2},
      {"example 3, t = 1", criterion3},
      {"example 4 bands and resonance gap", criterion4},
      {"example 2 periodic and antiperiodic eigenvalues", criterion5},
      {"trace identities and estimates", criterion6},
      {"free operator", criterion7},
      {"inverse round trip", criterion8},
      {"degeneracy handling", criterion9},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.str().c_str());
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
