#include "blochjac/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace blochjac {

namespace {

std::vector<cplx> poly_from_roots(const std::vector<cplx>& roots) {
  std::vector<cplx> h{1.0};
  for (cplx r : roots) {
    std::vector<cplx> next(h.size() + 1, 0.0);
    for (size_t i = 0; i < h.size(); ++i) {
      next[i + 1] += h[i];
      next[i] -= r * h[i];
    }
    h = std::move(next);
  }
  return h;
}

// y_0 + Σ_{j>=1} y_j 2 cos(j κ)
cplx eval_cosine_series(const std::vector<cplx>& y, double kappa) {
  cplx v = y[0];
  for (size_t j = 1; j < y.size(); ++j) v += y[j] * (2 * std::cos(j * kappa));
  return v;
}

double condition_number(const Eigen::MatrixXd& W) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(W);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  return smin == 0 ? INFINITY : sv(0) / smin;
}

}  // namespace

void check_spectral_data(const SpectralData& sd) {
  if (sd.p < 1 || sd.m < 1) throw std::invalid_argument("p and m must be >= 1");
  if (static_cast<int>(sd.kappas.size()) != sd.m + 1)
    throw std::invalid_argument("expected " + std::to_string(sd.m + 1) + " angles κ_0..κ_m");
  if (static_cast<int>(sd.lambda.size()) != sd.m + 1)
    throw std::invalid_argument("expected " + std::to_string(sd.m + 1) + " eigenvalue sets Λ_0..Λ_m");
  for (int j = 0; j <= sd.m; ++j) {
    const int want = j == 0 ? sd.p * sd.m : (sd.m - j) * sd.p + 1;
    if (static_cast<int>(sd.lambda[j].size()) != want)
      throw std::invalid_argument("#Λ_" + std::to_string(j) + " = " + std::to_string(sd.lambda[j].size()) +
                                  ", expected " + std::to_string(want));
    for (cplx v : sd.lambda[j])
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw std::invalid_argument("non-finite eigenvalue");
  }
  for (int i = 0; i <= sd.m; ++i)
    for (int j = i + 1; j <= sd.m; ++j)
      if (std::fabs(std::cos(sd.kappas[i]) - std::cos(sd.kappas[j])) <= 1e-9)
        throw std::invalid_argument("cos κ_" + std::to_string(i) + " = cos κ_" + std::to_string(j));
}

std::vector<int> index_set(int p, int m, int s) {
  if (s == m) return {0};
  std::vector<int> out;
  for (int n = p * (m - s - 1) + 1; n <= p * (m - s); ++n) out.push_back(n);
  return out;
}

int index_level(int p, int m, int n) {
  if (n == 0) return m;
  return m - (n + p - 1) / p;
}

Eigen::MatrixXd cosine_matrix(const std::vector<double>& kappas, int s) {
  Eigen::MatrixXd W(s + 1, s + 1);
  for (int r = 0; r <= s; ++r)
    for (int j = 0; j <= s; ++j) W(r, j) = std::cos(j * kappas.at(r));
  return W;
}

std::vector<cplx> constrained_poly(const std::vector<cplx>& roots, const std::vector<cplx>& top) {
  const int k = static_cast<int>(roots.size());
  const int s = static_cast<int>(top.size()) - 1;
  if (k < 1 || s < 0) throw std::invalid_argument("constrained_poly needs at least one root and one coefficient");
  std::vector<cplx> h = poly_from_roots(roots);
  // r_{k+i} = Σ_l g_l h_{k+i-l}; h is monic, so solve from the top down.
  std::vector<cplx> g(s + 1, 0.0);
  for (int i = s; i >= 0; --i) {
    cplx v = top[i];
    for (int l = i + 1; l <= s; ++l) {
      const int idx = k + i - l;
      if (idx >= 0) v -= g[l] * h[idx];
    }
    g[i] = v;
  }
  std::vector<cplx> r(k + s + 1, 0.0);
  for (int i = 0; i <= s; ++i)
    for (int j = 0; j <= k; ++j) r[i + j] += g[i] * h[j];
  return r;
}

SpectralData forward_spectral_data(const PeriodicOperator& op, const std::vector<double>& kappas, SubsetRule rule,
                                   unsigned seed) {
  require_valid(op);
  SpectralData sd;
  sd.p = op.p;
  sd.m = op.m;
  sd.kappas = kappas;
  if (static_cast<int>(kappas.size()) != op.m + 1)
    throw std::invalid_argument("expected " + std::to_string(op.m + 1) + " angles");
  for (int j = 0; j <= op.m; ++j) {
    std::vector<double> e = hermitian_eigs(floquet_matrix(op, std::polar(1.0, kappas[j])));
    std::vector<cplx> all(e.begin(), e.end());
    if (j == 0) {
      sd.lambda.push_back(all);
      continue;
    }
    const size_t n = static_cast<size_t>((op.m - j) * op.p + 1);
    if (rule == SubsetRule::descending) std::reverse(all.begin(), all.end());
    if (rule == SubsetRule::random) {
      std::mt19937_64 rng(seed + 7919u * static_cast<unsigned>(j));
      std::shuffle(all.begin(), all.end(), rng);
    }
    all.resize(n);
    sd.lambda.push_back(all);
  }
  check_spectral_data(sd);
  return sd;
}

Recovery recover_determinant(const SpectralData& sd) {
  check_spectral_data(sd);
  const int p = sd.p, m = sd.m, N = p * m;

  // full[j]: all coefficients of q(·, e^{iκ_j}) once known
  std::vector<std::vector<cplx>> full(m + 1);
  full[0] = poly_from_roots(sd.lambda[0]);
  std::vector<std::vector<cplx>> eta(N + 1);
  for (int n : index_set(p, m, 0)) eta[n] = {full[0][n]};

  for (int k = 0; k < m; ++k) {
    const double kappa = sd.kappas[k + 1];
    const int K = static_cast<int>(sd.lambda[k + 1].size());
    std::vector<cplx> top;
    for (int n = K; n <= N; ++n) top.push_back(eval_cosine_series(eta[n], kappa));
    full[k + 1] = constrained_poly(sd.lambda[k + 1], top);

    Eigen::MatrixXd W = cosine_matrix(sd.kappas, k + 1);
    if (condition_number(W) > 1e12) throw InconsistentDataError("κ values too close");
    Eigen::MatrixXd B = W;
    for (int r = 0; r <= k + 1; ++r)
      for (int j = 1; j <= k + 1; ++j) B(r, j) *= 2;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
    for (int n : index_set(p, m, k + 1)) {
      Eigen::VectorXd re(k + 2), im(k + 2);
      for (int r = 0; r <= k + 1; ++r) {
        re(r) = full[r][n].real();
        im(r) = full[r][n].imag();
      }
      Eigen::VectorXd yr = qr.solve(re), yi = qr.solve(im);
      eta[n].resize(k + 2);
      for (int j = 0; j <= k + 1; ++j) eta[n][j] = cplx(yr(j), yi(j));
    }
  }

  Recovery rec;
  rec.p = p;
  rec.m = m;
  rec.eta.resize(N + 1);
  rec.q.assign(m + 1, std::vector<double>(N + 1, 0.0));
  for (int n = 0; n <= N; ++n)
    for (size_t j = 0; j < eta[n].size(); ++j) {
      rec.eta[n].push_back(eta[n][j].real());
      rec.q[j][n] = eta[n][j].real();
    }
  if (std::fabs(rec.q[m][0]) < 1e-14) throw InconsistentDataError("inconsistent spectral data: η_0 has no τ^m term");
  rec.c = 1 / rec.q[m][0];

  // The real q must vanish at every prescribed eigenvalue.
  bool bad = false;
  for (int j = 0; j <= m; ++j) {
    std::vector<cplx> coeffs(N + 1, 0.0);
    for (int n = 0; n <= N; ++n) coeffs[n] = eval_cosine_series(std::vector<cplx>(rec.eta[n].begin(), rec.eta[n].end()), sd.kappas[j]);
    double worst = 0;
    for (cplx lam : sd.lambda[j]) {
      // scale by |λ| >= 1 so that a root at 0 with a vanishing constant term is not 0/0
      const double scale = horner_scale(coeffs, std::max(1.0, std::abs(lam)));
      worst = std::max(worst, scale == 0 ? 0.0 : std::abs(horner(coeffs, lam)) / scale);
    }
    rec.residuals.push_back(worst);
    if (!(worst <= 1e-7)) bad = true;
  }
  if (bad) {
    std::ostringstream os;
    os << "inconsistent spectral data: residuals";
    for (double r : rec.residuals) os << " " << r;
    throw InconsistentDataError(os.str(), rec.residuals);
  }

  // Rational reconstruction of every coefficient.
  std::vector<RatPoly> qk(m + 1);
  bool snapped = true;
  for (int k = 0; k <= m && snapped; ++k) {
    std::vector<Rational> c(N + 1);
    for (int n = 0; n <= N; ++n) {
      auto r = snap_to_rational(rec.q[k][n], 1000000, 1e-7);
      // Only trust a snap that beats the 1/d² spacing of nearby fractions by a
      // wide margin; otherwise float noise can select a wrong convergent.
      if (r) {
        const double d = r->denominator().get_d();
        if (std::fabs(r->to_double() - rec.q[k][n]) * d * d > 1e-2) r.reset();
      }
      if (!r) {
        snapped = false;
        break;
      }
      c[n] = *r;
    }
    qk[k] = RatPoly(std::move(c));
  }
  if (snapped && !qk[m].zero()) {
    const Rational c = qk[m][0].inverse();
    std::vector<RatPoly> D(2 * m + 1);
    for (int j = 0; j <= 2 * m; ++j) D[j] = qk[std::abs(j - m)].scaled(c);
    rec.exact = char_determinant_from(p, m, BiPoly(std::move(D)));
  }
  return rec;
}

std::vector<std::pair<double, double>> recovered_spectrum(const Recovery& r, int samples) {
  const int N = r.p * r.m;
  auto levels = [&](double x) {
    std::vector<cplx> coeffs(N + 1, 0.0);
    for (int n = 0; n <= N; ++n) {
      double v = r.q[0][n];
      for (int k = 1; k <= r.m; ++k) v += r.q[k][n] * 2 * std::cos(k * x);
      coeffs[n] = v;
    }
    std::vector<double> out;
    for (cplx z : roots_all(coeffs)) out.push_back(z.real());
    std::sort(out.begin(), out.end());
    // A double root comes back split by about sqrt(eps). When a close pair
    // straddles a critical point where q itself vanishes, use that point.
    std::vector<cplx> d1(N), d2(std::max(N - 1, 1), 0.0);
    for (int n = 1; n <= N; ++n) d1[n - 1] = coeffs[n] * static_cast<double>(n);
    for (int n = 2; n <= N; ++n) d2[n - 2] = coeffs[n] * static_cast<double>(n * (n - 1));
    for (int i = 0; i + 1 < N; ++i) {
      const double gap = out[i + 1] - out[i];
      if (gap > 1e-6 * (1 + std::fabs(out[i]))) continue;
      double c = (out[i] + out[i + 1]) / 2;
      for (int it = 0; it < 8; ++it) {
        const double h = horner(d2, c).real();
        if (h == 0) break;
        c -= horner(d1, c).real() / h;
      }
      const double res = std::abs(horner(coeffs, c)) / horner_scale(coeffs, std::max(1.0, std::fabs(c)));
      if (std::fabs(c - (out[i] + out[i + 1]) / 2) <= gap && res <= 1e-12) out[i] = out[i + 1] = c;
    }
    return out;
  };
  return merge_intervals(level_ranges(levels, N, samples));
}

cplx eval_recovered(const Recovery& r, cplx z, cplx tau) {
  cplx v = 0;
  for (int k = 0; k <= r.m; ++k) {
    std::vector<cplx> c(r.q[k].begin(), r.q[k].end());
    const cplx h = k == 0 ? cplx(1) : std::pow(tau, k) + std::pow(tau, -k);
    v += horner(c, z) * h;
  }
  return v;
}

}  // namespace blochjac
