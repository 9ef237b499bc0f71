#include "blochjac/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "blochjac/exactmath.hpp"

namespace blochjac {

std::vector<cplx> to_cplx_coeffs(const RatPoly& p) {
  std::vector<cplx> c;
  for (const auto& x : p.coeffs()) c.emplace_back(x.to_double(), 0.0);
  return c;
}

std::vector<cplx> to_cplx_coeffs(const CRatPoly& p) {
  std::vector<cplx> c;
  for (const auto& x : p.coeffs()) c.push_back(x.to_complex());
  return c;
}

cplx horner(const std::vector<cplx>& coeffs, cplx x) {
  cplx acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double horner_scale(const std::vector<cplx>& coeffs, cplx x) {
  double ax = std::abs(x);
  double acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * ax + std::abs(*it);
  return acc;
}

void sort_complex(std::vector<cplx>& v) {
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

namespace {

bool all_real(const std::vector<cplx>& c) {
  return std::all_of(c.begin(), c.end(), [](cplx x) { return x.imag() == 0.0; });
}

// p(x) and p'(x) together.
std::pair<cplx, cplx> eval_with_derivative(const std::vector<cplx>& c, cplx x) {
  cplx p = 0, dp = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    dp = dp * x + p;
    p = p * x + *it;
  }
  return {p, dp};
}

double residual_ratio(const std::vector<cplx>& c, cplx r) {
  double scale = horner_scale(c, r);
  return scale == 0 ? 0 : std::abs(horner(c, r)) / scale;
}

// Aberth on a polynomial with nonzero constant and leading terms.
std::vector<cplx> aberth(const std::vector<cplx>& c, const RootOptions& opt) {
  const int n = static_cast<int>(c.size()) - 1;
  if (n == 1) return {-c[0] / c[1]};

  double radius = 0;
  for (int k = 0; k < n; ++k) radius = std::max(radius, std::abs(c[k] / c[n]));
  const double r0 = radius + 1;

  std::vector<cplx> z(n);
  for (int k = 0; k < n; ++k) z[k] = std::polar(r0, 2 * M_PI * k / n + 0.4);

  std::vector<bool> done(n, false);
  for (int iter = 0; iter < opt.max_iter; ++iter) {
    bool all_done = true;
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      auto [p, dp] = eval_with_derivative(c, z[i]);
      double scale = horner_scale(c, z[i]);
      if (std::abs(p) <= opt.rel_tol * 1e-2 * scale) {
        done[i] = true;
        continue;
      }
      all_done = false;
      cplx ratio = p / dp;
      cplx sum = 0;
      for (int j = 0; j < n; ++j)
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      cplx w = ratio / (1.0 - ratio * sum);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) w = ratio;
      z[i] -= w;
      if (std::abs(w) <= 1e-16 * std::max(1.0, std::abs(z[i]))) done[i] = true;
    }
    if (all_done) break;
  }

  std::vector<double> res(n);
  bool ok = true;
  for (int i = 0; i < n; ++i) {
    res[i] = residual_ratio(c, z[i]);
    if (!(res[i] <= opt.rel_tol)) ok = false;
  }
  if (!ok) {
    std::ostringstream os;
    os << "root finder did not converge (degree " << n << ", worst residual "
       << *std::max_element(res.begin(), res.end()) << ")";
    throw RootFindingError(os.str(), z, res);
  }
  return z;
}

// Real polynomials: roots with negligible imaginary part are made real and
// polished by Newton in real arithmetic.
void snap_real(const std::vector<cplx>& c, std::vector<cplx>& roots) {
  for (auto& r : roots) {
    if (std::fabs(r.imag()) > 1e-10 * (1 + std::abs(r))) continue;
    double x = r.real();
    for (int it = 0; it < 3; ++it) {
      auto [p, dp] = eval_with_derivative(c, cplx(x, 0));
      if (dp.real() == 0) break;
      double nx = x - p.real() / dp.real();
      if (residual_ratio(c, cplx(nx, 0)) > residual_ratio(c, cplx(x, 0))) break;
      x = nx;
    }
    r = cplx(x, 0);
  }
}

}  // namespace

std::vector<cplx> roots_all(const std::vector<cplx>& coeffs_in, const RootOptions& opt) {
  std::vector<cplx> c = coeffs_in;
  while (!c.empty() && c.back() == cplx(0)) c.pop_back();
  for (const auto& x : c)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) throw std::invalid_argument("non-finite coefficient");
  if (c.size() < 2) throw std::invalid_argument("roots_all needs degree >= 1");

  std::vector<cplx> roots;
  size_t zeros = 0;
  while (c[zeros] == cplx(0)) ++zeros;
  roots.assign(zeros, cplx(0));
  std::vector<cplx> rest(c.begin() + static_cast<long>(zeros), c.end());
  if (rest.size() >= 2) {
    std::vector<cplx> r = aberth(rest, opt);
    if (all_real(rest)) snap_real(rest, r);
    roots.insert(roots.end(), r.begin(), r.end());
  }
  sort_complex(roots);
  return roots;
}

std::vector<RootCluster> root_clusters(const RatPoly& f, const RootOptions& opt) {
  if (f.degree() < 1) throw std::invalid_argument("roots_all needs degree >= 1");
  std::vector<RootCluster> out;
  for (const auto& [factor, mult] : squarefree_decomposition(f))
    for (cplx r : roots_all(to_cplx_coeffs(factor), opt)) out.push_back({r, mult});
  std::sort(out.begin(), out.end(), [](const RootCluster& a, const RootCluster& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  return out;
}

std::vector<cplx> roots_all(const RatPoly& f, const RootOptions& opt) {
  std::vector<cplx> out;
  for (const auto& cl : root_clusters(f, opt)) out.insert(out.end(), cl.multiplicity, cl.value);
  return out;
}

std::vector<RootCluster> cluster_roots(const std::vector<cplx>& sorted_roots) {
  std::vector<RootCluster> out;
  std::vector<bool> used(sorted_roots.size(), false);
  for (size_t i = 0; i < sorted_roots.size(); ++i) {
    if (used[i]) continue;
    cplx sum = sorted_roots[i];
    int count = 1;
    used[i] = true;
    double radius = 1e-6 * (1 + std::abs(sorted_roots[i]));
    for (size_t j = i + 1; j < sorted_roots.size(); ++j) {
      if (used[j] || std::abs(sorted_roots[j] - sorted_roots[i]) > radius) continue;
      used[j] = true;
      sum += sorted_roots[j];
      ++count;
    }
    out.push_back({sum / static_cast<double>(count), count});
  }
  return out;
}

std::vector<RootCluster> real_root_clusters(const RatPoly& f) {
  std::vector<RootCluster> out;
  if (f.degree() < 1) return out;
  for (const auto& cl : root_clusters(f))
    if (std::fabs(cl.value.imag()) <= 1e-9 * (1 + std::abs(cl.value))) out.push_back({cplx(cl.value.real(), 0), cl.multiplicity});
  return out;
}

std::vector<double> hermitian_eigs(const Eigen::MatrixXcd& H) {
  if (H.rows() != H.cols()) throw std::invalid_argument("hermitian_eigs needs a square matrix");
  for (Eigen::Index i = 0; i < H.rows(); ++i)
    for (Eigen::Index j = 0; j <= i; ++j)
      if (std::abs(H(i, j) - std::conj(H(j, i))) > 1e-12) throw std::invalid_argument("matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  const auto& ev = solver.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

double refine_bracket(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo > 0) == (fhi > 0)) throw std::invalid_argument("no sign change in bracket");
  while (std::fabs(hi - lo) > tol) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    double fm = f(mid);
    if (fm == 0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace blochjac
