#include "blochjac/operator.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace blochjac {

std::vector<std::string> validate(const PeriodicOperator& op) {
  std::vector<std::string> out;
  if (op.p < 1) out.push_back("period p must be >= 1");
  if (op.m < 1) out.push_back("block size m must be >= 1");
  if (!out.empty()) return out;
  if (static_cast<int>(op.a.size()) != op.p) out.push_back("expected " + std::to_string(op.p) + " matrices a_n");
  if (static_cast<int>(op.b.size()) != op.p) out.push_back("expected " + std::to_string(op.p) + " matrices b_n");
  if (!out.empty()) return out;
  for (int n = 1; n <= op.p; ++n) {
    const RatMatrix& a = op.a[n - 1];
    const RatMatrix& b = op.b[n - 1];
    const std::string idx = std::to_string(n);
    if (a.rows() != op.m || a.cols() != op.m) {
      out.push_back("a_" + idx + " is not " + std::to_string(op.m) + "x" + std::to_string(op.m));
    } else if (determinant(a).is_zero()) {
      out.push_back("det a_" + idx + " = 0");
    }
    if (b.rows() != op.m || b.cols() != op.m) {
      out.push_back("b_" + idx + " is not " + std::to_string(op.m) + "x" + std::to_string(op.m));
    } else if (!(b == b.transpose())) {
      out.push_back("b not symmetric at n=" + idx);
    }
  }
  return out;
}

void require_valid(const PeriodicOperator& op) {
  auto v = validate(op);
  if (v.empty()) return;
  std::ostringstream os;
  os << "invalid operator:";
  for (const auto& s : v) os << " " << s << ";";
  throw std::invalid_argument(os.str());
}

RatMatrix A_p(const PeriodicOperator& op) {
  RatMatrix prod = RatMatrix::identity(op.m);
  for (int n = 1; n <= op.p; ++n) prod = prod * op.a_at(n);
  return inverse(prod);
}

namespace {

MatrixPoly lift(const RatMatrix& r) {
  return r.map([](const Rational& x) { return RatPoly(x); });
}

}  // namespace

MatrixPoly transfer_matrix(const PeriodicOperator& op, int n) {
  const int m = op.m;
  RatMatrix ainv = inverse(op.a_at(n));
  RatMatrix lower_left = -(ainv * op.a_at(n - 1).transpose());
  // a_n^{-1} (z - b_n) = z a_n^{-1} - a_n^{-1} b_n
  RatMatrix c0 = -(ainv * op.b_at(n));
  MatrixPoly T(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) {
    T(i, m + i) = RatPoly(1);
    for (int j = 0; j < m; ++j) {
      T(m + i, j) = RatPoly(lower_left(i, j));
      T(m + i, m + j) = RatPoly(std::vector<Rational>{c0(i, j), ainv(i, j)});
    }
  }
  return T;
}

MatrixPoly monodromy(const PeriodicOperator& op) {
  MatrixPoly M = MatrixPoly::identity(2 * op.m);
  for (int n = 1; n <= op.p; ++n) M = transfer_matrix(op, n) * M;
  return M;
}

MatrixPoly modified_monodromy(const PeriodicOperator& op) {
  const int m = op.m;
  RatMatrix P0 = RatMatrix::identity(2 * m);
  RatMatrix P0inv = RatMatrix::identity(2 * m);
  const RatMatrix a0t = op.a_at(0).transpose();
  P0.set_block(0, 0, a0t);
  P0inv.set_block(0, 0, inverse(a0t));
  return lift(P0) * monodromy(op) * lift(P0inv);
}

MatrixPoly symplectic_form(int m) {
  MatrixPoly J(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) {
    J(i, m + i) = RatPoly(1);
    J(m + i, i) = RatPoly(-1);
  }
  return J;
}

namespace {

// Shared layout of L(τ): b_j on the diagonal, a_j / a_j^T next to it, and the
// corner blocks τ^{-1} a_p^T (top right) and τ a_p (bottom left). Blocks add,
// which handles the overlap for p = 1 and p = 2.
template <class S, class Conv>
void fill_floquet(const PeriodicOperator& op, const S& tau, const S& tau_inv, Conv conv,
                  const std::function<void(int, int, const S&)>& add) {
  const int p = op.p;
  const int m = op.m;
  for (int j = 0; j < p; ++j) {
    const RatMatrix& b = op.b[j];
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) add(j * m + r, j * m + c, conv(b(r, c)));
  }
  for (int j = 0; j + 1 < p; ++j) {
    const RatMatrix& a = op.a[j];
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) {
        add(j * m + r, (j + 1) * m + c, conv(a(r, c)));
        add((j + 1) * m + c, j * m + r, conv(a(r, c)));
      }
  }
  const RatMatrix& ap = op.a[p - 1];
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) {
      // top-right block: τ^{-1} a_p^T, entry (r, c) = τ^{-1} a_p(c, r)
      add(r, (p - 1) * m + c, tau_inv * conv(ap(c, r)));
      // bottom-left block: τ a_p
      add((p - 1) * m + r, c, tau * conv(ap(r, c)));
    }
}

}  // namespace

Eigen::MatrixXcd floquet_matrix_general(const PeriodicOperator& op, std::complex<double> tau) {
  if (tau == std::complex<double>(0)) throw std::invalid_argument("tau must be nonzero");
  const int n = op.p * op.m;
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(n, n);
  std::complex<double> tau_inv = std::abs(std::abs(tau) - 1.0) <= 1e-12 ? std::conj(tau) / std::norm(tau) : 1.0 / tau;
  fill_floquet<std::complex<double>>(
      op, tau, tau_inv, [](const Rational& x) { return std::complex<double>(x.to_double(), 0); },
      [&](int i, int j, const std::complex<double>& v) { L(i, j) += v; });
  return L;
}

Eigen::MatrixXcd floquet_matrix(const PeriodicOperator& op, std::complex<double> tau) {
  if (std::abs(std::abs(tau) - 1.0) > 1e-12) throw std::invalid_argument("floquet_matrix needs |tau| = 1");
  Eigen::MatrixXcd L = floquet_matrix_general(op, tau);
  // Exact Hermitian symmetry: rounding in τ * a is mirrored by conj(τ) * a.
  Eigen::MatrixXcd H = (L + L.adjoint()) / 2.0;
  return H;
}

CRatMatrix floquet_matrix_exact(const PeriodicOperator& op, const CRational& tau) {
  const int n = op.p * op.m;
  CRatMatrix L(n, n);
  CRational tau_inv = CRational(1) / tau;
  fill_floquet<CRational>(
      op, tau, tau_inv, [](const Rational& x) { return CRational(x); },
      [&](int i, int j, const CRational& v) { L(i, j) += v; });
  return L;
}

CRatPoly floquet_char_poly(const PeriodicOperator& op, const CRational& tau) {
  CRatMatrix L = floquet_matrix_exact(op, tau);
  const int n = L.rows();
  Matrix<CRatPoly> A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = CRatPoly(L(i, j));
  for (int i = 0; i < n; ++i) A(i, i) -= CRatPoly::x();
  return determinant(A);
}

}  // namespace blochjac
