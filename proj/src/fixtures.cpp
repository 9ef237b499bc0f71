#include "blochjac/fixtures.hpp"

namespace blochjac {

PeriodicOperator free_operator(int p, int m) {
  PeriodicOperator op;
  op.p = p;
  op.m = m;
  op.a.assign(p, RatMatrix::identity(m));
  op.b.assign(p, RatMatrix(m, m));
  return op;
}

PeriodicOperator two_by_two_family(const std::array<Rational, 4>& alpha, const std::array<Rational, 4>& beta) {
  PeriodicOperator op;
  op.p = 2;
  op.m = 2;
  for (int n = 1; n <= 2; ++n) {
    auto al = [&](int k) { return alpha[((k % 4) + 4) % 4]; };
    auto be = [&](int k) { return beta[((k % 4) + 4) % 4]; };
    op.a.push_back(RatMatrix::from_rows({{Rational(1), be(2 * n + 1)}, {Rational(0), Rational(1)}}));
    op.b.push_back(RatMatrix::from_rows({{al(2 * n), be(2 * n)}, {be(2 * n), al(2 * n + 1)}}));
  }
  return op;
}

PeriodicOperator example1_diag(const std::array<Rational, 4>& alpha) {
  return two_by_two_family(alpha, {Rational(0), Rational(0), Rational(0), Rational(0)});
}

PeriodicOperator example2_const(const Rational& beta) {
  return two_by_two_family({Rational(0), Rational(0), Rational(0), Rational(0)}, {beta, beta, beta, beta});
}

PeriodicOperator example3(const Rational& t) {
  return two_by_two_family({Rational(1), Rational(0), Rational(-1), Rational(0)}, {t, Rational(0), Rational(0), Rational(0)});
}

PeriodicOperator example4(const Rational& t) {
  return two_by_two_family({Rational(0), Rational(1), Rational(0), Rational(1)}, {t, Rational(0), Rational(0), Rational(0)});
}

PeriodicOperator diagonal_operator(const std::vector<std::vector<Rational>>& a,
                                   const std::vector<std::vector<Rational>>& b) {
  PeriodicOperator op;
  op.m = static_cast<int>(a.size());
  op.p = static_cast<int>(a.at(0).size());
  for (int n = 0; n < op.p; ++n) {
    RatMatrix an(op.m, op.m), bn(op.m, op.m);
    for (int j = 0; j < op.m; ++j) {
      an(j, j) = a[j].at(n);
      bn(j, j) = b[j].at(n);
    }
    op.a.push_back(an);
    op.b.push_back(bn);
  }
  return op;
}

PeriodicOperator random_operator(std::mt19937_64& rng, int p, int m) {
  std::uniform_int_distribution<int> half(-1, 1);   // {-1/2, 0, 1/2}
  std::uniform_int_distribution<int> diag(0, 3);    // {1, -1, 2, -2}
  std::uniform_int_distribution<int> bent(-4, 4);   // [-2, 2] step 1/2
  static const int diag_values[4] = {1, -1, 2, -2};
  PeriodicOperator op;
  op.p = p;
  op.m = m;
  for (int n = 0; n < p; ++n) {
    RatMatrix L = RatMatrix::identity(m);
    RatMatrix U(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        if (i > j) L(i, j) = Rational(half(rng), 2);
        if (i == j) U(i, j) = Rational(diag_values[diag(rng)]);
        if (i < j) U(i, j) = Rational(half(rng), 2);
      }
    op.a.push_back(L * U);
    RatMatrix b(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) b(i, j) = b(j, i) = Rational(bent(rng), 2);
    op.b.push_back(b);
  }
  return op;
}

}  // namespace blochjac
