#include "smlorenz/norms.hpp"

#include <cassert>
#include <cmath>

namespace sml {
namespace spectral {

IMatN sym_part(const IMatN& A) {
  assert(A.rows == A.cols);
  IMatN s(A.rows, A.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) s(i, j) = (A(i, j) + A(j, i)) * Interval(0.5);
  return s;
}

namespace {

double gershgorin_upper(const IMatN& S) {
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < S.rows; ++i) {
    Interval row = S(i, i);
    for (int j = 0; j < S.cols; ++j)
      if (j != i) row += Interval(S(i, j).mag());
    best = std::max(best, row.hi());
  }
  return best;
}

// Interval determinant of a leading principal minor, n <= 3.
Interval minor_det(const IMatN& S, int n) {
  if (n == 1) return S(0, 0);
  if (n == 2) return S(0, 0) * S(1, 1) - S(0, 1) * S(1, 0);
  return S(0, 0) * (S(1, 1) * S(2, 2) - S(1, 2) * S(2, 1)) -
         S(0, 1) * (S(1, 0) * S(2, 2) - S(1, 2) * S(2, 0)) +
         S(0, 2) * (S(1, 0) * S(2, 1) - S(1, 1) * S(2, 0));
}

// Sylvester criterion over the interval family: if every leading principal
// minor is strictly positive for all members, all symmetric members are
// positive definite.
bool interval_pd(const IMatN& S) {
  for (int n = 1; n <= S.rows; ++n)
    if (!(minor_det(S, n).lo() > 0.0)) return false;
  return true;
}

// Non-rigorous lambda_max estimate of the midpoint matrix (shifted power
// iteration); only used to seed the rigorous certificate.
double power_estimate(const IMatN& S) {
  const int n = S.rows;
  double m[3][3] = {};
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m[i][j] = S(i, j).mid();
      scale = std::max(scale, std::fabs(m[i][j]));
    }
  if (scale == 0.0) return 0.0;
  const double shift = 3.0 * scale;  // makes the matrix PSD, lambda_max dominant
  double v[3] = {1.0, 0.7, 0.4};
  double lam = 0.0;
  for (int it = 0; it < 200; ++it) {
    double w[3] = {};
    for (int i = 0; i < n; ++i) {
      w[i] = shift * v[i];
      for (int j = 0; j < n; ++j) w[i] += m[i][j] * v[j];
    }
    double nrm = 0.0;
    for (int i = 0; i < n; ++i) nrm += w[i] * w[i];
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) return 0.0;
    lam = 0.0;
    for (int i = 0; i < n; ++i) {
      v[i] = w[i] / nrm;
      lam += v[i] * w[i] * nrm;  // Rayleigh quotient of the shifted matrix
    }
  }
  double ray = 0.0;
  for (int i = 0; i < n; ++i) {
    double wi = shift * v[i];
    for (int j = 0; j < n; ++j) wi += m[i][j] * v[j];
    ray += v[i] * wi;
  }
  return ray - shift;
}

}  // namespace

double sym_eig_upper(const IMatN& S) {
  assert(S.rows == S.cols && S.rows >= 1 && S.rows <= 3);
  const double g = gershgorin_upper(S);
  if (S.rows == 1) return S(0, 0).hi();

  double scale = 1e-300;
  for (const auto& x : S.a) scale = std::max(scale, x.mag());
  const double est = power_estimate(S);

  double slack = std::max(1e-14 * scale, 1e-300);
  for (int it = 0; it < 64; ++it) {
    const double mu = est + slack;
    if (!(mu < g)) break;
    // verify mu*I - S is positive definite for every member
    IMatN T = -S;
    for (int i = 0; i < T.rows; ++i) T(i, i) += Interval(mu);
    if (interval_pd(T)) return mu;
    slack *= 4.0;
  }
  return g;
}

double sym_eig_lower(const IMatN& S) { return -sym_eig_upper(-S); }

}  // namespace spectral

Interval log_norm_upper(const IMatN& A) {
  const IMatN S = spectral::sym_part(A);
  const double up = spectral::sym_eig_upper(S);
  // every symmetric member has lambda_max >= its largest diagonal entry
  double lo = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < S.rows; ++i) lo = std::max(lo, S(i, i).lo());
  return Interval(std::min(lo, up), up);
}

Interval m_l_lower(const IMatN& A) {
  const IMatN S = spectral::sym_part(A);
  const double lo = std::max(spectral::sym_eig_lower(S), -std::numeric_limits<double>::infinity());
  double up = std::numeric_limits<double>::infinity();
  for (int i = 0; i < S.rows; ++i) up = std::min(up, S(i, i).hi());
  return Interval(lo, std::max(lo, up));
}

Interval m_lower(const IMatN& A) {
  const IMatN G = A.transpose() * A;
  const double lam = std::max(0.0, spectral::sym_eig_lower(G));
  const double lo = sqrt(Interval(lam)).lo();
  // upper estimate: smallest column norm of any member bounds inf m(M)
  double up = std::numeric_limits<double>::infinity();
  for (int j = 0; j < A.cols; ++j) {
    Interval s(0.0);
    for (int i = 0; i < A.rows; ++i) s += square(A(i, j));
    up = std::min(up, sqrt(s).hi());
  }
  return Interval(lo, std::max(lo, up));
}

Interval op_norm_upper(const IMatN& A) {
  const IMatN G = A.transpose() * A;
  const double lam = std::max(0.0, spectral::sym_eig_upper(G));
  double up = sqrt(Interval(lam)).hi();

  // cheap cross-check: ||M||_2 <= sqrt(||M||_1 ||M||_inf)
  Interval n1(0.0), ninf(0.0);
  for (int j = 0; j < A.cols; ++j) {
    Interval s(0.0);
    for (int i = 0; i < A.rows; ++i) s += Interval(A(i, j).mag());
    if (s.hi() > n1.hi()) n1 = s;
  }
  for (int i = 0; i < A.rows; ++i) {
    Interval s(0.0);
    for (int j = 0; j < A.cols; ++j) s += Interval(A(i, j).mag());
    if (s.hi() > ninf.hi()) ninf = s;
  }
  up = std::min(up, sqrt(n1 * ninf).hi());

  // lower bound on sup ||M||: the largest column norm of the hull midpoints
  double lo = 0.0;
  for (int j = 0; j < A.cols; ++j) {
    Interval s(0.0);
    for (int i = 0; i < A.rows; ++i) s += square(Interval(A(i, j).mid()));
    lo = std::max(lo, sqrt(s).lo());
  }
  return Interval(std::min(lo, up), up);
}

}  // namespace sml
