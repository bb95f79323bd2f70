#include "tbdecay/bessel.hpp"

#include <cmath>

namespace tbdecay {
namespace {

// Power series J_nu(x) = sum_k (-1)^k (x/2)^{2k+nu} / (k! (k+nu)!),
// used for |x| <= 9; beyond that the alternating-term cancellation
// costs more than the ~1e-13 budget and Miller takes over.
double series_jn(int nu, double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  for (int k = 1; k <= nu; ++k) term *= 0.5 * x / k;
  double sum = term;
  for (int k = 1; k < 64; ++k) {
    term *= -q / (static_cast<double>(k) * (k + nu));
    sum += term;
    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
  }
  return sum;
}

// Miller's downward recurrence from an even start order above the turning
// point, normalized with J0 + 2 sum_{k>=1} J_{2k} = 1. Yields J0 and J1
// together; relative accuracy ~1e-13 for the argument range used here.
void miller_j0_j1(double ax, double& j0, double& j1) {
  int m = static_cast<int>(ax + 14.0 * std::cbrt(ax) + 24.0);
  if (m % 2) ++m;
  double jnext = 0.0;     // J_{k+1}
  double jcur = 1e-300;   // J_k, starting at k = m
  double norm = 0.0;
  double j1un = 0.0;
  for (int k = m; k >= 1; --k) {
    const double jprev = (2.0 * k / ax) * jcur - jnext;  // J_{k-1}
    if ((k & 1) == 0) norm += 2.0 * jcur;
    if (k == 1) j1un = jcur;
    jnext = jcur;
    jcur = jprev;
    if (std::abs(jcur) > 1e250) {
      jcur *= 1e-250;
      jnext *= 1e-250;
      norm *= 1e-250;
      j1un *= 1e-250;
    }
  }
  norm += jcur;  // jcur is J_0
  j0 = jcur / norm;
  j1 = j1un / norm;
}

}  // namespace

double bessel_j0(double x) {
  const double ax = std::abs(x);
  if (ax <= 9.0) return series_jn(0, ax);
  double j0, j1;
  miller_j0_j1(ax, j0, j1);
  return j0;
}

double bessel_j1(double x) {
  const double ax = std::abs(x);
  double j1;
  if (ax <= 9.0) {
    j1 = series_jn(1, ax);
  } else {
    double j0;
    miller_j0_j1(ax, j0, j1);
  }
  return x < 0.0 ? -j1 : j1;  // J1 is odd
}

double bessel_j1_over_x(double x) {
  if (std::abs(x) < 1e-8) return 0.5 - x * x / 16.0;
  return bessel_j1(x) / x;
}

}  // namespace tbdecay
