#include "siegel/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace siegel {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240;
constexpr double kPi = 3.14159265358979323846264338327950;

// ascending series for I0, I1
void bessel_i01(double x, double& i0, double& i1) {
  double q = x * x / 4.0;
  double term0 = 1.0, term1 = x / 2.0;
  i0 = term0;
  i1 = term1;
  for (int m = 1; m < 200; ++m) {
    term0 *= q / (double(m) * m);
    term1 *= q / (double(m) * (m + 1));
    i0 += term0;
    i1 += term1;
    if (term0 < 1e-18 * i0 && term1 < 1e-18 * i1) break;
  }
}

// series K0 plus the Wronskian identity for K1, reliable for x <= 8
void bessel_k01_series(double x, double& k0, double& k1) {
  double i0, i1;
  bessel_i01(x, i0, i1);
  double q = x * x / 4.0;
  double term = 1.0, h = 0.0, sum = 0.0;
  for (int m = 1; m < 200; ++m) {
    term *= q / (double(m) * m);
    h += 1.0 / m;
    sum += term * h;
    if (term * h < 1e-18 * (sum + 1e-300)) break;
  }
  k0 = -(std::log(x / 2.0) + kEulerGamma) * i0 + sum;
  // I0 K1 + I1 K0 = 1/x
  k1 = (1.0 / x - i1 * k0) / i0;
}

// asymptotic series, truncated at the smallest term
double bessel_k_asymptotic(double nu, double x) {
  double mu = 4.0 * nu * nu;
  double sum = 1.0, term = 1.0;
  for (int k = 1; k < 60; ++k) {
    double factor = (mu - double(2 * k - 1) * (2 * k - 1)) / (8.0 * x * k);
    double next = term * factor;
    if (std::fabs(next) >= std::fabs(term)) break;
    term = next;
    sum += term;
    if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
  }
  return std::sqrt(kPi / (2.0 * x)) * std::exp(-x) * sum;
}

double bessel_k_half_integer(int n, double x) {
  // K_{n+1/2}(x) = sqrt(pi/2x) e^{-x} sum_{j<=n} (n+j)! / (j! (n-j)! (2x)^j)
  double sum = 0.0;
  double c = 1.0;  // (n+j)!/(j!(n-j)!) at j = 0
  double p = 1.0;
  for (int j = 0; j <= n; ++j) {
    if (j > 0) {
      c = c * double(n + j) * double(n - j + 1) / double(j);
      p /= 2.0 * x;
    }
    sum += c * p;
  }
  return std::sqrt(kPi / (2.0 * x)) * std::exp(-x) * sum;
}

}  // namespace

double bessel_k(double nu, double x) {
  if (x <= 0) throw std::domain_error("bessel_k: requires x > 0");
  if (nu < 0) nu = -nu;
  double twice = 2.0 * nu;
  double rounded = std::round(twice);
  if (std::fabs(twice - rounded) > 1e-9)
    throw std::domain_error("bessel_k: nu must be integer or half-integer");
  long tn = long(rounded);
  if (tn % 2 == 1) return bessel_k_half_integer(int((tn - 1) / 2), x);

  int n = int(tn / 2);
  double k0, k1;
  if (x <= 8.0) {
    bessel_k01_series(x, k0, k1);
  } else {
    k0 = bessel_k_asymptotic(0.0, x);
    k1 = bessel_k_asymptotic(1.0, x);
  }
  if (n == 0) return k0;
  if (n == 1) return k1;
  double km = k0, k = k1;
  for (int m = 1; m < n; ++m) {
    double knext = km + (2.0 * m / x) * k;
    km = k;
    k = knext;
  }
  return k;
}

}  // namespace siegel
