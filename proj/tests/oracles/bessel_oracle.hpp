#pragma once
// Reference Bessel values for tests. Kept independent of src/specfun.cpp:
// power series carried in 50-digit arithmetic, plus the Bessel integral
// representation (periodic trapezoid rule) as a second route for J above 20.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>

namespace qrm::oracle {

using Big = boost::multiprecision::cpp_bin_float_50;

// sum_m sign^m (x/2)^(2m+order) / (m! (m+order)!), with a running
// Kahan-compensated sum so the oracle is insensitive to term ordering.
inline double bessel_series(double x, int order, int sign, int terms = 60) {
  const Big half = Big(x) / 2;
  const Big q = half * half;
  Big term = order == 0 ? Big(1) : half;
  Big sum = term, comp = 0;
  for (int m = 1; m < terms; ++m) {
    term *= sign * q / (Big(m) * Big(m + order));
    const Big y = term - comp;
    const Big t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return static_cast<double>(sum);
}

// Terms needed so the tail is negligible on [0, 50]; the nominal 60 terms
// suffice up to x = 20.
inline int series_terms_for(double x) { return x <= 20.0 ? 60 : 160; }

inline double j0_series(double x) { return bessel_series(x, 0, -1, series_terms_for(x)); }
inline double j1_series(double x) { return bessel_series(x, 1, -1, series_terms_for(x)); }
inline double i0_series(double x) { return bessel_series(x, 0, +1, series_terms_for(x)); }
inline double i1_series(double x) { return bessel_series(x, 1, +1, series_terms_for(x)); }

// J_n(x) = (1/pi) int_0^pi cos(n theta - x sin theta) dtheta, trapezoid rule.
inline double bessel_j_integral(double x, int order, int panels = 10000) {
  const double h = std::numbers::pi / panels;
  long double sum = 0.0L;
  for (int i = 0; i <= panels; ++i) {
    const double th = i * h;
    const double w = (i == 0 || i == panels) ? 0.5 : 1.0;
    sum += w * std::cos(order * th - x * std::sin(th));
  }
  return static_cast<double>(sum * h / std::numbers::pi);
}

inline double j0(double x) { return x <= 20.0 ? j0_series(x) : bessel_j_integral(x, 0); }
inline double j1(double x) { return x <= 20.0 ? j1_series(x) : bessel_j_integral(x, 1); }
inline double i0(double x) { return i0_series(x); }
inline double i1(double x) { return i1_series(x); }

}  // namespace qrm::oracle
