#include "qrm/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qrm/errors.hpp"

namespace qrm::specfun {

namespace {

using Wide = long double;

// Neumaier-compensated accumulator.
struct CompensatedSum {
  Wide sum = 0.0L;
  Wide carry = 0.0L;

  void add(Wide v) {
    const Wide t = sum + v;
    if (std::fabs(sum) >= std::fabs(v))
      carry += (sum - t) + v;
    else
      carry += (v - t) + sum;
    sum = t;
  }
  Wide value() const { return sum + carry; }
};

void check_argument(Wide x, const char* name) {
  if (!std::isfinite(x) || x < 0.0)
    throw DomainError(std::string(name) + ": argument must be finite and non-negative, got " +
                      std::to_string(static_cast<double>(x)));
}

// sum_m s^m (x/2)^(2m+order) / (m! (m+order)!), s = -1 for J and +1 for I.
Wide power_series(Wide x, int order, int sign) {
  const Wide half = x / 2.0L;
  const Wide q = half * half;
  Wide term = order == 0 ? 1.0L : half;
  CompensatedSum acc;
  acc.add(term);
  for (int m = 1; m < 200; ++m) {
    term *= sign * q / (static_cast<Wide>(m) * static_cast<Wide>(m + order));
    acc.add(term);
    if (std::fabs(term) <= 1e-22L * std::fabs(acc.value())) break;
  }
  return acc.value();
}

// Asymptotic coefficients a_k(nu) / x^k, summed until the terms stop
// decreasing. `alternating` selects the (-1)^k weighting used by I_nu; for
// J_nu the even and odd parts go into P and Q.
struct HankelSums {
  Wide p = 0.0L;
  Wide q = 0.0L;
  Wide total_alternating = 0.0L;
};

HankelSums hankel_sums(Wide x, int order) {
  const Wide mu = 4.0L * order * order;
  const Wide inv8x = 1.0L / (8.0L * x);
  HankelSums out;
  CompensatedSum p, q, alt;
  Wide term = 1.0L;  // a_0 / x^0
  Wide last = INFINITY;
  p.add(term);
  alt.add(term);
  for (int k = 1; k < 200; ++k) {
    const Wide odd = 2.0L * k - 1.0L;
    const Wide next = term * (mu - odd * odd) * inv8x / k;
    if (std::fabs(next) >= last || next == 0.0L) break;
    last = std::fabs(next);
    term = next;
    // J: P takes (-1)^j a_{2j}, Q takes (-1)^j a_{2j+1}.
    switch (k % 4) {
      case 0: p.add(term); break;
      case 1: q.add(term); break;
      case 2: p.add(-term); break;
      case 3: q.add(-term); break;
    }
    alt.add(k % 2 == 0 ? term : -term);
    if (std::fabs(term) < 1e-21L) break;
  }
  out.p = p.value();
  out.q = q.value();
  out.total_alternating = alt.value();
  return out;
}

Wide bessel_j_asymptotic(Wide x, int order) {
  const HankelSums h = hankel_sums(x, order);
  const Wide c = std::cos(x);
  const Wide s = std::sin(x);
  const Wide r2 = std::numbers::sqrt2_v<Wide> / 2.0L;
  // chi = x - pi/4 (order 0) or x - 3pi/4 (order 1).
  Wide cos_chi, sin_chi;
  if (order == 0) {
    cos_chi = r2 * (c + s);
    sin_chi = r2 * (s - c);
  } else {
    cos_chi = r2 * (s - c);
    sin_chi = -r2 * (s + c);
  }
  const Wide amp = std::sqrt(2.0L / (std::numbers::pi_v<Wide> * x));
  return amp * (h.p * cos_chi - h.q * sin_chi);
}

Wide bessel_i_asymptotic(Wide x, int order) {
  const HankelSums h = hankel_sums(x, order);
  const Wide amp = std::exp(x) / std::sqrt(2.0L * std::numbers::pi_v<Wide> * x);
  return amp * h.total_alternating;
}

struct WideResult {
  Wide value;
  Method method;
};

WideResult bessel_j(Wide x, int order, const char* name) {
  check_argument(x, name);
  if (x < kBesselJSwitch) return {power_series(x, order, -1), Method::series};
  return {bessel_j_asymptotic(x, order), Method::asymptotic};
}

WideResult bessel_i(Wide x, int order, const char* name) {
  check_argument(x, name);
  if (x > kBesselIMaxArg)
    throw OverflowError(std::string(name) + ": argument " + std::to_string(static_cast<double>(x)) + " exceeds " +
                        std::to_string(kBesselIMaxArg));
  if (x <= kBesselISwitch) return {power_series(x, order, +1), Method::series};
  return {bessel_i_asymptotic(x, order), Method::asymptotic};
}

SpecfunResult narrow(WideResult r) { return {static_cast<double>(r.value), r.method}; }

}  // namespace

SpecfunResult evaluate_j0(double x) { return narrow(bessel_j(x, 0, "bessel_j0")); }
SpecfunResult evaluate_j1(double x) { return narrow(bessel_j(x, 1, "bessel_j1")); }
SpecfunResult evaluate_i0(double x) { return narrow(bessel_i(x, 0, "bessel_i0")); }
SpecfunResult evaluate_i1(double x) { return narrow(bessel_i(x, 1, "bessel_i1")); }

long double bessel_j0_wide(long double x) { return bessel_j(x, 0, "bessel_j0").value; }
long double bessel_i0_wide(long double x) { return bessel_i(x, 0, "bessel_i0").value; }

}  // namespace qrm::specfun
