#pragma once

namespace qrm::specfun {

enum class Method { series, asymptotic };

struct SpecfunResult {
  double value = 0.0;
  Method method = Method::series;
};

/// Arguments at or above this use the Hankel expansion for J0 and J1.
inline constexpr double kBesselJSwitch = 12.0;
/// Arguments above this use the exponential expansion for I0 and I1.
inline constexpr double kBesselISwitch = 15.0;
/// I0 and I1 refuse arguments beyond this to stay clear of overflow.
inline constexpr double kBesselIMaxArg = 700.0;

// All four take x >= 0. Negative or non-finite x throws DomainError; the I
// family throws OverflowError above kBesselIMaxArg.
SpecfunResult evaluate_j0(double x);
SpecfunResult evaluate_j1(double x);
SpecfunResult evaluate_i0(double x);
SpecfunResult evaluate_i1(double x);

// Unrounded long double values, for sums whose terms cancel heavily.
long double bessel_j0_wide(long double x);
long double bessel_i0_wide(long double x);

inline double bessel_j0(double x) { return evaluate_j0(x).value; }
inline double bessel_j1(double x) { return evaluate_j1(x).value; }
inline double bessel_i0(double x) { return evaluate_i0(x).value; }
inline double bessel_i1(double x) { return evaluate_i1(x).value; }

}  // namespace qrm::specfun
