#pragma once

#include <complex>
#include <functional>
#include <string>
#include <variant>

#include "qrm/geometry.hpp"

namespace qrm {

// Sign conventions:
//   Poisson               lap u               = f
//   Helmholtz             lap u + k^2 u       = f
//   ModifiedHelmholtz     lap u - k^2 u       = f
//   ConvectionDiffusion   D lap u + v.grad u - kappa u = f
struct Poisson {};

struct Helmholtz {
  double k = 1.0;
};

struct ModifiedHelmholtz {
  double k = 1.0;
};

struct ConvectionDiffusion {
  double diffusivity = 1.0;
  Point2 velocity;
  double reaction = 0.0;
};

using OperatorSpec = std::variant<Poisson, Helmholtz, ModifiedHelmholtz, ConvectionDiffusion>;

using ScalarField = std::function<double(Point2)>;

/// Throws ConfigError for non-positive wavenumbers or diffusivity, negative
/// reaction, non-finite parameters, or a convection-diffusion operator with
/// zero velocity and zero reaction (that is Poisson).
void validate(const OperatorSpec& op);

std::string describe(const OperatorSpec& op);

/// sigma(omega) such that L exp(i omega.x) = sigma(omega) exp(i omega.x).
std::complex<double> fourier_symbol(const OperatorSpec& op, Point2 omega);

/// Nonsingular general solution phi(x - s) of L phi = 0, finite at d = 0.
/// Poisson has none and throws UnsupportedOperatorError.
double kernel_value(const OperatorSpec& op, Point2 d);
/// kernel_value in long double for displacement (d1, d2), not rounded.
long double kernel_value_wide(const OperatorSpec& op, long double d1, long double d2);

/// Gradient of kernel_value with respect to x.
Point2 kernel_gradient(const OperatorSpec& op, Point2 d);

/// Second-order centred finite-difference application of L to u at x
/// (5-point Laplacian, centred first differences).
double apply_operator_fd(const OperatorSpec& op, const ScalarField& u, Point2 x, double h);

}  // namespace qrm
