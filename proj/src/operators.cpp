#include "qrm/operators.hpp"

#include <cmath>
#include <sstream>

#include "qrm/errors.hpp"
#include "qrm/specfun.hpp"

namespace qrm {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool finite(double v) { return std::isfinite(v); }

// mu with mu^2 = |v|^2 / (4 D^2) + kappa / D.
double convection_mu(const ConvectionDiffusion& cd) {
  const double d = cd.diffusivity;
  return std::sqrt(dot(cd.velocity, cd.velocity) / (4.0 * d * d) + cd.reaction / d);
}

[[noreturn]] void poisson_has_no_kernel() {
  throw UnsupportedOperatorError(
      "Poisson has no nonsingular radial general solution; use the Trefftz basis");
}

}  // namespace

void validate(const OperatorSpec& op) {
  std::visit(
      Overloaded{
          [](const Poisson&) {},
          [](const Helmholtz& h) {
            if (!finite(h.k) || !(h.k > 0.0)) throw ConfigError("helmholtz: k must be positive and finite");
          },
          [](const ModifiedHelmholtz& h) {
            if (!finite(h.k) || !(h.k > 0.0))
              throw ConfigError("modified_helmholtz: k must be positive and finite");
          },
          [](const ConvectionDiffusion& cd) {
            if (!finite(cd.diffusivity) || !(cd.diffusivity > 0.0))
              throw ConfigError("convection_diffusion: diffusivity must be positive and finite");
            if (!finite(cd.velocity.x1) || !finite(cd.velocity.x2))
              throw ConfigError("convection_diffusion: velocity must be finite");
            if (!finite(cd.reaction) || cd.reaction < 0.0)
              throw ConfigError("convection_diffusion: reaction must be finite and non-negative");
            if (cd.reaction == 0.0 && cd.velocity.x1 == 0.0 && cd.velocity.x2 == 0.0)
              throw ConfigError(
                  "convection_diffusion with zero velocity and zero reaction is Poisson; "
                  "use the poisson operator");
          },
      },
      op);
}

std::string describe(const OperatorSpec& op) {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const Poisson&) { os << "poisson"; },
                 [&](const Helmholtz& h) { os << "helmholtz(k=" << h.k << ")"; },
                 [&](const ModifiedHelmholtz& h) { os << "modified_helmholtz(k=" << h.k << ")"; },
                 [&](const ConvectionDiffusion& cd) {
                   os << "convection_diffusion(D=" << cd.diffusivity << ", v=(" << cd.velocity.x1
                      << "," << cd.velocity.x2 << "), kappa=" << cd.reaction << ")";
                 },
             },
             op);
  return os.str();
}

std::complex<double> fourier_symbol(const OperatorSpec& op, Point2 omega) {
  const double w2 = dot(omega, omega);
  return std::visit(
      Overloaded{
          [&](const Poisson&) { return std::complex<double>(-w2, 0.0); },
          [&](const Helmholtz& h) { return std::complex<double>(h.k * h.k - w2, 0.0); },
          [&](const ModifiedHelmholtz& h) { return std::complex<double>(-(h.k * h.k + w2), 0.0); },
          [&](const ConvectionDiffusion& cd) {
            return std::complex<double>(-cd.diffusivity * w2 - cd.reaction, dot(cd.velocity, omega));
          },
      },
      op);
}

double kernel_value(const OperatorSpec& op, Point2 d) {
  const double r = norm(d);
  return std::visit(
      Overloaded{
          [](const Poisson&) -> double { poisson_has_no_kernel(); },
          [r](const Helmholtz& h) { return specfun::bessel_j0(h.k * r); },
          [r](const ModifiedHelmholtz& h) { return specfun::bessel_i0(h.k * r); },
          [r, d](const ConvectionDiffusion& cd) {
            const double drift = std::exp(-dot(cd.velocity, d) / (2.0 * cd.diffusivity));
            return drift * specfun::bessel_i0(convection_mu(cd) * r);
          },
      },
      op);
}

long double kernel_value_wide(const OperatorSpec& op, long double d1, long double d2) {
  const long double r = std::hypot(d1, d2);
  return std::visit(
      Overloaded{
          [](const Poisson&) -> long double { poisson_has_no_kernel(); },
          [r](const Helmholtz& h) { return specfun::bessel_j0_wide(h.k * r); },
          [r](const ModifiedHelmholtz& h) { return specfun::bessel_i0_wide(h.k * r); },
          [&](const ConvectionDiffusion& cd) {
            const long double vd = cd.velocity.x1 * d1 + cd.velocity.x2 * d2;
            const long double drift = std::exp(-vd / (2.0L * cd.diffusivity));
            return drift * specfun::bessel_i0_wide(convection_mu(cd) * r);
          },
      },
      op);
}

Point2 kernel_gradient(const OperatorSpec& op, Point2 d) {
  const double r = norm(d);
  // Radial profile derivative phi'(r) times the unit vector d / r; the limit
  // at r = 0 is the zero vector because both J0' and I0' vanish there.
  const auto radial = [&](double dphi_dr) -> Point2 {
    if (r == 0.0) return {0.0, 0.0};
    return (dphi_dr / r) * d;
  };
  return std::visit(
      Overloaded{
          [](const Poisson&) -> Point2 { poisson_has_no_kernel(); },
          [&](const Helmholtz& h) { return radial(-h.k * specfun::bessel_j1(h.k * r)); },
          [&](const ModifiedHelmholtz& h) { return radial(h.k * specfun::bessel_i1(h.k * r)); },
          [&](const ConvectionDiffusion& cd) {
            const double mu = convection_mu(cd);
            const double two_d = 2.0 * cd.diffusivity;
            const double drift = std::exp(-dot(cd.velocity, d) / two_d);
            const double profile = specfun::bessel_i0(mu * r);
            const Point2 g = radial(mu * specfun::bessel_i1(mu * r));
            return drift * (g - (profile / two_d) * cd.velocity);
          },
      },
      op);
}

double apply_operator_fd(const OperatorSpec& op, const ScalarField& u, Point2 x, double h) {
  if (!(h > 0.0) || !finite(h)) throw DomainError("apply_operator_fd: step must be positive");
  const double c = u(x);
  const double e = u({x.x1 + h, x.x2});
  const double w = u({x.x1 - h, x.x2});
  const double n = u({x.x1, x.x2 + h});
  const double s = u({x.x1, x.x2 - h});
  const double lap = ((e + w) + (n + s) - 4.0 * c) / (h * h);
  return std::visit(
      Overloaded{
          [&](const Poisson&) { return lap; },
          [&](const Helmholtz& hz) { return lap + hz.k * hz.k * c; },
          [&](const ModifiedHelmholtz& hz) { return lap - hz.k * hz.k * c; },
          [&](const ConvectionDiffusion& cd) {
            const double g1 = (e - w) / (2.0 * h);
            const double g2 = (n - s) / (2.0 * h);
            return cd.diffusivity * lap + cd.velocity.x1 * g1 + cd.velocity.x2 * g2 - cd.reaction * c;
          },
      },
      op);
}

}  // namespace qrm
