#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "oracles/bessel_oracle.hpp"
#include "qrm/errors.hpp"
#include "qrm/operators.hpp"

using namespace qrm;

namespace {

const std::vector<OperatorSpec> kernel_ops = {Helmholtz{1.0},           Helmholtz{2.0},
                                              Helmholtz{5.0},           ModifiedHelmholtz{1.0},
                                              ModifiedHelmholtz{3.0},   ConvectionDiffusion{1.0, {2.0, 0.0}, 0.0},
                                              ConvectionDiffusion{1.0, {2.0, 0.0}, 1.0},
                                              ConvectionDiffusion{0.5, {-1.0, 0.5}, 0.3}};

Point2 random_displacement(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = 0.05 + 1.95 * u(rng);
  const double th = 2.0 * std::numbers::pi * u(rng);
  return {r * std::cos(th), r * std::sin(th)};
}

}  // namespace

TEST_CASE("fourier_symbol examples") {
  CHECK(fourier_symbol(Poisson{}, {0, 0}) == std::complex<double>(0, 0));
  CHECK(fourier_symbol(Helmholtz{1.0}, {1, 0}) == std::complex<double>(0, 0));
  CHECK(fourier_symbol(ConvectionDiffusion{1.0, {1, 0}, 1.0}, {1, 0}) == std::complex<double>(-2, 1));
  CHECK(fourier_symbol(ModifiedHelmholtz{2.0}, {1, 1}) == std::complex<double>(-6, 0));
}

TEST_CASE("kernel_value examples") {
  CHECK(kernel_value(Helmholtz{3.0}, {0, 0}) == 1.0);
  CHECK(std::abs(kernel_value(ModifiedHelmholtz{1.0}, {1, 0}) - oracle::i0(1.0)) < 1e-9);
  CHECK(std::abs(kernel_value(ModifiedHelmholtz{1.0}, {1, 0}) - 1.2660658778) < 1e-9);
  const double cd = kernel_value(ConvectionDiffusion{1.0, {2, 0}, 0.0}, {1, 0});
  CHECK(std::abs(cd - std::exp(-1.0) * oracle::i0(1.0)) < 1e-9);
  CHECK(std::abs(cd - 0.4657596076) < 1e-9);
  CHECK_THROWS_AS(kernel_value(Poisson{}, {1, 0}), UnsupportedOperatorError);
}

TEST_CASE("kernel_gradient examples") {
  CHECK(kernel_gradient(Helmholtz{2.0}, {0, 0}) == Point2{0, 0});
  const Point2 g = kernel_gradient(ModifiedHelmholtz{1.0}, {1, 0});
  CHECK(std::abs(g.x1 - oracle::i1(1.0)) < 1e-9);
  CHECK(std::abs(g.x1 - 0.5651591040) < 1e-9);
  CHECK(g.x2 == 0.0);
  const Point2 c = kernel_gradient(ConvectionDiffusion{1.0, {2, 0}, 0.0}, {0, 0});
  CHECK(c.x1 == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(c.x2 == 0.0);
  CHECK_THROWS_AS(kernel_gradient(Poisson{}, {1, 0}), UnsupportedOperatorError);
}

TEST_CASE("apply_operator_fd examples") {
  const auto quad = [](Point2 x) { return x.x1 * x.x1 + x.x2 * x.x2; };
  CHECK(apply_operator_fd(Poisson{}, quad, {0, 0}, 1e-3) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(apply_operator_fd(Poisson{}, quad, {0.3, -0.8}, 1e-3) == doctest::Approx(4.0).epsilon(1e-8));
  const auto s = [](Point2 x) { return std::sin(x.x1); };
  CHECK(std::abs(apply_operator_fd(Helmholtz{1.0}, s, {0.3, 0.7}, 1e-3)) < 1e-6);
  const auto e = [](Point2 x) { return std::exp(x.x1); };
  CHECK(std::abs(apply_operator_fd(ConvectionDiffusion{1.0, {2, 0}, 1.0}, e, {0, 0}, 1e-3) - 2.0) < 1e-5);
  CHECK_THROWS_AS(apply_operator_fd(Poisson{}, quad, {0, 0}, 0.0), DomainError);
}

TEST_CASE("operator validation") {
  CHECK_THROWS_AS(validate(Helmholtz{0.0}), ConfigError);
  CHECK_THROWS_AS(validate(ModifiedHelmholtz{-1.0}), ConfigError);
  CHECK_THROWS_AS(validate(ConvectionDiffusion{0.0, {1, 0}, 0.0}), ConfigError);
  CHECK_THROWS_AS(validate(ConvectionDiffusion{1.0, {0, 0}, 0.0}), ConfigError);
  CHECK_THROWS_AS(validate(ConvectionDiffusion{1.0, {1, 0}, -1.0}), ConfigError);
  CHECK_NOTHROW(validate(ConvectionDiffusion{1.0, {0, 0}, 1.0}));
  CHECK_NOTHROW(validate(Poisson{}));
}

TEST_CASE("property: kernels are annihilated to second order") {
  for (const auto& op : kernel_ops) {
    CAPTURE(describe(op));
    std::mt19937_64 rng(3);
    double sc = 0, sf = 0;
    const Point2 s{0.2, -0.1};
    const auto phi = [&](Point2 x) { return kernel_value(op, x - s); };
    for (int i = 0; i < 50; ++i) {
      const Point2 x = s + random_displacement(rng);
      sc += std::pow(apply_operator_fd(op, phi, x, 1e-3), 2);
      sf += std::pow(apply_operator_fd(op, phi, x, 5e-4), 2);
    }
    CHECK(std::sqrt(sc / sf) == doctest::Approx(4.0).epsilon(0.125));
  }
}

TEST_CASE("property: kernel_gradient matches central differences") {
  for (const auto& op : kernel_ops) {
    CAPTURE(describe(op));
    std::mt19937_64 rng(5);
    const auto err = [&](double h, std::mt19937_64 g) {
      double worst = 0.0;
      for (int i = 0; i < 50; ++i) {
        const Point2 d = random_displacement(g);
        const Point2 an = kernel_gradient(op, d);
        const double g1 = (kernel_value(op, {d.x1 + h, d.x2}) - kernel_value(op, {d.x1 - h, d.x2})) / (2 * h);
        const double g2 = (kernel_value(op, {d.x1, d.x2 + h}) - kernel_value(op, {d.x1, d.x2 - h})) / (2 * h);
        const double scale = std::max(1.0, std::abs(kernel_value(op, d)));
        worst = std::max(worst, std::hypot(an.x1 - g1, an.x2 - g2) / scale);
      }
      return worst;
    };
    const double coarse = err(1e-3, rng), fine = err(5e-4, rng);
    CHECK(coarse < 1e-4);
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.1));
  }
}

TEST_CASE("property: FD operator on cos(omega.x) reproduces the symbol") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const std::vector<OperatorSpec> ops = {Poisson{}, Helmholtz{2.0}, ModifiedHelmholtz{1.5},
                                         ConvectionDiffusion{0.7, {1.0, -2.0}, 0.4}};
  for (const auto& op : ops) {
    for (int i = 0; i < 20; ++i) {
      const Point2 w{u(rng), u(rng)}, x{u(rng), u(rng)};
      const auto f = [w](Point2 p) { return std::cos(dot(w, p)); };
      const std::complex<double> sigma = fourier_symbol(op, w);
      const double expected = sigma.real() * std::cos(dot(w, x)) - sigma.imag() * std::sin(dot(w, x));
      const double scale = 1.0 + std::abs(sigma);
      const double ec = std::abs(apply_operator_fd(op, f, x, 1e-3) - expected);
      CHECK(ec <= 1e-4 * scale);
    }
  }
}

TEST_CASE("property: radial kernels depend only on the distance") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  for (const OperatorSpec& op : {OperatorSpec{Helmholtz{2.0}}, OperatorSpec{ModifiedHelmholtz{1.0}}}) {
    for (int i = 0; i < 50; ++i) {
      const Point2 d = random_displacement(rng);
      const double r = norm(d), th = ang(rng);
      const Point2 rotated{r * std::cos(th), r * std::sin(th)};
      const double a = kernel_value(op, d), b = kernel_value(op, rotated);
      CHECK(std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(a)));
    }
  }
}
