#include "qrm/particular.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "qrm/errors.hpp"

namespace qrm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kResonantSymbol = 1e-8;
constexpr double kNegligibleSource = 1e-10;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
struct PlanDestroy {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};

// Unnormalized forward 2D DFT of a real n x n array (row-major).
std::vector<std::complex<double>> forward_dft(const std::vector<double>& data, int n) {
  const std::size_t count = static_cast<std::size_t>(n) * n;
  std::unique_ptr<fftw_complex, FftwFree> buf(fftw_alloc_complex(count));
  std::unique_ptr<fftw_plan_s, PlanDestroy> plan(
      fftw_plan_dft_2d(n, n, buf.get(), buf.get(), FFTW_FORWARD, FFTW_ESTIMATE));
  for (std::size_t i = 0; i < count; ++i) {
    buf.get()[i][0] = data[i];
    buf.get()[i][1] = 0.0;
  }
  fftw_execute(plan.get());
  std::vector<std::complex<double>> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = {buf.get()[i][0], buf.get()[i][1]};
  return out;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Smooth step: 0 at s <= 0, 1 at s >= 1, eta(s) + eta(1 - s) = 1.
double smooth_step(double s) {
  const auto e = [](double v) { return v > 0.0 ? std::exp(-1.0 / v) : 0.0; };
  const double a = e(s);
  const double b = e(1.0 - s);
  return a / (a + b);
}

double axis_weight(double xi, double t) {
  if (xi < t) return smooth_step(xi / t);
  if (xi > 1.0 - t) return smooth_step((1.0 - xi) / t);
  return 1.0;
}

void validate_taper(const TaperSpec& taper) {
  if (!(taper.inner_fraction > 0.0 && taper.inner_fraction < 0.5))
    throw ConfigError("taper inner_fraction must lie in (0, 0.5), got " +
                      std::to_string(taper.inner_fraction));
}

void require_in_box(const Box2& box, Point2 x, const char* what) {
  if (!box.contains(x)) {
    std::ostringstream os;
    os << what << ": point (" << x.x1 << ", " << x.x2 << ") lies outside the embedding box";
    throw DomainError(os.str());
  }
}

// Per-axis basis values exp(i omega_p (x - min)) and their x-derivatives.
// The Nyquist index is read as cos(omega x), the real interpolant that
// agrees with both +n/2 and -n/2 on the grid.
struct AxisPhases {
  std::vector<std::complex<double>> value;
  std::vector<std::complex<double>> deriv;
};

AxisPhases axis_phases(const SpectralField& sf, double offset, double side) {
  AxisPhases ph{std::vector<std::complex<double>>(static_cast<std::size_t>(sf.n)),
                std::vector<std::complex<double>>(static_cast<std::size_t>(sf.n))};
  const std::complex<double> i_unit(0.0, 1.0);
  for (int p = 0; p < sf.n; ++p) {
    const double w = kTwoPi * sf.mode(p) / side;
    if (2 * p == sf.n) {
      ph.value[p] = std::cos(w * offset);
      ph.deriv[p] = -w * std::sin(w * offset);
    } else {
      ph.value[p] = std::polar(1.0, w * offset);
      ph.deriv[p] = i_unit * w * ph.value[p];
    }
  }
  return ph;
}

double compensator_value(const Compensator& c, Point2 x) {
  return std::visit(Overloaded{
                        [](const NoCompensator&) { return 0.0; },
                        [x](const PoissonQuad& q) {
                          const Point2 d = x - q.center;
                          return q.mean * dot(d, d) / 4.0;
                        },
                        [x](const ConvectionLinear& l) {
                          return l.mean * dot(l.velocity, x - l.center) / dot(l.velocity, l.velocity);
                        },
                    },
                    c);
}

Point2 compensator_gradient(const Compensator& c, Point2 x) {
  return std::visit(Overloaded{
                        [](const NoCompensator&) { return Point2{}; },
                        [x](const PoissonQuad& q) { return (q.mean / 2.0) * (x - q.center); },
                        [](const ConvectionLinear& l) {
                          return (l.mean / dot(l.velocity, l.velocity)) * l.velocity;
                        },
                    },
                    c);
}

}  // namespace

Point2 SourceGrid::point(int i, int j) const {
  const double h1 = box.side1() / n;
  const double h2 = box.side2() / n;
  return {box.min_corner.x1 + i * h1, box.min_corner.x2 + j * h2};
}

Point2 SpectralField::frequency(int p, int q) const {
  return {kTwoPi * mode(p) / box.side1(), kTwoPi * mode(q) / box.side2()};
}

double taper_weight(const Box2& box, const TaperSpec& taper, Point2 x) {
  validate_taper(taper);
  require_in_box(box, x, "taper_weight");
  const double xi1 = (x.x1 - box.min_corner.x1) / box.side1();
  const double xi2 = (x.x2 - box.min_corner.x2) / box.side2();
  const double t = taper.inner_fraction;
  return axis_weight(xi1, t) * axis_weight(xi2, t);
}

double required_box_margin(const TaperSpec& taper) {
  return taper.inner_fraction / (1.0 - 2.0 * taper.inner_fraction);
}

void validate_grid(const SourceGrid& grid) {
  if (!is_power_of_two(grid.n) || grid.n < kMinGrid || grid.n > kMaxGrid)
    throw ConfigError("grid size must be a power of two in [32, 1024], got " + std::to_string(grid.n));
  if (!(grid.box.side1() > 0.0) || !(grid.box.side2() > 0.0))
    throw ConfigError("embedding box must have positive sides");
  if (grid.samples.size() != static_cast<std::size_t>(grid.n) * grid.n)
    throw ConfigError("source grid holds the wrong number of samples");
  for (double v : grid.samples)
    if (!std::isfinite(v)) throw ConfigError("source grid contains a non-finite sample");
}

SourceGrid extend_source(const ScalarField& f, const StarDomain& domain, const Box2& box, int n,
                         const TaperSpec& taper) {
  validate_taper(taper);
  SourceGrid grid{box, n, {}};
  if (!is_power_of_two(n) || n < kMinGrid || n > kMaxGrid)
    throw ConfigError("grid size must be a power of two in [32, 1024], got " + std::to_string(n));

  const Box2 tight = bounding_box(domain, 0.0);
  const double t = taper.inner_fraction;
  const auto xi1 = [&](double v) { return (v - box.min_corner.x1) / box.side1(); };
  const auto xi2 = [&](double v) { return (v - box.min_corner.x2) / box.side2(); };
  const bool inside = xi1(tight.min_corner.x1) >= t && xi1(tight.max_corner.x1) <= 1.0 - t &&
                      xi2(tight.min_corner.x2) >= t && xi2(tight.max_corner.x2) <= 1.0 - t;
  if (!inside) {
    std::ostringstream os;
    os << "physical domain is not inside the taper plateau of the embedding box; box_margin must be "
          "at least "
       << required_box_margin(taper) << " for taper " << t;
    throw ConfigError(os.str());
  }

  grid.samples.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Point2 x = grid.point(i, j);
      const double w = taper_weight(box, taper, x);
      grid.samples[static_cast<std::size_t>(i) * n + j] = w == 0.0 ? 0.0 : w * f(x);
    }
  }
  validate_grid(grid);
  return grid;
}

namespace {

// The Nyquist index stands for both +n/2 and -n/2; averaging the symbol over
// that sign keeps the coefficients conjugate-symmetric for odd (drift) terms.
std::complex<double> grid_symbol(const OperatorSpec& op, const SpectralField& sf, int p, int q) {
  const Point2 w = sf.frequency(p, q);
  const bool nyq1 = 2 * p == sf.n;
  const bool nyq2 = 2 * q == sf.n;
  std::complex<double> sum = 0.0;
  int count = 0;
  for (double s1 : {1.0, -1.0}) {
    if (s1 < 0 && !nyq1) continue;
    for (double s2 : {1.0, -1.0}) {
      if (s2 < 0 && !nyq2) continue;
      sum += fourier_symbol(op, {s1 * w.x1, s2 * w.x2});
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

}  // namespace

SpectralField solve_particular(const OperatorSpec& op, const SourceGrid& grid) {
  validate(op);
  validate_grid(grid);
  const int n = grid.n;
  SpectralField sf{grid.box, n, forward_dft(grid.samples, n), NoCompensator{}};
  const double scale = 1.0 / (static_cast<double>(n) * n);
  double peak = 0.0;
  for (auto& c : sf.coeffs) {
    c *= scale;
    peak = std::max(peak, std::abs(c));
  }

  const double resonance_floor = std::visit(
      Overloaded{
          [](const Helmholtz& h) { return kResonantSymbol * std::max(1.0, h.k * h.k); },
          [](const auto&) { return 0.0; },
      },
      op);

  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      auto& c = sf.coeffs[static_cast<std::size_t>(p) * n + q];
      const std::complex<double> sigma = grid_symbol(op, sf, p, q);
      if (p == 0 && q == 0 && sigma == 0.0) {
        // Periodic solvability fails for a nonzero mean; carry it in closed form.
        const double mean = c.real();
        const Point2 center = grid.box.center();
        if (std::holds_alternative<Poisson>(op)) {
          sf.compensator = PoissonQuad{mean, center};
        } else if (const auto* cd = std::get_if<ConvectionDiffusion>(&op)) {
          sf.compensator = ConvectionLinear{mean, cd->velocity, center};
        }
        c = 0.0;
        continue;
      }
      if (std::abs(sigma) <= resonance_floor) {
        if (std::abs(c) <= kNegligibleSource * peak) {
          c = 0.0;
          continue;
        }
        std::ostringstream os;
        os << "resonant embedding box: mode (" << sf.mode(p) << ", " << sf.mode(q)
           << ") has vanishing Helmholtz symbol but carries source weight " << std::abs(c)
           << "; change box_margin or the grid size";
        throw ResonantBoxError(os.str());
      }
      c /= sigma;
    }
  }
  return sf;
}

std::complex<double> evaluate_series(const SpectralField& sf, Point2 x) {
  require_in_box(sf.box, x, "eval_particular");
  const auto e1 = axis_phases(sf, x.x1 - sf.box.min_corner.x1, sf.box.side1());
  const auto e2 = axis_phases(sf, x.x2 - sf.box.min_corner.x2, sf.box.side2());
  std::complex<double> total = 0.0;
  for (int p = 0; p < sf.n; ++p) {
    std::complex<double> row = 0.0;
    const auto* c = &sf.coeffs[static_cast<std::size_t>(p) * sf.n];
    for (int q = 0; q < sf.n; ++q) row += c[q] * e2.value[q];
    total += e1.value[p] * row;
  }
  return total;
}

double coefficient_mass(const SpectralField& sf) {
  double m = 0.0;
  for (const auto& c : sf.coeffs) m += std::abs(c);
  return m;
}

double eval_particular(const SpectralField& sf, Point2 x) {
  return evaluate_series(sf, x).real() + compensator_value(sf.compensator, x);
}

Point2 eval_particular_gradient(const SpectralField& sf, Point2 x) {
  require_in_box(sf.box, x, "eval_particular_gradient");
  const auto e1 = axis_phases(sf, x.x1 - sf.box.min_corner.x1, sf.box.side1());
  const auto e2 = axis_phases(sf, x.x2 - sf.box.min_corner.x2, sf.box.side2());
  std::complex<double> g1 = 0.0, g2 = 0.0;
  for (int p = 0; p < sf.n; ++p) {
    std::complex<double> row = 0.0, row_dq = 0.0;
    const auto* c = &sf.coeffs[static_cast<std::size_t>(p) * sf.n];
    for (int q = 0; q < sf.n; ++q) {
      row += c[q] * e2.value[q];
      row_dq += c[q] * e2.deriv[q];
    }
    g1 += e1.deriv[p] * row;
    g2 += e1.value[p] * row_dq;
  }
  const Point2 comp = compensator_gradient(sf.compensator, x);
  return {g1.real() + comp.x1, g2.real() + comp.x2};
}

}  // namespace qrm
