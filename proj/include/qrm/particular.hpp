#pragma once

#include <complex>
#include <variant>
#include <vector>

#include "qrm/geometry.hpp"
#include "qrm/operators.hpp"

namespace qrm {

/// Half-width of the smooth rise region per axis, as a fraction of the box side.
struct TaperSpec {
  double inner_fraction = 0.15;
};

inline constexpr int kMinGrid = 32;
inline constexpr int kMaxGrid = 1024;

/// Source samples on the periodic grid x_ij = min_corner + (i, j) * side / n,
/// stored row-major with i along x1: samples[i * n + j].
struct SourceGrid {
  Box2 box;
  int n = 0;
  std::vector<double> samples;

  double at(int i, int j) const { return samples[static_cast<std::size_t>(i) * n + j]; }
  Point2 point(int i, int j) const;
};

struct NoCompensator {};

/// Exact particular solution mean * |x - center|^2 / 4 of lap u = mean.
struct PoissonQuad {
  double mean = 0.0;
  Point2 center;
};

/// Exact particular solution mean * v.(x - center) / |v|^2 of v.grad u = mean.
struct ConvectionLinear {
  double mean = 0.0;
  Point2 velocity;
  Point2 center;
};

using Compensator = std::variant<NoCompensator, PoissonQuad, ConvectionLinear>;

/// Truncated Fourier series of the particular solution on the box, plus a
/// closed-form correction for the mode the periodic problem cannot carry.
/// coeffs are in FFT order: index p maps to mode p for p < n/2 and p - n
/// otherwise, so modes cover [-n/2, n/2) per axis.
struct SpectralField {
  Box2 box;
  int n = 0;
  std::vector<std::complex<double>> coeffs;
  Compensator compensator = NoCompensator{};

  std::complex<double> coeff(int p, int q) const { return coeffs[static_cast<std::size_t>(p) * n + q]; }
  /// Signed mode number for FFT index p.
  int mode(int p) const { return p < n / 2 ? p : p - n; }
  /// Angular frequency (omega_1, omega_2) of the mode at FFT index (p, q).
  Point2 frequency(int p, int q) const;
};

double taper_weight(const Box2& box, const TaperSpec& taper, Point2 x);

/// Minimum box margin fraction that keeps a square-extent domain inside the
/// taper plateau: t / (1 - 2t).
double required_box_margin(const TaperSpec& taper);

/// Samples f times the taper on the n x n grid. Throws ConfigError when the
/// grid size or taper is invalid, or when the domain does not sit inside the
/// taper plateau (so f would be modified inside the physical domain).
SourceGrid extend_source(const ScalarField& f, const StarDomain& domain, const Box2& box, int n,
                         const TaperSpec& taper);

/// Throws ConfigError if the grid breaks its invariants.
void validate_grid(const SourceGrid& grid);

/// FFT solve of L u = f mode by mode. Throws ResonantBoxError when a
/// Helmholtz mode with vanishing symbol carries non-negligible source.
SpectralField solve_particular(const OperatorSpec& op, const SourceGrid& grid);

/// Complex series value at x without the compensator. Its imaginary part is
/// rounding noise; exposed for real-valuedness checks.
std::complex<double> evaluate_series(const SpectralField& sf, Point2 x);

/// Sum of |coeff| over all modes.
double coefficient_mass(const SpectralField& sf);

double eval_particular(const SpectralField& sf, Point2 x);
Point2 eval_particular_gradient(const SpectralField& sf, Point2 x);

}  // namespace qrm
