#include "qrm/geometry.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <numbers>
#include <string>

#include "qrm/errors.hpp"

namespace qrm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kCurveSamples = 1024;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

BoundaryNode node_at(const StarDomain& domain, double t) {
  const Point2 dir = domain.normal_direction(t);
  const double len = norm(dir);
  return {domain.curve(t), {dir.x1 / len, dir.x2 / len}, t};
}

// Maximizes g on [lo, hi] by golden-section search; g is unimodal there
// because the bracket surrounds the best of the uniform samples.
double polish_max(const std::function<double(double)>& g, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = g(c), gd = g(d);
  for (int it = 0; it < 80; ++it) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  return std::max(gc, gd);
}

double extreme(const StarDomain& domain, const std::function<double(Point2)>& coord) {
  const auto g = [&](double t) { return coord(domain.curve(t)); };
  double best = -INFINITY;
  int best_i = 0;
  for (int i = 0; i < kCurveSamples; ++i) {
    const double v = g(kTwoPi * i / kCurveSamples);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  const double step = kTwoPi / kCurveSamples;
  const double t0 = kTwoPi * best_i / kCurveSamples;
  return std::max(best, polish_max(g, t0 - step, t0 + step));
}

}  // namespace

double StarDomain::radius_at(double t) const {
  return std::visit(
      Overloaded{
          [](const Circle& c) { return c.radius; },
          [t](const Ellipse& e) {
            const double bc = e.b * std::cos(t);
            const double as = e.a * std::sin(t);
            return e.a * e.b / std::sqrt(bc * bc + as * as);
          },
          [t](const Star& s) { return s.rho0 + s.amplitude * std::cos(s.lobes * t); },
      },
      shape);
}

double StarDomain::radius_derivative_at(double t) const {
  return std::visit(
      Overloaded{
          [](const Circle&) { return 0.0; },
          [t](const Ellipse& e) {
            const double bc = e.b * std::cos(t);
            const double as = e.a * std::sin(t);
            const double q = bc * bc + as * as;
            return -e.a * e.b * (e.a * e.a - e.b * e.b) * std::sin(t) * std::cos(t) /
                   (q * std::sqrt(q));
          },
          [t](const Star& s) { return -s.amplitude * s.lobes * std::sin(s.lobes * t); },
      },
      shape);
}

Point2 StarDomain::curve(double t) const {
  const double r = radius_at(t);
  return {center.x1 + r * std::cos(t), center.x2 + r * std::sin(t)};
}

Point2 StarDomain::normal_direction(double t) const {
  const double r = radius_at(t);
  const double dr = radius_derivative_at(t);
  const double c = std::cos(t), s = std::sin(t);
  const Point2 tangent{dr * c - r * s, dr * s + r * c};
  return {tangent.x2, -tangent.x1};
}

double StarDomain::max_radius() const {
  double best = 0.0;
  for (int i = 0; i < kCurveSamples; ++i) best = std::max(best, radius_at(kTwoPi * i / kCurveSamples));
  return best;
}

StarDomain make_domain(Point2 center, Shape shape) {
  if (!std::isfinite(center.x1) || !std::isfinite(center.x2))
    throw ConfigError("domain center must be finite");
  std::visit(Overloaded{
                 [](const Circle& c) {
                   if (!(c.radius > 0.0) || !std::isfinite(c.radius))
                     throw ConfigError("circle radius must be positive and finite");
                 },
                 [](const Ellipse& e) {
                   if (!(e.a > 0.0) || !(e.b > 0.0) || !std::isfinite(e.a) || !std::isfinite(e.b))
                     throw ConfigError("ellipse semi-axes must be positive and finite");
                 },
                 [](const Star& s) {
                   if (!(s.rho0 > 0.0) || !std::isfinite(s.rho0) || !std::isfinite(s.amplitude))
                     throw ConfigError("star base radius must be positive and finite");
                   if (!(std::abs(s.amplitude) < s.rho0))
                     throw ConfigError("star amplitude must satisfy |amplitude| < rho0");
                   if (s.lobes < 1) throw ConfigError("star lobe count must be a positive integer");
                 },
             },
             shape);
  return StarDomain{center, shape};
}

std::vector<BoundaryNode> boundary_nodes(const StarDomain& domain, int count) {
  if (count < 1) throw ConfigError("boundary_nodes: need at least one knot, got " + std::to_string(count));
  std::vector<BoundaryNode> nodes;
  nodes.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) nodes.push_back(node_at(domain, kTwoPi * i / count));
  return nodes;
}

bool contains(const StarDomain& domain, Point2 p) {
  const Point2 d = p - domain.center;
  const double r = norm(d);
  if (r == 0.0) return true;
  return r < domain.radius_at(std::atan2(d.x2, d.x1));
}

Box2 bounding_box(const StarDomain& domain, double margin_fraction) {
  if (!(margin_fraction >= 0.0) || !std::isfinite(margin_fraction))
    throw ConfigError("bounding_box: margin fraction must be a finite non-negative number");
  const double hi1 = extreme(domain, [](Point2 p) { return p.x1; });
  const double lo1 = -extreme(domain, [](Point2 p) { return -p.x1; });
  const double hi2 = extreme(domain, [](Point2 p) { return p.x2; });
  const double lo2 = -extreme(domain, [](Point2 p) { return -p.x2; });

  const double extent = std::max(hi1 - lo1, hi2 - lo2);
  const double pad = margin_fraction * extent;
  const double side = std::max(hi1 - lo1, hi2 - lo2) + 2.0 * pad;
  const Point2 mid{0.5 * (lo1 + hi1), 0.5 * (lo2 + hi2)};
  return {{mid.x1 - 0.5 * side, mid.x2 - 0.5 * side}, {mid.x1 + 0.5 * side, mid.x2 + 0.5 * side}};
}

std::vector<Point2> interior_eval_points(const StarDomain& domain, int rings, int per_ring) {
  if (rings < 1 || per_ring < 1)
    throw ConfigError("interior_eval_points: rings and per_ring must be positive");
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(rings) * static_cast<std::size_t>(per_ring));
  for (int r = 1; r <= rings; ++r) {
    const double s = static_cast<double>(r) / (rings + 1);
    for (int j = 0; j < per_ring; ++j) {
      const double t = kTwoPi * j / per_ring;
      const double rho = s * domain.radius_at(t);
      pts.push_back({domain.center.x1 + rho * std::cos(t), domain.center.x2 + rho * std::sin(t)});
    }
  }
  return pts;
}

std::vector<BoundaryNode> off_knot_boundary_samples(const StarDomain& domain, int knots) {
  if (knots < 1) throw ConfigError("off_knot_boundary_samples: need at least one knot");
  const int count = 4 * knots;
  std::vector<BoundaryNode> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) out.push_back(node_at(domain, std::numbers::pi * (2 * j + 1) / count));
  return out;
}

}  // namespace qrm
