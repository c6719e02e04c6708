#pragma once

#include <cmath>
#include <variant>
#include <vector>

namespace qrm {

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x1, s * a.x2}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }
inline double norm(Point2 a) { return std::hypot(a.x1, a.x2); }

struct Circle {
  double radius = 1.0;
};

struct Ellipse {
  double a = 1.0;
  double b = 1.0;
};

/// Radial function rho0 + amplitude * cos(lobes * t).
struct Star {
  double rho0 = 1.0;
  double amplitude = 0.0;
  int lobes = 1;
};

using Shape = std::variant<Circle, Ellipse, Star>;

/// Domain star-shaped about `center`, described by a positive radial function
/// rho(t) of the polar angle t. Construct through `make_domain` to validate.
struct StarDomain {
  Point2 center;
  Shape shape;

  double radius_at(double t) const;
  double radius_derivative_at(double t) const;
  /// Boundary curve gamma(t) = center + rho(t) (cos t, sin t).
  Point2 curve(double t) const;
  /// Unnormalized outward normal: gamma'(t) rotated by -90 degrees.
  Point2 normal_direction(double t) const;
  /// Largest rho over the 1024-sample parameter grid.
  double max_radius() const;
};

/// Throws ConfigError when the shape parameters violate their invariants.
StarDomain make_domain(Point2 center, Shape shape);

struct BoundaryNode {
  Point2 position;
  Point2 normal;
  double param = 0.0;
};

struct Box2 {
  Point2 min_corner;
  Point2 max_corner;

  double side1() const { return max_corner.x1 - min_corner.x1; }
  double side2() const { return max_corner.x2 - min_corner.x2; }
  Point2 center() const { return 0.5 * (min_corner + max_corner); }
  bool contains(Point2 p) const {
    return p.x1 >= min_corner.x1 && p.x1 <= max_corner.x1 && p.x2 >= min_corner.x2 &&
           p.x2 <= max_corner.x2;
  }
};

std::vector<BoundaryNode> boundary_nodes(const StarDomain& domain, int count);

/// Strict interior test; points on the boundary report false.
bool contains(const StarDomain& domain, Point2 p);

/// Square box around the domain. Extents come from 1024 curve samples
/// (each extremum polished locally), then every side is pushed out by
/// margin_fraction times the larger extent.
Box2 bounding_box(const StarDomain& domain, double margin_fraction);

std::vector<Point2> interior_eval_points(const StarDomain& domain, int rings, int per_ring);

/// Boundary sample points at parameters pi (2j + 1) / (4N), j < 4N. None of
/// them coincides with a knot of boundary_nodes(domain, N).
std::vector<BoundaryNode> off_knot_boundary_samples(const StarDomain& domain, int knots);

}  // namespace qrm
