#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "oracles/winding_oracle.hpp"
#include "qrm/errors.hpp"
#include "qrm/geometry.hpp"

using namespace qrm;

namespace {

const StarDomain unit_disc = make_domain({0, 0}, Circle{1.0});
const StarDomain star5 = make_domain({0, 0}, Star{1.0, 0.2, 5});

std::vector<StarDomain> sample_domains() {
  return {unit_disc, make_domain({0, 0}, Circle{2.0}), make_domain({0.3, -0.7}, Ellipse{2.0, 1.0}), star5,
          make_domain({1.0, 1.0}, Star{0.8, -0.3, 3})};
}

double extent(const StarDomain& d) {
  const Box2 b = bounding_box(d, 0.0);
  return b.side1();
}

}  // namespace

TEST_CASE("boundary_nodes on the unit circle sit at the quarter points") {
  const auto nodes = boundary_nodes(unit_disc, 4);
  REQUIRE(nodes.size() == 4);
  const Point2 expected[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(nodes[i].position.x1 - expected[i].x1) < 1e-15);
    CHECK(std::abs(nodes[i].position.x2 - expected[i].x2) < 1e-15);
    CHECK(std::abs(nodes[i].normal.x1 - expected[i].x1) < 1e-15);
    CHECK(std::abs(nodes[i].normal.x2 - expected[i].x2) < 1e-15);
    CHECK(nodes[i].param == doctest::Approx(std::numbers::pi * i / 2));
  }
}

TEST_CASE("a single knot on a radius-2 circle") {
  const auto nodes = boundary_nodes(make_domain({0, 0}, Circle{2.0}), 1);
  REQUIRE(nodes.size() == 1);
  CHECK(nodes[0].position == Point2{2.0, 0.0});
  CHECK(nodes[0].normal == Point2{1.0, 0.0});
}

TEST_CASE("star knot normals agree with a finite-difference tangent") {
  const auto nodes = boundary_nodes(star5, 8);
  CHECK(nodes[0].position.x1 == doctest::Approx(1.2).epsilon(1e-15));
  CHECK(nodes[0].position.x2 == doctest::Approx(0.0).scale(1e-15));
  const double h = 1e-6;
  for (const auto& node : nodes) {
    const Point2 tangent = (1.0 / (2 * h)) * (star5.curve(node.param + h) - star5.curve(node.param - h));
    const double len = norm(tangent);
    const Point2 expected{tangent.x2 / len, -tangent.x1 / len};
    CHECK(std::abs(node.normal.x1 - expected.x1) < 1e-8);
    CHECK(std::abs(node.normal.x2 - expected.x2) < 1e-8);
  }
}

TEST_CASE("boundary_nodes rejects a non-positive count") {
  CHECK_THROWS_AS(boundary_nodes(unit_disc, 0), ConfigError);
}

TEST_CASE("contains: simple cases and the winding-number oracle") {
  CHECK(contains(unit_disc, {0, 0}));
  CHECK_FALSE(contains(unit_disc, {2, 0}));
  CHECK_FALSE(contains(unit_disc, {1, 0}));

  const auto curve = [](double t) { return star5.curve(t); };
  CHECK(oracle::winding_number(curve, {1.1, 0.0}) == 1);
  CHECK(contains(star5, {1.1, 0.0}));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.3, 1.3);
  for (int i = 0; i < 300; ++i) {
    const Point2 p{u(rng), u(rng)};
    const Point2 d = p - star5.center;
    const double r = norm(d), rho = star5.radius_at(std::atan2(d.x2, d.x1));
    if (std::abs(r - rho) < 1e-3) continue;  // polygon resolution
    CHECK(contains(star5, p) == (oracle::winding_number(curve, p) == 1));
  }
}

TEST_CASE("bounding_box examples") {
  const Box2 b = bounding_box(unit_disc, 0.5);
  CHECK(b.min_corner.x1 == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(b.min_corner.x2 == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(b.max_corner.x1 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(b.max_corner.x2 == doctest::Approx(2.0).epsilon(1e-12));

  const Box2 tight = bounding_box(unit_disc, 0.0);
  CHECK(tight.min_corner.x1 == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(tight.max_corner.x2 == doctest::Approx(1.0).epsilon(1e-12));

  const Box2 e = bounding_box(make_domain({0, 0}, Ellipse{2.0, 1.0}), 0.25);
  CHECK(e.min_corner.x1 == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(e.min_corner.x2 == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(e.max_corner.x1 == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(e.max_corner.x2 == doctest::Approx(3.0).epsilon(1e-12));

  CHECK_THROWS_AS(bounding_box(unit_disc, -0.1), ConfigError);
}

TEST_CASE("interior_eval_points examples") {
  const auto pts = interior_eval_points(unit_disc, 1, 4);
  REQUIRE(pts.size() == 4);
  const Point2 expected[] = {{0.5, 0}, {0, 0.5}, {-0.5, 0}, {0, -0.5}};
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(pts[i].x1 - expected[i].x1) < 1e-15);
    CHECK(std::abs(pts[i].x2 - expected[i].x2) < 1e-15);
  }
  const auto star_pt = interior_eval_points(star5, 1, 1);
  REQUIRE(star_pt.size() == 1);
  CHECK(star_pt[0].x1 == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(star_pt[0].x2 == 0.0);
  CHECK(oracle::winding_number([](double t) { return star5.curve(t); }, star_pt[0]) == 1);

  CHECK_THROWS_AS(interior_eval_points(unit_disc, 0, 3), ConfigError);
}

TEST_CASE("domain invariants are enforced at construction") {
  CHECK_THROWS_AS(make_domain({0, 0}, Circle{0.0}), ConfigError);
  CHECK_THROWS_AS(make_domain({0, 0}, Ellipse{1.0, -1.0}), ConfigError);
  CHECK_THROWS_AS(make_domain({0, 0}, Star{1.0, 1.0, 5}), ConfigError);
  CHECK_THROWS_AS(make_domain({0, 0}, Star{1.0, 0.2, 0}), ConfigError);
}

TEST_CASE("property: normals are unit and outward, positions on the curve") {
  for (const auto& d : sample_domains()) {
    const double eps = 1e-6 * extent(d);
    for (int n : {1, 3, 7, 16, 33, 64}) {
      for (const auto& node : boundary_nodes(d, n)) {
        CHECK(std::abs(norm(node.normal) - 1.0) < 1e-12);
        const Point2 on_curve = d.curve(node.param);
        CHECK(norm(on_curve - node.position) < 1e-12);
        CHECK_FALSE(contains(d, node.position + eps * node.normal));
        CHECK(contains(d, node.position - eps * node.normal));
      }
    }
  }
}

TEST_CASE("property: eval points inside, box contains knots, outputs deterministic") {
  for (const auto& d : sample_domains()) {
    for (const Point2& p : interior_eval_points(d, 2, 3)) CHECK(contains(d, p));
    for (const Point2& p : interior_eval_points(d, 4, 50)) CHECK(contains(d, p));
    for (double margin : {0.0, 0.1, 0.5}) {
      const Box2 b = bounding_box(d, margin);
      CHECK(b.side1() == doctest::Approx(b.side2()));
      for (int n : {5, 17, 48, 129, 1000})
        for (const auto& node : boundary_nodes(d, n)) CHECK(b.contains(node.position));
    }
    const auto a = boundary_nodes(d, 37);
    const auto b = boundary_nodes(d, 37);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].position == b[i].position);
      CHECK(a[i].normal == b[i].normal);
    }
  }
}

TEST_CASE("off-knot samples never coincide with knots") {
  for (int n : {1, 4, 16, 48}) {
    const auto knots = boundary_nodes(unit_disc, n);
    const auto samples = off_knot_boundary_samples(unit_disc, n);
    CHECK(samples.size() == static_cast<std::size_t>(4 * n));
    for (const auto& s : samples)
      for (const auto& k : knots) CHECK(norm(s.position - k.position) > 1e-3 / n);
  }
}
