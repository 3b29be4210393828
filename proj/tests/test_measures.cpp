#include <doctest.h>

#include <cmath>

#include "mde/errors.hpp"
#include "mde/measures.hpp"

using namespace mde;

TEST_SUITE("measures") {

TEST_CASE("constructor rejects malformed atoms") {
  CHECK_THROWS_AS(DiscreteMeasure(0), InvalidMeasure);
  CHECK_THROWS_AS(DiscreteMeasure(1, {{{0.0}, -1.0}}), InvalidMeasure);
  CHECK_THROWS_AS(DiscreteMeasure(1, {{{NAN}, 1.0}}), InvalidMeasure);
  CHECK_THROWS_AS(DiscreteMeasure(1, {{{0.0}, INFINITY}}), InvalidMeasure);
  CHECK_THROWS_AS(DiscreteMeasure(2, {{{0.0}, 1.0}}), DimensionMismatch);
  CHECK_NOTHROW(DiscreteMeasure(1, {{{0.0}, 0.0}}));
}

TEST_CASE("canonical form merges duplicates and drops zero weights") {
  const DiscreteMeasure m(1, {{{0.5}, 0.25}, {{-1.0}, 0.5}, {{0.5}, 0.25}, {{2.0}, 0.0}});
  const auto c = m.canonicalize();
  REQUIRE(c.size() == 2);
  CHECK(c[0].location[0] == -1.0);
  CHECK(c[1].location[0] == 0.5);
  CHECK(c[1].weight == 0.5);
  CHECK(total_mass(c) == total_mass(m));
}

TEST_CASE("canonical order is lexicographic in 2D") {
  const DiscreteMeasure m(2, {{{1.0, 0.0}, 1.0}, {{0.0, 2.0}, 1.0}, {{0.0, -1.0}, 1.0}});
  const auto c = m.canonicalize();
  CHECK(c[0].location == Point{0.0, -1.0});
  CHECK(c[1].location == Point{0.0, 2.0});
  CHECK(c[2].location == Point{1.0, 0.0});
}

TEST_CASE("mass, integration and support radius") {
  const auto m = DiscreteMeasure::on_line(std::vector<double>{-3.0, 1.0, 2.0},
                                          std::vector<double>{0.5, 1.5, 0.0});
  CHECK(total_mass(m) == 2.0);
  CHECK(integrate(m, [](const Point& x) { return x[0]; }) == doctest::Approx(0.0));
  // The zero-weight atom at 2 does not count; the atom at -3 does.
  CHECK(support_radius(m) == 3.0);
  CHECK(support_radius(DiscreteMeasure(3)) == 0.0);
  CHECK_THROWS_AS(integrate(m, [](const Point&) { return NAN; }), NonFiniteValue);
}

TEST_CASE("push-forward under a translation") {
  const auto m = DiscreteMeasure::dirac({1.0, 2.0}, 0.75);
  const auto t = push_forward(m, [](const Point& x) { return Point{x[0] + 1.0, x[1] - 2.0}; });
  CHECK(t[0].location == Point{2.0, 0.0});
  CHECK(t[0].weight == 0.75);
  // Maps may change the dimension, but must do so consistently.
  CHECK(push_forward(m, [](const Point& x) { return Point{x[0]}; }).dim() == 1);
  const DiscreteMeasure two(2, {{{0.0, 0.0}, 1.0}, {{1.0, 0.0}, 1.0}});
  CHECK_THROWS_AS(push_forward(two, [](const Point& x) { return x[0] > 0.5 ? Point{1.0} : x; }),
                  DimensionMismatch);
}

TEST_CASE("same_atoms compares canonical forms") {
  const auto a = DiscreteMeasure::on_line(std::vector<double>{0.0, 1.0}, std::vector<double>{1.0, 1.0});
  const auto b = DiscreteMeasure::on_line(std::vector<double>{1.0, 0.0, 0.0},
                                          std::vector<double>{1.0, 0.5, 0.5});
  CHECK(same_atoms(a, b));
  CHECK_FALSE(same_atoms(a, a.scaled(1.001)));
}

TEST_CASE("velocity measures: marginal, joint and transport image") {
  const VelocityMeasure v(1, {{{0.0}, {1.0}, 0.25}, {{0.0}, {-1.0}, 0.25}, {{1.0}, {0.5}, 0.5}});
  const auto marginal = spatial_marginal(v);
  REQUIRE(marginal.size() == 2);
  CHECK(marginal[0].weight == 0.5);
  CHECK(total_mass(v) == 1.0);

  const auto joint = v.joint();
  CHECK(joint.dim() == 2);
  CHECK(joint.size() == 3);

  const auto image = transport_image(v, 0.5).canonicalize();
  REQUIRE(image.size() == 3);
  CHECK(image[0].location[0] == -0.5);
  CHECK(image[1].location[0] == 0.5);
  CHECK(image[2].location[0] == 1.25);

  CHECK_THROWS_AS(VelocityMeasure(1, {{{0.0}, {1.0, 2.0}, 1.0}}), DimensionMismatch);
}

}  // TEST_SUITE
