#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "instances.hpp"
#include "rigidmatch/errors.hpp"
#include "rigidmatch/geometry.hpp"

using namespace rigidmatch;

TEST_CASE("distance matrix of small patterns") {
  CHECK(distance_matrix(PointPattern({{0, 0}})).entries().size() == 1);
  CHECK(distance_matrix(PointPattern({{0, 0}}))(0, 0) == 0.0);

  const auto d345 = distance_matrix(PointPattern({{0, 0}, {3, 4}}));
  CHECK(d345(0, 1) == 5.0);
  CHECK(d345(1, 0) == 5.0);
  CHECK(d345(1, 1) == 0.0);

  const auto tri = distance_matrix(PointPattern({{0, 0}, {1, 0}, {0, 1}}));
  CHECK(tri(0, 1) == 1.0);
  CHECK(tri(0, 2) == 1.0);
  CHECK(tri(1, 2) == doctest::Approx(1.41421356).epsilon(1e-8));
}

TEST_CASE("distance matrix is symmetric with zero diagonal") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t k = 1 + rep % 17;
    const PointPattern p(testsupport::uniform_points(k, rng));
    const auto d = distance_matrix(p);
    for (std::size_t i = 0; i < k; ++i) {
      REQUIRE(d(i, i) == 0.0);
      for (std::size_t j = 0; j < k; ++j) REQUIRE(d(i, j) == d(j, i));
    }
  }
}

TEST_CASE("pattern construction rejects bad input") {
  CHECK_THROWS_AS(PointPattern({}), Error);
  CHECK_THROWS_AS(PointPattern({{0, std::nan("")}}), Error);
  CHECK_THROWS_AS(PointPattern({{INFINITY, 0}}), Error);
  const PointPattern p({{0, 0}, {1, 1}, {2, 2}});
  CHECK(p.prefix(2).size() == 2);
  CHECK(p.prefix(2)[1] == Point{1, 1});
  CHECK_THROWS_AS(p.prefix(0), Error);
  CHECK_THROWS_AS(p.prefix(4), Error);
}

TEST_CASE("objective residual") {
  const PointPattern t({{0, 0}, {1, 0}});
  const PointPattern s({{0, 0}, {2, 0}});
  CHECK(objective_residual(t, t, Assignment{{0, 1}}) == 0.0);
  CHECK(objective_residual(t, s, Assignment{{0, 1}}) == doctest::Approx(2.0));
  CHECK(objective_residual(PointPattern({{5, 5}}), s, Assignment{{1}}) == 0.0);
  CHECK_THROWS_AS(objective_residual(t, s, Assignment{{0, 2}}), Error);
  CHECK_THROWS_AS(objective_residual(t, s, Assignment{{0}}), Error);
}

TEST_CASE("collisions and accuracy") {
  CHECK(count_collisions(Assignment{{0, 1, 2}}) == 0);
  CHECK(count_collisions(Assignment{{0, 0, 2, 2, 2}}) == 2);
  CHECK(matching_accuracy(Assignment{{0, 1, 2, 3}}, Assignment{{0, 1, 5, 3}}) == 0.75);
  CHECK_THROWS_AS(matching_accuracy(Assignment{{0}}, Assignment{{0, 1}}), Error);
}

TEST_CASE("rigid transforms") {
  const PointPattern p({{1, 0}, {0.3, 0.7}});
  CHECK(apply_rigid_transform(p, 0.0, {0, 0}, false) == p);
  const auto r = apply_rigid_transform(PointPattern({{1, 0}}), std::numbers::pi, {0, 0}, false);
  CHECK(r[0].x == doctest::Approx(-1.0));
  CHECK(r[0].y == doctest::Approx(0.0).epsilon(1e-15));
  // reflect first: (0,1) -> (0,-1), then rotate by pi/2 -> (1,0)
  const auto f = RigidTransform{std::numbers::pi / 2, {0, 0}, true}.apply({0, 1});
  CHECK(f.x == doctest::Approx(1.0));
  CHECK(std::abs(f.y) < 1e-15);
}

TEST_CASE("rigid transforms preserve distances") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int rep = 0; rep < 1000; ++rep) {
    const PointPattern p(testsupport::uniform_points(2 + rep % 9, rng));
    const RigidTransform t{u(rng), {u(rng), u(rng)}, rep % 2 == 1};
    const auto a = distance_matrix(p);
    const auto b = distance_matrix(apply_rigid_transform(p, t));
    for (std::size_t k = 0; k < a.entries().size(); ++k) {
      REQUIRE(std::abs(a.entries()[k] - b.entries()[k]) <=
              1e-12 * std::max(1.0, a.entries()[k]));
    }
  }
}

TEST_CASE("residual is invariant under a rigid motion of the scene") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = generate_instance(6, 9, 0.02, seed);
    Assignment a = inst.truth;
    a.map[0] = (a.map[0] + 1) % 9;
    const auto moved = apply_rigid_transform(inst.scene, RigidTransform{0.7, {3, -2}, true});
    const double r0 = objective_residual(inst.tmpl, inst.scene, a);
    REQUIRE(objective_residual(inst.tmpl, moved, a) == doctest::Approx(r0).epsilon(1e-9));
  }
}

TEST_CASE("general position") {
  CHECK(in_general_position(std::vector<Point>{{0, 0}, {1, 0}, {0, 1}}));
  CHECK_FALSE(in_general_position(std::vector<Point>{{0, 0}, {1, 1}, {2, 2}}));
  CHECK(in_general_position(std::vector<Point>{{0, 0}, {1, 1}}));
}

TEST_CASE("generated instances") {
  const auto a = generate_instance(10, 25, 0.0, 42);
  const auto b = generate_instance(10, 25, 0.0, 42);
  CHECK(a.tmpl == b.tmpl);
  CHECK(a.scene == b.scene);
  CHECK(a.truth == b.truth);
  CHECK(a.tmpl.size() == 10);
  CHECK(a.scene.size() == 25);
  CHECK(count_collisions(a.truth) == 0);
  CHECK(in_general_position(a.tmpl.points()));
  CHECK_THROWS_AS(generate_instance(10, 5, 0.0, 1), Error);
  CHECK_THROWS_AS(generate_instance(10, 12, -1.0, 1), Error);

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto inst = generate_instance(4 + seed % 8, 12 + seed % 5, 0.0, seed);
    REQUIRE(objective_residual(inst.tmpl, inst.scene, inst.truth) < 1e-24);
  }
  // both reflection outcomes occur
  int reflected = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) reflected += generate_instance(5, 5, 0, seed).transform.reflect;
  CHECK(reflected > 0);
  CHECK(reflected < 50);
}

TEST_CASE("benchmark grid sizes generate") {
  for (std::size_t m : {10, 20, 30, 40}) {
    for (int k = 0; k <= 4; ++k) {
      const auto inst = generate_instance(10, m, k / 256.0, m * 7 + k);
      CHECK(inst.scene.size() == m);
    }
  }
}
