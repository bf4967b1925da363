#include "eagle/trajectory.hpp"

#include <doctest.h>

#include <cmath>

#include "eagle/errors.hpp"
#include "test_support.hpp"

using namespace eagle;

namespace {

// Independent oracle: linear scan for the segment, interpolation written
// out directly. Deliberately a different route from lerp's binary search.
Point2 brute_force_lerp(const ObjectTrajectory& traj, double t) {
  for (std::size_t i = 0; i + 1 < traj.points.size(); ++i) {
    const auto& a = traj.points[i];
    const auto& b = traj.points[i + 1];
    if (t >= a.t && t <= b.t) {
      const double w = (t - a.t) / (b.t - a.t);
      return {a.x + (b.x - a.x) * w, a.y + (b.y - a.y) * w};
    }
  }
  return {traj.points.back().x, traj.points.back().y};
}

ObjectTrajectory two_knots() {
  return {"right hand", true, {{5.0, 0.295, 0.401}, {7.0, 0.294, 0.365}}};
}

}  // namespace

TEST_CASE("center_point of a normalized box is its midpoint") {
  const auto c = center_point({0.1, 0.2, 0.5, 0.4, BoxSpace::Normalized});
  CHECK(c.x == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(c.y == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("center_point divides pixel boxes by the frame") {
  BoundingBox box{200, 300, 400, 500, BoxSpace::Pixel, 1000, 1000};
  const auto c = center_point(box);
  CHECK(c.x == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(c.y == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("center_point clamps pixel boxes that spill past the frame") {
  BoundingBox box{900, -300, 1400, 500, BoxSpace::Pixel, 1000, 1000};
  const auto c = center_point(box);
  CHECK(c.x == 1.0);
  CHECK(c.y == 0.1);
  CHECK(c.x >= 0.0);
  CHECK(c.y >= 0.0);
}

TEST_CASE("center_point rejects degenerate boxes") {
  CHECK_THROWS_AS(center_point({0.5, 0.2, 0.5, 0.4, BoxSpace::Normalized}), Error);
  CHECK_THROWS_AS(center_point({0.5, 0.4, 0.6, 0.4, BoxSpace::Normalized}), Error);
}

TEST_CASE("center_point stays in the unit square") {
  Rng rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    BoundingBox box;
    box.space = BoxSpace::Pixel;
    box.frame_width = 1280;
    box.frame_height = 720;
    box.x1 = rng.uniform_real(-200.0, 1400.0);
    box.x2 = box.x1 + rng.uniform_real(1.0, 400.0);
    box.y1 = rng.uniform_real(-200.0, 900.0);
    box.y2 = box.y1 + rng.uniform_real(1.0, 400.0);
    const auto c = center_point(box);
    CHECK(c.x >= 0.0);
    CHECK(c.x <= 1.0);
    CHECK(c.y >= 0.0);
    CHECK(c.y <= 1.0);
  }
}

TEST_CASE("lerp midway between the example knots") {
  const auto p = lerp(two_knots(), 6.0);
  CHECK(p.x == doctest::Approx(0.2945).epsilon(1e-12));
  CHECK(p.y == doctest::Approx(0.383).epsilon(1e-12));
}

TEST_CASE("lerp is exact at knots") {
  const auto traj = two_knots();
  const auto p = lerp(traj, 5.0);
  CHECK(p.x == 0.295);
  CHECK(p.y == 0.401);
  const auto q = lerp(traj, 7.0);
  CHECK(q.x == 0.294);
  CHECK(q.y == 0.365);
}

TEST_CASE("lerp rejects queries outside the span") {
  try {
    lerp(two_knots(), 8.0);
    FAIL("expected OutOfRange");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfRange);
  }
  CHECK_THROWS_AS(lerp(two_knots(), 4.999), Error);
}

TEST_CASE("lerp on an empty trajectory") {
  try {
    lerp({"cup", true, {}}, 1.0);
    FAIL("expected EmptyTrajectory");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyTrajectory);
  }
}

TEST_CASE("lerp with one point is the identity at that point") {
  const ObjectTrajectory traj{"cup", true, {{3.0, 0.25, 0.75}}};
  const auto p = lerp(traj, 3.0);
  CHECK(p.x == 0.25);
  CHECK(p.y == 0.75);
  CHECK_THROWS_AS(lerp(traj, 3.5), Error);
}

TEST_CASE("lerp agrees with the brute-force oracle") {
  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const auto traj = testsup::random_trajectory(rng, 2, 10);
    for (int q = 0; q < 50; ++q) {
      const double t =
          rng.uniform_real(traj.points.front().t, traj.points.back().t);
      const auto fast = lerp(traj, t);
      const auto ref = brute_force_lerp(traj, t);
      CHECK(std::abs(fast.x - ref.x) < 1e-9);
      CHECK(std::abs(fast.y - ref.y) < 1e-9);
    }
  }
}

TEST_CASE("subsample interpolates requested times inside the span") {
  const auto traj = two_knots();
  const auto points = subsample(traj, {5.0, 6.0, 7.0});
  REQUIRE(points.size() == 3);
  CHECK(points[0].x == 0.295);
  CHECK(points[1].x == doctest::Approx(0.2945).epsilon(1e-12));
  CHECK(points[2].x == 0.294);
}

TEST_CASE("subsample omits times outside the span") {
  CHECK(subsample(two_knots(), {0.0, 1.0}).empty());
  CHECK(subsample(two_knots(), {0.0, 6.0, 9.0}).size() == 1);
  CHECK(subsample({"cup", true, {}}, {1.0, 2.0}).empty());
}

TEST_CASE("subsample at knot times returns the knots unchanged") {
  Rng rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    const auto traj = testsup::random_trajectory(rng, 1, 8);
    std::vector<double> times;
    for (const auto& p : traj.points) times.push_back(p.t);
    const auto points = subsample(traj, times);
    REQUIRE(points.size() == traj.points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      CHECK(points[i].t == traj.points[i].t);
      CHECK(points[i].x == traj.points[i].x);
      CHECK(points[i].y == traj.points[i].y);
    }
  }
}

TEST_CASE("repair replaces a far point and reports its deviation") {
  const ObjectTrajectory truth{"cup", true, {{5.0, 0.295, 0.401}}};
  const ObjectTrajectory predicted{"cup", true, {{5.0, 0.9, 0.9}}};
  const auto result = repair(predicted, truth, 0.1);
  REQUIRE(result.trajectory.points.size() == 1);
  CHECK(result.trajectory.points[0].x == 0.295);
  CHECK(result.trajectory.points[0].y == 0.401);
  CHECK(result.report.n_replaced == 1);
  REQUIRE(result.report.replaced_segments.size() == 1);
  CHECK(result.report.replaced_segments[0] == std::pair<std::size_t, std::size_t>{0, 0});
  // sqrt((0.9-0.295)^2 + (0.9-0.401)^2), computed independently
  CHECK(result.report.max_deviation ==
        doctest::Approx(std::hypot(0.9 - 0.295, 0.9 - 0.401)).epsilon(1e-12));
  CHECK(result.report.max_deviation == doctest::Approx(0.78).epsilon(0.01));
}

TEST_CASE("repair leaves an exact copy alone") {
  Rng rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const auto truth = testsup::random_trajectory(rng, 1, 8);
    const auto result = repair(truth, truth, 0.1);
    CHECK(result.report.n_replaced == 0);
    CHECK(result.report.replaced_segments.empty());
    CHECK(testsup::same_points(result.trajectory, truth));
  }
}

TEST_CASE("repair of an all-faulty prediction returns sampled truth") {
  const ObjectTrajectory truth{
      "cup", true, {{0.0, 0.1, 0.1}, {4.0, 0.5, 0.5}, {8.0, 0.9, 0.9}}};
  ObjectTrajectory predicted = truth;
  for (auto& p : predicted.points) {
    p.x = 0.0;
    p.y = 0.0;
  }
  const auto result = repair(predicted, truth, 0.05);
  CHECK(result.report.n_replaced == 3);
  REQUIRE(result.report.replaced_segments.size() == 1);
  CHECK(result.report.replaced_segments[0] ==
        std::pair<std::size_t, std::size_t>{0, 2});
  for (std::size_t i = 0; i < truth.points.size(); ++i) {
    // Brute-force per-point check against direct evaluation.
    const auto expected = lerp(truth, predicted.points[i].t);
    CHECK(result.trajectory.points[i].x == expected.x);
    CHECK(result.trajectory.points[i].y == expected.y);
  }
}

TEST_CASE("out-of-span predicted times are faulty and take clamped truth") {
  const ObjectTrajectory truth{"cup", true, {{4.0, 0.4, 0.4}, {6.0, 0.6, 0.6}}};
  const ObjectTrajectory predicted{"cup", true, {{1.0, 0.4, 0.4}, {5.0, 0.5, 0.5}}};
  const auto result = repair(predicted, truth, 0.1);
  CHECK(result.report.n_replaced == 1);
  CHECK(result.trajectory.points[0].x == 0.4);  // truth at clamped t=4
  CHECK(result.trajectory.points[1].x == 0.5);  // within tau, kept
}

TEST_CASE("repair requires a non-empty reference") {
  try {
    repair({"cup", true, {{1.0, 0.5, 0.5}}}, {"cup", true, {}}, 0.1);
    FAIL("expected EmptyTrajectory");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyTrajectory);
  }
}

TEST_CASE("repair is idempotent and lands within tau of the reference") {
  Rng rng(59);
  const double tau = 0.1;
  for (int trial = 0; trial < 100; ++trial) {
    const auto truth = testsup::random_trajectory(rng, 2, 8);
    ObjectTrajectory predicted = truth;
    for (auto& p : predicted.points) {
      if (rng.bernoulli(0.4)) {
        p.x = std::clamp(p.x + rng.uniform_real(-0.6, 0.6), 0.0, 1.0);
        p.y = std::clamp(p.y + rng.uniform_real(-0.6, 0.6), 0.0, 1.0);
      }
    }
    const auto once = repair(predicted, truth, tau);
    for (const auto& p : once.trajectory.points) {
      const auto ref = lerp(truth, p.t);
      CHECK(std::hypot(p.x - ref.x, p.y - ref.y) <= tau + 1e-12);
    }
    const auto twice = repair(once.trajectory, truth, tau);
    CHECK(twice.report.n_replaced == 0);
    CHECK(testsup::same_points(twice.trajectory, once.trajectory));
  }
}
