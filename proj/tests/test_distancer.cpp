#include <doctest.h>

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "vironment/distancer.hpp"

using namespace vironment;
using namespace vironment::distancer;

namespace {

Detection person(double height_px, double confidence = 0.9, std::string label = "person") {
  Detection d;
  d.bbox_top = 100.0;
  d.bbox_bottom = 100.0 + height_px;
  d.bbox_left = 200.0;
  d.bbox_right = 300.0;
  d.confidence = confidence;
  d.class_label = std::move(label);
  return d;
}

}  // namespace

TEST_CASE("estimate_distance examples") {
  CHECK(estimate_distance(person(500), {1000.0, 1.65}) == 3.3);
  CHECK(estimate_distance(person(660), {800.0, 1.65}) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(estimate_distance(person(1000), {1000.0, 1.65}) * 2.0 ==
        doctest::Approx(estimate_distance(person(500), {1000.0, 1.65})).epsilon(1e-15));
  Detection flat = person(10);
  flat.bbox_bottom = flat.bbox_top;
  CHECK_THROWS_AS(estimate_distance(flat, {}), std::invalid_argument);
}

TEST_CASE("estimate_distance monotonicity") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> h(1.0, 2000.0), f(100.0, 3000.0);
  for (int i = 0; i < 5000; ++i) {
    const double h1 = h(rng), h2 = h(rng), f1 = f(rng), f2 = f(rng);
    if (h1 == h2 || f1 == f2) continue;
    const Calibration c{f1, 1.65};
    CHECK((estimate_distance(person(h1), c) > estimate_distance(person(h2), c)) == (h1 < h2));
    const Calibration c2{f2, 1.65};
    CHECK((estimate_distance(person(h1), c2) > estimate_distance(person(h1), c)) == (f2 > f1));
  }
}

TEST_CASE("screen_state bands") {
  CHECK(screen_state(1.5) == ScreenState::kRed);
  CHECK(screen_state(1.95) == ScreenState::kYellow);
  CHECK(screen_state(2.5) == ScreenState::kGreen);
  CHECK(screen_state(1.8288) == ScreenState::kYellow);
  CHECK(screen_state(2.1336) == ScreenState::kGreen);
  CHECK(screen_state(std::nextafter(1.8288, 0.0)) == ScreenState::kRed);
  CHECK(screen_state(std::nextafter(2.1336, 0.0)) == ScreenState::kYellow);
  CHECK_THROWS_AS(screen_state(0.0), std::invalid_argument);
  CHECK_THROWS_AS(screen_state(-1.0), std::invalid_argument);
}

TEST_CASE("screen_state partitions the positive reals") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(1e-6, 20.0);
  for (int i = 0; i < 10000; ++i) {
    const double x = d(rng);
    const auto s = screen_state(x);
    const int hits = (x < 1.8288) + (x >= 1.8288 && x < 2.1336) + (x >= 2.1336);
    CHECK(hits == 1);
    if (x < 1.8288) CHECK(s == ScreenState::kRed);
    else if (x < 2.1336) CHECK(s == ScreenState::kYellow);
    else CHECK(s == ScreenState::kGreen);
  }
}

TEST_CASE("step_distancer") {
  const Calibration cal{1000.0, 1.65};
  CHECK(step_distancer({}, cal, ScreenState::kRed) == ScreenState::kGreen);

  std::vector<Detection> two = {person(500), person(1100)};  // 3.3 m and 1.5 m
  CHECK(estimate_distance(two[1], cal) == doctest::Approx(1.5));
  CHECK(step_distancer(two, cal, ScreenState::kGreen) == ScreenState::kRed);

  std::vector<Detection> car = {person(2000, 0.99, "car")};
  CHECK(step_distancer(car, cal, ScreenState::kGreen) == ScreenState::kGreen);

  std::vector<Detection> unsure = {person(2000, 0.3)};
  CHECK(step_distancer(unsure, cal, ScreenState::kGreen) == ScreenState::kGreen);
  CHECK(step_distancer(unsure, cal, ScreenState::kGreen, 0.2) == ScreenState::kRed);
}

TEST_CASE("step_distancer is permutation invariant") {
  const Calibration cal{900.0, 1.65};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> h(200.0, 1200.0), conf(0.0, 1.0);
  for (int t = 0; t < 500; ++t) {
    std::vector<Detection> dets;
    for (int i = static_cast<int>(rng() % 6); i > 0; --i) {
      dets.push_back(person(h(rng), conf(rng), rng() % 4 == 0 ? "dog" : "person"));
    }
    const auto expected = step_distancer(dets, cal, ScreenState::kGreen);
    for (int k = 0; k < 5; ++k) {
      std::shuffle(dets.begin(), dets.end(), rng);
      CHECK(step_distancer(dets, cal, ScreenState::kGreen) == expected);
    }
  }
}

TEST_CASE("projected detections recover scene distances") {
  Scene scene;
  scene.wearer = WearerPose(0, 0, 90);
  scene.agents.push_back({"ahead", 0.0, 3.0, 0, 0, 0.25});
  scene.agents.push_back({"behind", 0.0, -1.0, 0, 0, 0.25});
  CameraModel cam;
  const auto dets = project_detections(scene, cam);
  REQUIRE(dets.size() == 1);
  CHECK(estimate_distance(dets[0], cam.calibration) == doctest::Approx(3.0));
  CHECK(dets[0].bbox_left < cam.image_width / 2.0);
  CHECK(dets[0].bbox_right > cam.image_width / 2.0);
}
