#include <doctest.h>

#include <random>
#include <vector>

#include "vironment/alert.hpp"

using namespace vironment;

namespace {

ScanFrame frame_at(double meters, int index = 0) {
  auto f = ScanFrame::empty();
  f.readings[index] = static_cast<std::uint16_t>(std::lround(meters * 1000.0));
  return f;
}

std::vector<bool> run(const std::vector<ScanFrame>& frames, const AlertConfig& cfg) {
  AlertState s;
  std::vector<bool> out;
  for (const auto& f : frames) {
    const auto step = step_alert(s, f, cfg);
    CHECK(step.outputs.led == step.outputs.horn);
    CHECK(step.state.led_on == step.state.horn_on);
    s = step.state;
    out.push_back(step.outputs.led);
  }
  return out;
}

}  // namespace

TEST_CASE("clear frames never trigger") {
  std::vector<ScanFrame> frames(50, frame_at(2.0));
  frames.push_back(ScanFrame::empty());
  for (bool on : run(frames, {})) CHECK_FALSE(on);
}

TEST_CASE("two consecutive violations switch on at the second frame") {
  const auto out = run({frame_at(1.9), frame_at(1.9), frame_at(1.9)}, {});
  CHECK(out == std::vector<bool>{false, true, true});
}

TEST_CASE("hysteresis holds the alert while readings hover below release") {
  // Hand-simulated: on after frames 0-1; then 2.1 resets the clear streak
  // each time, so three consecutive >= 2.2 frames never happen.
  std::vector<ScanFrame> frames = {frame_at(1.9), frame_at(1.9)};
  for (int i = 0; i < 20; ++i) frames.push_back(frame_at(i % 2 == 0 ? 2.3 : 2.1));
  const auto out = run(frames, {});
  for (std::size_t i = 1; i < out.size(); ++i) CHECK(out[i]);

  // The loop ended on 2.1; three clean frames then release on the third.
  frames.push_back(frame_at(2.3));
  frames.push_back(frame_at(2.3));
  frames.push_back(frame_at(2.3));
  const auto out2 = run(frames, {});
  CHECK(out2[out2.size() - 2]);
  CHECK_FALSE(out2.back());
}

TEST_CASE("no-echo readings never violate") {
  CHECK_FALSE(frame_violates(ScanFrame::empty(), 2.0));
  CHECK(frame_clear(ScanFrame::empty(), 2.2));
}

TEST_CASE("isolated glitches are rejected with trigger_count 2") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 500; ++t) {
    std::vector<ScanFrame> frames(30, frame_at(3.0, static_cast<int>(rng() % 12)));
    const std::size_t glitch = 1 + rng() % 28;
    frames[glitch] = frame_at(0.5 + (rng() % 1000) / 1000.0, static_cast<int>(rng() % 12));
    for (bool on : run(frames, {})) CHECK_FALSE(on);
  }
}

TEST_CASE("unit counts with equal thresholds reduce to a comparator") {
  AlertConfig cfg{2.0, 1, 1, 2.0};
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> mm(20, 4000);
  for (int t = 0; t < 200; ++t) {
    AlertState s;
    for (int k = 0; k < 50; ++k) {
      ScanFrame f;
      bool expect = false;
      for (auto& r : f.readings) {
        r = rng() % 3 == 0 ? kNoEcho : static_cast<std::uint16_t>(mm(rng));
        if (r != kNoEcho && r < 2000) expect = true;
      }
      const auto step = step_alert(s, f, cfg);
      CHECK(step.outputs.led == expect);
      s = step.state;
    }
  }
}

TEST_CASE("config validation") {
  AlertConfig c;
  CHECK_NOTHROW(c.validate());
  c.release_threshold = 1.9;
  CHECK_THROWS(c.validate());
  c = {};
  c.trigger_count = 0;
  CHECK_THROWS(c.validate());
}
