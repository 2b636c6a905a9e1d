#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "vironment/mux.hpp"
#include "vironment/session.hpp"
#include "vironment/sonar.hpp"
#include "vironment/wire.hpp"

using namespace vironment;

namespace {

Scene crowd(int agents) {
  Scene s;
  s.wearer = WearerPose(0, 0, 90);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> pos(-4.0, 4.0);
  for (int i = 0; i < agents; ++i) {
    s.agents.push_back({"a" + std::to_string(i), pos(rng), pos(rng), 0.1, -0.1, 0.25});
  }
  return s;
}

void BM_FirstEcho(benchmark::State& state) {
  const auto scene = crowd(static_cast<int>(state.range(0)));
  const SonarSpec spec;
  double b = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(first_echo(scene, b, spec));
    b = b >= 330.0 ? 0.0 : b + 30.0;
  }
}
BENCHMARK(BM_FirstEcho)->Arg(1)->Arg(5)->Arg(50);

void BM_Scan(benchmark::State& state) {
  const auto scene = crowd(5);
  const SonarSpec spec;
  Scanner scanner(ScanSchedule::for_spec(spec), spec, NoiseModel{0.01, 0.05});
  NoiseStream stream(7);
  for (auto _ : state) benchmark::DoNotOptimize(scanner.scan(scene, stream, 0));
}
BENCHMARK(BM_Scan);

void BM_Crc16(benchmark::State& state) {
  std::vector<std::uint8_t> data(32, 0x5A);
  for (auto _ : state) benchmark::DoNotOptimize(wire::crc16(data));
  state.SetBytesProcessed(state.iterations() * 32);
}
BENCHMARK(BM_Crc16);

void BM_DecodeStream(benchmark::State& state) {
  std::vector<std::uint8_t> bytes;
  for (int i = 0; i < 1000; ++i) {
    auto f = ScanFrame::empty(static_cast<std::uint16_t>(i), static_cast<std::uint32_t>(i * 300));
    f.readings[i % 12] = 1500;
    const auto b = wire::encode_frame(f, false);
    bytes.insert(bytes.end(), b.begin(), b.end());
  }
  for (auto _ : state) benchmark::DoNotOptimize(wire::decode_stream(bytes));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(bytes.size()));
}
BENCHMARK(BM_DecodeStream);

void BM_SessionStep(benchmark::State& state) {
  SessionConfig cfg;
  Session session(crowd(5), cfg, {});
  for (auto _ : state) benchmark::DoNotOptimize(session.step());
}
BENCHMARK(BM_SessionStep);

}  // namespace

BENCHMARK_MAIN();
