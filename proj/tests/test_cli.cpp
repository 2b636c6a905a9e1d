#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(VIRONMENT_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<json> lines(const std::string& text) {
  std::vector<json> v;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) v.push_back(json::parse(line));
  }
  return v;
}

const fs::path kScenarios = VIRONMENT_SCENARIO_DIR;
const fs::path kTmp = fs::temp_directory_path() / "vironment_cli_test";

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("run is deterministic and prints a summary") {
  fs::create_directories(kTmp);
  const auto a = kTmp / "a.jsonl", b = kTmp / "b.jsonl";
  const auto ra = run("run --scenario " + q(kScenarios / "approach.json") + " --out " + q(a));
  const auto rb = run("run --scenario " + q(kScenarios / "approach.json") + " --out " + q(b));
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(ra.out == rb.out);
  CHECK(ra.out.find("cycles: 30") != std::string::npos);
  CHECK(ra.out.find("alert-on cycles: ") != std::string::npos);
  CHECK(ra.out.find("command errors: 0") != std::string::npos);
  CHECK(ra.out.find("min distance observed: ") != std::string::npos);
  CHECK(lines(slurp(a)).size() == 30);

  const auto c = kTmp / "c.jsonl";
  REQUIRE(run("run --scenario " + q(kScenarios / "approach.json") + " --out " + q(c) +
              " --seed 99 --cycles 5")
              .code == 0);
  CHECK(lines(slurp(c)).size() == 5);
}

TEST_CASE("crossing scenario reports its scripted error") {
  const auto out = kTmp / "crossing.jsonl";
  const auto r = run("run --scenario " + q(kScenarios / "crossing.json") + " --out " + q(out));
  REQUIRE(r.code == 0);
  CHECK(r.out.find("command errors: 1") != std::string::npos);
  int errors = 0;
  for (const auto& j : lines(slurp(out))) errors += j.at("type") == "error";
  CHECK(errors == 1);
}

TEST_CASE("exit codes") {
  CHECK(run("").code == 1);
  CHECK(run("frobnicate").code == 1);
  CHECK(run("run --out x").code == 1);
  CHECK(run("--version").code == 0);
  CHECK(run("run --scenario /nonexistent.json --out " + q(kTmp / "x.jsonl")).code == 2);

  fs::create_directories(kTmp);
  std::ofstream(kTmp / "bad.json") << "{\"wearer\": {\"x\": 0, \"y\": 0, \"heading\": 0}, \"bogus\": 1}";
  CHECK(run("run --scenario " + q(kTmp / "bad.json") + " --out " + q(kTmp / "x.jsonl")).code == 2);
  std::ofstream(kTmp / "broken.json") << "{\"wearer\": ";
  CHECK(run("run --scenario " + q(kTmp / "broken.json") + " --out " + q(kTmp / "x.jsonl")).code == 2);
}

TEST_CASE("proto encode then decode round-trips the telemetry") {
  fs::create_directories(kTmp);
  const auto log = kTmp / "crowd.jsonl", bin = kTmp / "crowd.bin", dec = kTmp / "crowd.dec";
  REQUIRE(run("run --scenario " + q(kScenarios / "crowd.json") + " --out " + q(log)).code == 0);
  REQUIRE(run("proto encode --in " + q(log) + " --out " + q(bin)).code == 0);
  const auto records = lines(slurp(log));
  CHECK(fs::file_size(bin) == records.size() * 35);
  REQUIRE(run("proto decode --in " + q(bin) + " --out " + q(dec)).code == 0);
  const auto decoded = lines(slurp(dec));
  REQUIRE(decoded.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(decoded[i].at("type") == "frame");
    CHECK(decoded[i].at("seq") == records[i].at("seq"));
    CHECK(decoded[i].at("readings") == records[i].at("readings"));
    CHECK(decoded[i].at("timestamp_ms") == records[i].at("timestamp_ms"));
    CHECK(decoded[i].at("alert") == records[i].at("alert").at("led"));
  }

  // Damage one frame: it becomes a single error event, the rest survive.
  auto bytes = slurp(bin);
  bytes[35 * 3 + 10] ^= 0x01;
  std::ofstream(kTmp / "bad.bin", std::ios::binary) << bytes;
  const auto r = run("proto decode --in " + q(kTmp / "bad.bin"));
  REQUIRE(r.code == 0);
  const auto ev = lines(r.out);
  REQUIRE(ev.size() == records.size());
  CHECK(ev[3].at("type") == "error");
  CHECK(ev[3].at("kind") == "crc-mismatch");
  CHECK(ev[3].at("offset") == 105);
  CHECK(ev[4].at("type") == "frame");
}

TEST_CASE("proto pipe loops back cleanly") {
  const auto r = run("proto pipe --scenario " + q(kScenarios / "crossing.json") + " --chunk-seed 3");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("decode errors: 0") != std::string::npos);
  CHECK(r.out.find("loopback: ok") != std::string::npos);
}

TEST_CASE("ppi render from explicit readings") {
  const auto r = run("ppi render --readings 2000,-,-,-,-,-,-,-,-,-,-,- --size 200");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("<svg", 0) == 0);
  CHECK(r.out.find("M 100.000 100.000 L 87.059 51.704 A 50.000 50.000 0 0 1 112.941 51.704 Z") !=
        std::string::npos);
  CHECK(r.out.find("rgb(0,128,0)") != std::string::npos);
  CHECK(run("ppi render --readings 1,2,3").code == 1);
  CHECK(run("ppi render --readings 2000,-,-,-,-,-,-,-,-,-,-,- --size 10").code == 1);

  const auto s = run("ppi render --scenario " + q(kScenarios / "approach.json") + " --cycle 3");
  REQUIRE(s.code == 0);
  CHECK(s.out.find("</svg>") != std::string::npos);
}

TEST_CASE("distancer run over a detection log") {
  const auto r = run("distancer run --log " + q(fs::path(VIRONMENT_TEST_DATA_DIR) / "detections.jsonl") +
                     " --focal 1000");
  REQUIRE(r.code == 0);
  const auto out = lines(r.out);
  REQUIRE(out.size() == 4);
  CHECK(out[0].at("nearest_m").get<double>() == 3.3);
  CHECK(out[0].at("state") == "green");
  CHECK(out[1].at("nearest_m").get<double>() == doctest::Approx(1.65));
  CHECK(out[1].at("state") == "red");
  CHECK(out[2].at("nearest_m").is_null());
  CHECK(out[2].at("state") == "green");
  CHECK(out[3].at("state") == "green");
  CHECK(run("distancer run --log " + q(fs::path(VIRONMENT_TEST_DATA_DIR) / "detections.jsonl")).code == 1);
}
