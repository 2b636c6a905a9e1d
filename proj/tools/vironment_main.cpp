// vironment: headless runs, live serving, PPI rendering, wire-format tools
// and the monocular distancer, behind one CLI.
//
// Exit codes: 0 success, 1 usage, 2 scenario/input error.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <thread>

#include "vironment/codec.hpp"
#include "vironment/distancer.hpp"
#include "vironment/headless.hpp"
#include "vironment/ppi.hpp"
#include "vironment/scenario.hpp"
#include "vironment/service.hpp"
#include "vironment/wire.hpp"

namespace {

using namespace vironment;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;

std::atomic<bool> g_interrupted{false};

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("vironment");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* lvl = std::getenv("VIRONMENT_LOG_LEVEL")) {
    spdlog::set_level(spdlog::level::from_str(lvl));
  }
}

// Input failures that are not the user's command line.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_all(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") return read_all(std::cin);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  return read_all(in);
}

void write_output(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout.write(data.data(), static_cast<std::streamsize>(data.size()));
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !out.write(data.data(), static_cast<std::streamsize>(data.size()))) {
    throw InputError("cannot write " + path);
  }
}

struct Options {
  std::string scenario;
  std::string out;
  std::string in;
  std::uint64_t seed = 0;
  std::uint64_t cycles = 0;
  std::uint16_t port = 8080;
  std::string address = "127.0.0.1";
  std::string static_dir = VIRONMENT_DEFAULT_WEB_DIR;
  int size_px = 512;
  std::uint64_t at_cycle = 0;
  std::vector<std::string> readings;
  std::string log;
  double focal = 0.0;
  double height = 1.65;
  double min_confidence = distancer::kDefaultMinConfidence;
  std::uint64_t chunk_seed = 1;
};

HeadlessOptions headless_options(const Options& o, const CLI::App& sub) {
  HeadlessOptions h;
  if (sub.count("--seed")) h.seed = o.seed;
  if (sub.count("--cycles")) h.cycles = o.cycles;
  return h;
}

int cmd_run(const Options& o, const CLI::App& sub) {
  const auto summary = run_headless(o.scenario, o.out, headless_options(o, sub));
  print_summary(summary, std::cout);
  return kExitOk;
}

int cmd_serve(const Options& o, const CLI::App& sub) {
  Scenario sc = load_scenario(o.scenario);
  if (sub.count("--seed")) {
    sc.config.seed = o.seed;
    sc.scene.rng_seed = o.seed;
  }
  ServeOptions so;
  so.address = o.address;
  so.port = o.port;
  so.static_dir = o.static_dir;
  Service service(std::move(sc), so);
  service.start();
  std::cout << "serving on http://" << o.address << ":" << service.port() << std::endl;

  std::signal(SIGINT, [](int) { g_interrupted = true; });
  std::signal(SIGTERM, [](int) { g_interrupted = true; });
  while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  service.stop();
  return kExitOk;
}

ScanFrame frame_from_readings(const std::vector<std::string>& items) {
  if (items.size() != kSensorCount) throw CLI::ValidationError("--readings", "expected 12 values");
  ScanFrame f = ScanFrame::empty();
  for (int i = 0; i < kSensorCount; ++i) {
    const auto& s = items[i];
    if (s == "-" || s == "none") continue;
    const unsigned long v = std::stoul(s);
    if (v > 0xFFFF) throw CLI::ValidationError("--readings", "value out of range: " + s);
    f.readings[i] = static_cast<std::uint16_t>(v);
  }
  f.validate();
  return f;
}

int cmd_ppi_render(const Options& o, const CLI::App& sub) {
  Scenario sc;
  ScanFrame frame;
  if (sub.count("--readings")) {
    frame = frame_from_readings(o.readings);
  } else if (!o.scenario.empty()) {
    sc = load_scenario(o.scenario);
    Session session(sc.scene, sc.config, sc.script);
    for (std::uint64_t i = 0; i <= o.at_cycle; ++i) frame = session.step().record.frame;
  } else {
    throw CLI::RequiredError("--scenario or --readings");
  }
  write_output(o.out, render_svg(build_ppi(frame, sc.config.spec), o.size_px));
  return kExitOk;
}

int cmd_proto_encode(const Options& o) {
  std::istringstream in(read_input(o.in));
  std::string bytes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (j.value("type", "telemetry") != "telemetry") continue;  // skip error records
    try {
      const auto f = codec::frame_from_json(j);
      const auto b = wire::encode_frame(f.frame, f.alert);
      bytes.append(reinterpret_cast<const char*>(b.data()), b.size());
    } catch (const SchemaError& e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  write_output(o.out, bytes);
  return kExitOk;
}

json event_to_json(const wire::DecodeEvent& ev) {
  if (const auto* f = std::get_if<wire::DecodedFrame>(&ev)) {
    json j = codec::to_json(f->frame);
    j["type"] = "frame";
    j["alert"] = f->alert;
    return j;
  }
  const auto& e = std::get<wire::DecodeError>(ev);
  return {{"type", "error"},
          {"kind", wire::to_string(e.kind)},
          {"offset", e.offset},
          {"length", e.length}};
}

int cmd_proto_decode(const Options& o) {
  const std::string data = read_input(o.in);
  const auto events =
      wire::decode_stream(std::span(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
  std::string text;
  std::size_t frames = 0, errors = 0;
  for (const auto& ev : events) {
    text += event_to_json(ev).dump() + "\n";
    (std::holds_alternative<wire::DecodedFrame>(ev) ? frames : errors)++;
  }
  write_output(o.out, text);
  spdlog::info("decoded {} frames, {} error regions", frames, errors);
  return kExitOk;
}

// Loopback: session -> encoder -> randomly chunked byte stream -> decoder.
int cmd_proto_pipe(const Options& o, const CLI::App& sub) {
  const Scenario sc = with_overrides(load_scenario(o.scenario), headless_options(o, sub));
  const auto out = run_session(sc.scene, sc.config, sc.script, sc.cycles);

  std::vector<std::uint8_t> stream;
  for (const auto& r : out.records) {
    const auto b = wire::encode_frame(r.frame, r.alert.led);
    stream.insert(stream.end(), b.begin(), b.end());
  }

  std::mt19937_64 rng(o.chunk_seed);
  wire::StreamDecoder decoder;
  std::vector<wire::DecodeEvent> events;
  for (std::size_t pos = 0; pos < stream.size();) {
    const std::size_t n = std::min<std::size_t>(stream.size() - pos, 1 + rng() % 64);
    decoder.feed(std::span(stream).subspan(pos, n), events);
    pos += n;
  }
  decoder.finish(events);

  std::size_t matched = 0, errors = 0, idx = 0;
  for (const auto& ev : events) {
    if (const auto* f = std::get_if<wire::DecodedFrame>(&ev)) {
      if (idx < out.records.size() && f->frame == out.records[idx].frame &&
          f->alert == out.records[idx].alert.led) {
        ++matched;
      }
      ++idx;
    } else {
      ++errors;
    }
  }
  const bool ok = matched == out.records.size() && idx == out.records.size() && errors == 0;
  std::cout << "frames sent: " << out.records.size() << '\n'
            << "bytes: " << stream.size() << '\n'
            << "frames decoded: " << idx << '\n'
            << "decode errors: " << errors << '\n'
            << "loopback: " << (ok ? "ok" : "MISMATCH") << '\n';
  return ok ? kExitOk : kExitInput;
}

int cmd_distancer_run(const Options& o) {
  distancer::Calibration cal{o.focal, o.height};
  cal.validate();
  std::istringstream in(read_input(o.log));
  std::string line, text;
  std::size_t line_no = 0;
  std::uint64_t frame_no = 0;
  auto state = distancer::ScreenState::kGreen;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_no);
    std::vector<distancer::Detection> dets;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InputError(where + ": " + e.what());
    }
    std::uint64_t frame = frame_no;
    try {
      if (!j.is_object()) throw SchemaError("", "expected an object");
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() != "frame" && it.key() != "detections") {
          throw SchemaError("/" + it.key(), "unknown field");
        }
      }
      if (j.contains("frame")) frame = j.at("frame").get<std::uint64_t>();
      const auto& arr = j.at("detections");
      if (!arr.is_array()) throw SchemaError("/detections", "expected an array");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        dets.push_back(codec::detection_from_json(arr[i], "/detections/" + std::to_string(i)));
      }
    } catch (const SchemaError& e) {
      throw InputError(where + ": " + e.what());
    } catch (const json::exception& e) {
      throw InputError(where + ": " + e.what());
    }
    const auto result = distancer::evaluate_frame(dets, cal, o.min_confidence);
    state = distancer::step_distancer(dets, cal, state, o.min_confidence);
    json outj = {{"frame", frame}, {"state", distancer::to_string(state)}};
    outj["nearest_m"] = result.nearest_m ? json(*result.nearest_m) : json(nullptr);
    text += outj.dump() + "\n";
    frame_no = frame + 1;
  }
  write_output(o.out, text);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"Wearable sonar-ring simulator, PPI renderer and wire-protocol tools"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  Options o;

  auto* run = app.add_subcommand("run", "Run a scenario headless and write the telemetry log");
  run->add_option("--scenario", o.scenario, "Scenario JSON file")->required();
  run->add_option("--out", o.out, "Telemetry output (JSON lines)")->required();
  run->add_option("--seed", o.seed, "Override the scenario seed");
  run->add_option("--cycles", o.cycles, "Override the number of cycles");

  auto* serve = app.add_subcommand("serve", "Run a scenario live over HTTP/WebSocket");
  serve->add_option("--scenario", o.scenario, "Scenario JSON file")->required();
  serve->add_option("--port", o.port, "TCP port (0 = any free port)");
  serve->add_option("--address", o.address, "Bind address");
  serve->add_option("--static", o.static_dir, "Directory of UI assets");
  serve->add_option("--seed", o.seed, "Override the scenario seed");

  auto* ppi = app.add_subcommand("ppi", "Plan Position Indicator tools");
  ppi->require_subcommand(1);
  auto* render = ppi->add_subcommand("render", "Render one PPI frame as SVG");
  render->add_option("--scenario", o.scenario, "Scenario to scan");
  render->add_option("--cycle", o.at_cycle, "Which cycle of the scenario to render (0-based)");
  render->add_option("--readings", o.readings,
                     "12 comma-separated readings in mm, 12 o'clock first; '-' = no echo")
      ->delimiter(',');
  render->add_option("--size", o.size_px, "Image size in px (>= 64)");
  render->add_option("--out", o.out, "Output file (default stdout)");

  auto* proto = app.add_subcommand("proto", "Binary wire-format tools");
  proto->require_subcommand(1);
  auto* encode = proto->add_subcommand("encode", "JSON-lines frames -> binary wire frames");
  encode->add_option("--in", o.in, "Input (default stdin)");
  encode->add_option("--out", o.out, "Output (default stdout)");
  auto* decode = proto->add_subcommand("decode", "Binary wire frames -> JSON-lines events");
  decode->add_option("--in", o.in, "Input (default stdin)");
  decode->add_option("--out", o.out, "Output (default stdout)");
  auto* pipe = proto->add_subcommand("pipe", "Encode a session and decode it back in random chunks");
  pipe->add_option("--scenario", o.scenario, "Scenario JSON file")->required();
  pipe->add_option("--seed", o.seed, "Override the scenario seed");
  pipe->add_option("--cycles", o.cycles, "Override the number of cycles");
  pipe->add_option("--chunk-seed", o.chunk_seed, "Seed for the chunk boundaries");

  auto* dist = app.add_subcommand("distancer", "Monocular social-distance estimator");
  dist->require_subcommand(1);
  auto* drun = dist->add_subcommand("run", "Evaluate a detection log, one state per frame");
  drun->add_option("--log", o.log, "Detection log (JSON lines)")->required();
  drun->add_option("--focal", o.focal, "Focal length in px")->required()->check(CLI::PositiveNumber);
  drun->add_option("--height", o.height, "Assumed person height in m")->check(CLI::PositiveNumber);
  drun->add_option("--min-confidence", o.min_confidence, "Detection confidence filter")
      ->check(CLI::Range(0.0, 1.0));
  drun->add_option("--out", o.out, "Output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return cmd_run(o, *run);
    if (*serve) return cmd_serve(o, *serve);
    if (*render) return cmd_ppi_render(o, *render);
    if (*encode) return cmd_proto_encode(o);
    if (*decode) return cmd_proto_decode(o);
    if (*pipe) return cmd_proto_pipe(o, *pipe);
    if (*drun) return cmd_distancer_run(o);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ScenarioError& e) {
    std::cerr << "scenario error: " << e.what() << '\n';
    return kExitInput;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitUsage;
}
