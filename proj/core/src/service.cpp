#include "vironment/service.hpp"

#include <spdlog/spdlog.h>

#include <atomic>
#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <variant>

#include "vironment/codec.hpp"

namespace vironment {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using nlohmann::json;

namespace {

enum class Control { kPause, kResume, kReset };
using Steering = std::variant<Command, Control>;

std::string_view mime_type(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "text/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/x-icon";
  return "application/octet-stream";
}

class WsSession;

}  // namespace

namespace detail {

struct ServiceState {
  ServiceState(Scenario sc, ServeOptions opts)
      : options(std::move(opts)),
        session(sc.scene, sc.config, sc.script),
        cycle_duration(sc.config.cycle_duration()),
        acceptor(ioc) {}

  ServeOptions options;

  // Session state, guarded by session_mutex.
  std::mutex session_mutex;
  Session session;
  std::deque<Steering> pending;
  bool paused = false;
  std::optional<std::uint16_t> last_seq;
  double cycle_duration;

  // Network.
  net::io_context ioc;
  tcp::acceptor acceptor;
  std::mutex clients_mutex;
  std::set<std::shared_ptr<WsSession>> clients;

  std::thread io_thread;
  std::thread loop_thread;
  std::mutex stop_mutex;
  std::condition_variable stop_cv;
  bool stopping = false;
  bool started = false;

  void do_accept();
  void run_loop();
  void broadcast(std::string message);
  void join(const std::shared_ptr<WsSession>& ws);
  void leave(const std::shared_ptr<WsSession>& ws);
  std::optional<std::string> handle_message(const std::string& text);
  http::response<http::string_body> handle_http(const http::request<http::string_body>& req);
  std::uint16_t bound_port = 0;
};

}  // namespace detail

namespace {

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket&& socket, detail::ServiceState* hub)
      : ws_(std::move(socket)), hub_(hub) {}

  void run(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.text(true);
    ws_.async_accept(req, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
  }

  void send(std::shared_ptr<const std::string> msg) {
    net::post(ws_.get_executor(),
              beast::bind_front_handler(&WsSession::on_send, shared_from_this(), std::move(msg)));
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    hub_->join(shared_from_this());
    do_read();
  }

  void do_read() {
    ws_.async_read(buffer_, beast::bind_front_handler(&WsSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) {
      hub_->leave(shared_from_this());
      return;
    }
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    if (auto reply = hub_->handle_message(text)) {
      send(std::make_shared<const std::string>(std::move(*reply)));
    }
    do_read();
  }

  void on_send(std::shared_ptr<const std::string> msg) {
    queue_.push_back(std::move(msg));
    // queue_.front() may be mid-write; drop the oldest waiting message.
    if (queue_.size() > hub_->options.client_queue_limit + 1) {
      queue_.erase(queue_.begin() + 1);
    }
    if (queue_.size() > 1) return;
    do_write();
  }

  void do_write() {
    ws_.async_write(net::buffer(*queue_.front()),
                    beast::bind_front_handler(&WsSession::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) {
      hub_->leave(shared_from_this());
      return;
    }
    queue_.pop_front();
    if (!queue_.empty()) do_write();
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  std::deque<std::shared_ptr<const std::string>> queue_;
  detail::ServiceState* hub_;  // outlives every connection
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket&& socket, detail::ServiceState* hub)
      : stream_(std::move(socket)), hub_(hub) {}

  void run() { do_read(); }

 private:
  void do_read() {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_,
                     beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec == http::error::end_of_stream) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    if (ec) return;

    if (websocket::is_upgrade(req_) && req_.target() == "/ws") {
      stream_.expires_never();
      std::make_shared<WsSession>(stream_.release_socket(), hub_)->run(std::move(req_));
      return;
    }

    auto res = std::make_shared<http::response<http::string_body>>(hub_->handle_http(req_));
    http::async_write(stream_, *res,
                      [self = shared_from_this(), res](beast::error_code wec, std::size_t) {
                        if (wec) return;
                        if (res->need_eof()) {
                          self->stream_.socket().shutdown(tcp::socket::shutdown_send, wec);
                          return;
                        }
                        self->do_read();
                      });
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
  detail::ServiceState* hub_;  // outlives every connection
};

}  // namespace

void detail::ServiceState::do_accept() {
  acceptor.async_accept(ioc, [this](beast::error_code ec, tcp::socket socket) {
    if (ec) {
      if (ec == net::error::operation_aborted || !acceptor.is_open()) return;
      spdlog::warn("accept failed: {}", ec.message());
    } else {
      std::make_shared<HttpSession>(std::move(socket), this)->run();
    }
    do_accept();
  });
}

void detail::ServiceState::join(const std::shared_ptr<WsSession>& ws) {
  std::lock_guard lk(clients_mutex);
  clients.insert(ws);
  spdlog::info("client connected ({} live)", clients.size());
}

void detail::ServiceState::leave(const std::shared_ptr<WsSession>& ws) {
  std::lock_guard lk(clients_mutex);
  if (clients.erase(ws)) spdlog::info("client disconnected ({} live)", clients.size());
}

void detail::ServiceState::broadcast(std::string message) {
  auto shared = std::make_shared<const std::string>(std::move(message));
  std::lock_guard lk(clients_mutex);
  for (const auto& c : clients) c->send(shared);
}

std::optional<std::string> detail::ServiceState::handle_message(const std::string& text) {
  auto error_reply = [](const std::string& path, const std::string& message) {
    json j = {{"type", "error"}, {"message", message}};
    if (!path.empty()) j["path"] = path;
    return j.dump();
  };

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    return error_reply("", e.what());
  }

  Steering steering;
  try {
    const auto it = doc.is_object() ? doc.find("command") : doc.end();
    const std::string name =
        (it != doc.end() && it->is_string()) ? it->get<std::string>() : std::string();
    if ((name == "pause" || name == "resume" || name == "reset") && doc.size() == 1) {
      steering = name == "pause" ? Control::kPause
                 : name == "resume" ? Control::kResume
                                    : Control::kReset;
    } else {
      steering = codec::command_from_json(doc);
    }
  } catch (const SchemaError& e) {
    return error_reply(e.path(), e.what());
  }

  std::lock_guard lk(session_mutex);
  pending.push_back(std::move(steering));
  return std::nullopt;
}

http::response<http::string_body> detail::ServiceState::handle_http(
    const http::request<http::string_body>& req) {
  http::response<http::string_body> res;
  res.version(req.version());
  res.keep_alive(req.keep_alive());
  res.set(http::field::server, "vironment/" + std::string(kVersion));

  auto finish = [&](http::status status, std::string_view type, std::string body) {
    res.result(status);
    res.set(http::field::content_type, beast::string_view(type.data(), type.size()));
    res.body() = std::move(body);
    res.prepare_payload();
    return res;
  };

  if (req.method() != http::verb::get && req.method() != http::verb::head) {
    return finish(http::status::method_not_allowed, "text/plain", "method not allowed\n");
  }

  const std::string target(req.target());
  if (target == "/health") {
    json j = {{"status", "ok"}, {"version", kVersion}};
    std::lock_guard lk(session_mutex);
    j["seq"] = last_seq ? json(*last_seq) : json(nullptr);
    j["cycle"] = session.cycle();
    j["paused"] = paused;
    return finish(http::status::ok, "application/json", j.dump());
  }

  std::string rel = target.substr(0, target.find('?'));
  if (rel == "/" || rel.empty()) rel = "/index.html";
  if (options.static_dir.empty() || rel.find("..") != std::string::npos) {
    return finish(http::status::not_found, "text/plain", "not found\n");
  }
  const auto file = options.static_dir / rel.substr(1);
  std::ifstream in(file, std::ios::binary);
  if (!in) return finish(http::status::not_found, "text/plain", "not found\n");
  std::ostringstream ss;
  ss << in.rdbuf();
  return finish(http::status::ok, mime_type(file), ss.str());
}

void detail::ServiceState::run_loop() {
  const auto period = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(cycle_duration));
  auto next = std::chrono::steady_clock::now();

  for (;;) {
    next += period;
    {
      std::unique_lock lk(stop_mutex);
      if (stop_cv.wait_until(lk, next, [&] { return stopping; })) return;
    }

    std::vector<std::string> messages;
    {
      std::lock_guard lk(session_mutex);
      while (!pending.empty()) {
        Steering s = std::move(pending.front());
        pending.pop_front();
        if (auto* cmd = std::get_if<Command>(&s)) {
          session.enqueue(std::move(*cmd));
        } else {
          switch (std::get<Control>(s)) {
            case Control::kPause: paused = true; break;
            case Control::kResume: paused = false; break;
            case Control::kReset:
              session.reset();
              last_seq.reset();
              break;
          }
        }
      }
      if (paused) continue;
      CycleOutput out = session.step();
      last_seq = out.record.frame.seq;
      for (const auto& e : out.errors) messages.push_back(codec::to_json(e).dump());
      messages.push_back(codec::to_json(out.record).dump());
    }
    for (auto& m : messages) broadcast(std::move(m));
  }
}

Service::Service(Scenario scenario, ServeOptions options)
    : impl_(std::make_unique<detail::ServiceState>(std::move(scenario), std::move(options))) {}

Service::~Service() { stop(); }

void Service::start() {
  auto& im = *impl_;
  if (im.started) return;
  const auto addr = net::ip::make_address(im.options.address);
  const tcp::endpoint ep(addr, im.options.port);
  im.acceptor.open(ep.protocol());
  im.acceptor.set_option(net::socket_base::reuse_address(true));
  im.acceptor.bind(ep);
  im.acceptor.listen(net::socket_base::max_listen_connections);
  im.started = true;
  im.bound_port = im.acceptor.local_endpoint().port();
  spdlog::info("serving on http://{}:{} (cycle {:.3f} ms)", im.options.address, port(),
               im.cycle_duration * 1000.0);

  im.do_accept();
  im.io_thread = std::thread([&im] { im.ioc.run(); });
  im.loop_thread = std::thread([&im] { im.run_loop(); });
}

void Service::stop() {
  auto& im = *impl_;
  {
    std::lock_guard lk(im.stop_mutex);
    if (im.stopping || !im.started) {
      im.stopping = true;
      im.stop_cv.notify_all();
      return;
    }
    im.stopping = true;
  }
  im.stop_cv.notify_all();
  if (im.loop_thread.joinable()) im.loop_thread.join();

  im.ioc.stop();
  if (im.io_thread.joinable()) im.io_thread.join();
  beast::error_code ec;
  im.acceptor.close(ec);
  std::lock_guard lk(im.clients_mutex);
  im.clients.clear();
}

void Service::wait() {
  std::unique_lock lk(impl_->stop_mutex);
  impl_->stop_cv.wait(lk, [&] { return impl_->stopping; });
}

std::uint16_t Service::port() const { return impl_->bound_port; }

}  // namespace vironment
