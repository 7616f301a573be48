#include "simdeck/server.hpp"

#include <atomic>
#include <deque>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast.hpp>

#include "simdeck/error.hpp"

namespace simdeck {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

namespace {

struct Outgoing {
  std::shared_ptr<const std::string> data;
  bool binary = false;
  int image_id = -1;  ///< set for image frames, which may be superseded
};

Outgoing text_message(const nlohmann::json& j) { return {std::make_shared<const std::string>(j.dump()), false, -1}; }

std::vector<Outgoing> frame_messages(const Frame& f) {
  std::vector<Outgoing> out{text_message(protocol::frame_meta_message(f))};
  for (const auto& [id, img] : f.images) {
    const auto bytes = protocol::encode_image_frame(static_cast<std::uint32_t>(id), img);
    out.push_back({std::make_shared<const std::string>(bytes.begin(), bytes.end()), true, id});
  }
  return out;
}

std::string mime_type(const std::filesystem::path& p) {
  const auto ext = p.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "text/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".png") return "image/png";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".ico") return "image/x-icon";
  if (ext == ".wasm") return "application/wasm";
  return "application/octet-stream";
}

constexpr std::string_view kPlaceholderPage =
    "<!doctype html><html><head><meta charset=\"utf-8\"><title>simdeck</title></head>"
    "<body><h1>simdeck host</h1><p>The web client bundle was not found. "
    "Connect a WebSocket client to <code>/ws</code>.</p></body></html>";

}  // namespace

class WsSession;

struct Server::Impl : std::enable_shared_from_this<Server::Impl> {
  Impl(Engine& e, ServerOptions o) : engine(e), options(std::move(o)), acceptor(ioc) {}

  Engine& engine;
  ServerOptions options;
  net::io_context ioc;
  tcp::acceptor acceptor;
  std::thread thread;
  int listener_id = 0;
  std::set<std::shared_ptr<WsSession>> sessions;  // io thread only
  std::atomic<std::size_t> session_count{0};
  std::atomic<bool> stopping{false};
  std::atomic<std::uint16_t> bound_port{0};

  void do_accept();
  void broadcast(std::vector<Outgoing> msgs);
  void close_all();
  void remove(const std::shared_ptr<WsSession>& s) {
    sessions.erase(s);
    session_count = sessions.size();
  }
};

// ---------------------------------------------------------------------------
// WebSocket session

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket socket, std::shared_ptr<Server::Impl> server)
      : ws_(std::move(socket)), server_(std::move(server)) {}

  void run(http::request<http::string_body> req) {
    auto timeouts = websocket::stream_base::timeout::suggested(beast::role_type::server);
    timeouts.handshake_timeout = std::chrono::seconds(2);
    ws_.set_option(timeouts);
    ws_.read_message_max(1 << 20);
    ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) { self->on_accept(ec); });
  }

  void enqueue(const Outgoing& m) {
    if (closing_) return;
    if (m.image_id >= 0) {
      // Latest wins: an image not yet on the wire is superseded. It is
      // removed rather than replaced so it never precedes its own meta.
      auto it = queue_.begin();
      if (writing_ && it != queue_.end()) ++it;
      while (it != queue_.end()) it = it->image_id == m.image_id ? queue_.erase(it) : std::next(it);
    }
    queue_.push_back(m);
    if (!writing_) write_next();
  }

  void close() {
    if (closing_) return;
    closing_ = true;
    if (!writing_) do_close();
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    auto& srv = *server_;
    if (srv.stopping) return;
    srv.sessions.insert(shared_from_this());
    srv.session_count = srv.sessions.size();
    if (const auto layout = srv.engine.layout()) enqueue(text_message(protocol::layout_message(*layout)));
    if (const auto frame = srv.engine.last_frame())
      for (const auto& m : frame_messages(*frame)) enqueue(m);
    do_read();
  }

  void do_read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_read(ec); });
  }

  void on_read(beast::error_code ec) {
    if (ec) {
      server_->remove(shared_from_this());
      return;
    }
    const bool was_text = ws_.got_text();
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    if (!was_text) {
      enqueue(text_message(protocol::error_message("bad_message", "binary client messages are not accepted")));
    } else {
      try {
        server_->engine.post(protocol::parse_client_message(text));
      } catch (const Error& e) {
        enqueue(text_message(protocol::error_message(e.code(), e.what())));
      }
    }
    do_read();
  }

  void write_next() {
    writing_ = true;
    const Outgoing& m = queue_.front();
    ws_.binary(m.binary);
    ws_.async_write(net::buffer(*m.data), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->on_write(ec);
    });
  }

  void on_write(beast::error_code ec) {
    queue_.pop_front();
    writing_ = false;
    if (ec) {
      queue_.clear();
      closing_ = true;
      return;
    }
    if (!queue_.empty()) {
      write_next();
    } else if (closing_) {
      do_close();
    }
  }

  void do_close() {
    queue_.clear();
    ws_.async_close(websocket::close_code::going_away, [self = shared_from_this()](beast::error_code) {
      self->server_->remove(self);
    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  std::shared_ptr<Server::Impl> server_;
  beast::flat_buffer buffer_;
  std::deque<Outgoing> queue_;
  bool writing_ = false;
  bool closing_ = false;
};

// ---------------------------------------------------------------------------
// Plain HTTP: static files or a WebSocket upgrade

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket socket, std::shared_ptr<Server::Impl> server)
      : stream_(std::move(socket)), server_(std::move(server)) {}

  void run() {
    stream_.expires_after(std::chrono::seconds(10));
    http::async_read(stream_, buffer_, req_,
                     [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_read(ec); });
  }

 private:
  void on_read(beast::error_code ec) {
    if (ec) return;
    if (websocket::is_upgrade(req_)) {
      stream_.expires_never();
      std::make_shared<WsSession>(stream_.release_socket(), server_)->run(std::move(req_));
      return;
    }
    respond();
  }

  void respond() {
    auto res = std::make_shared<http::response<http::string_body>>();
    res->version(req_.version());
    res->keep_alive(false);
    res->set(http::field::server, "simdeck");
    std::string target(req_.target());
    if (const auto q = target.find('?'); q != std::string::npos) target.resize(q);
    if (req_.method() != http::verb::get && req_.method() != http::verb::head) {
      res->result(http::status::method_not_allowed);
    } else if (target.empty() || target[0] != '/' || target.find("..") != std::string::npos) {
      res->result(http::status::bad_request);
    } else {
      if (target.back() == '/') target += "index.html";
      serve(*res, target);
    }
    res->prepare_payload();
    if (req_.method() == http::verb::head) res->body().clear();
    http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code, std::size_t) {
      beast::error_code ignored;
      self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
    });
  }

  void serve(http::response<http::string_body>& res, const std::string& target) {
    const auto& root = server_->options.web_root;
    if (!root.empty()) {
      const auto path = root / target.substr(1);
      std::ifstream in(path, std::ios::binary);
      if (in && std::filesystem::is_regular_file(path)) {
        res.result(http::status::ok);
        res.set(http::field::content_type, mime_type(path));
        res.body().assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
        return;
      }
    }
    if (target == "/index.html") {
      res.result(http::status::ok);
      res.set(http::field::content_type, "text/html; charset=utf-8");
      res.body() = std::string(kPlaceholderPage);
      return;
    }
    res.result(http::status::not_found);
    res.set(http::field::content_type, "text/plain");
    res.body() = "not found\n";
  }

  beast::tcp_stream stream_;
  std::shared_ptr<Server::Impl> server_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
};

// ---------------------------------------------------------------------------
// Server

void Server::Impl::do_accept() {
  acceptor.async_accept(net::make_strand(ioc), [self = shared_from_this()](beast::error_code ec, tcp::socket s) {
    if (ec) return;  // acceptor closed
    std::make_shared<HttpSession>(std::move(s), self)->run();
    self->do_accept();
  });
}

void Server::Impl::broadcast(std::vector<Outgoing> msgs) {
  net::post(ioc, [self = shared_from_this(), msgs = std::move(msgs)] {
    for (const auto& s : self->sessions)
      for (const auto& m : msgs) s->enqueue(m);
  });
}

void Server::Impl::close_all() {
  net::post(ioc, [self = shared_from_this()] {
    for (const auto& s : self->sessions) s->close();
  });
}

Server::Server(Engine& engine, ServerOptions options) : impl_(std::make_shared<Impl>(engine, std::move(options))) {}

Server::~Server() { stop(); }

void Server::start() {
  if (impl_->thread.joinable()) return;
  auto& a = impl_->acceptor;
  beast::error_code ec;
  const auto address = net::ip::make_address(impl_->options.address, ec);
  if (ec) throw Error("listen failed", "bad address " + impl_->options.address);
  const tcp::endpoint ep(address, impl_->options.port);
  a.open(ep.protocol(), ec);
  if (!ec) a.set_option(net::socket_base::reuse_address(true), ec);
  if (!ec) a.bind(ep, ec);
  if (ec == net::error::address_in_use) {
    a.close();
    throw Error("port in use", std::to_string(impl_->options.port));
  }
  if (!ec) a.listen(net::socket_base::max_listen_connections, ec);
  if (ec) {
    a.close();
    throw Error("listen failed", ec.message());
  }

  impl_->bound_port = a.local_endpoint().port();

  std::weak_ptr<Impl> weak = impl_;
  impl_->listener_id = impl_->engine.subscribe([weak](const EngineEvent& e) {
    const auto impl = weak.lock();
    if (!impl || impl->stopping) return;
    switch (e.kind) {
      case EngineEvent::Kind::Frame:
        impl->broadcast(frame_messages(*e.frame));
        break;
      case EngineEvent::Kind::Layout:
        impl->broadcast({text_message(protocol::layout_message(*e.layout))});
        break;
      case EngineEvent::Kind::Report:
        impl->broadcast({text_message(protocol::report_message(e.report))});
        break;
      case EngineEvent::Kind::Error:
        impl->broadcast({text_message(protocol::error_message(e.code, e.detail))});
        break;
      case EngineEvent::Kind::Quit:
        impl->close_all();
        break;
    }
  });
  impl_->do_accept();
  impl_->thread = std::thread([impl = impl_] { impl->ioc.run(); });
}

void Server::stop() {
  auto& impl = *impl_;
  if (!impl.thread.joinable()) return;
  impl.engine.unsubscribe(impl.listener_id);
  impl.stopping = true;
  net::post(impl.ioc, [&impl] {
    beast::error_code ignored;
    impl.acceptor.close(ignored);
  });
  impl.close_all();
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(2);
  while (impl.session_count > 0 && std::chrono::steady_clock::now() < deadline)
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  impl.ioc.stop();
  impl.thread.join();
  impl.sessions.clear();
}

std::uint16_t Server::port() const { return impl_->bound_port; }

std::size_t Server::session_count() const { return impl_->session_count; }

}  // namespace simdeck
