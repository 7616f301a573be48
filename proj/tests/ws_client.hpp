#pragma once

#include <chrono>
#include <optional>
#include <string>

#include <boost/asio.hpp>
#include <boost/beast.hpp>
#include <nlohmann/json.hpp>

// Minimal scripted WebSocket/HTTP client for tests.
namespace testsupport {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;

struct WsMessage {
  bool binary = false;
  std::string data;
  nlohmann::json json() const { return nlohmann::json::parse(data); }
  std::string type() const { return binary ? std::string("image_frame") : json().value("type", ""); }
};

class WsClient {
 public:
  explicit WsClient(std::uint16_t port) : ws_(ioc_) {
    net::ip::tcp::resolver resolver(ioc_);
    beast::get_lowest_layer(ws_).connect(*resolver.resolve("127.0.0.1", std::to_string(port)).begin());
    ws_.handshake("127.0.0.1", "/ws");
  }

  void send(const nlohmann::json& j) { send_text(j.dump()); }
  void send_text(const std::string& s) {
    ws_.text(true);
    ws_.write(net::buffer(s));
  }
  void send_binary(const std::string& s) {
    ws_.binary(true);
    ws_.write(net::buffer(s));
  }

  /// Next message, or nullopt when nothing arrives in time. After a
  /// timeout the client must not be used again.
  std::optional<WsMessage> read(std::chrono::milliseconds timeout = std::chrono::seconds(5)) {
    beast::flat_buffer buf;
    bool done = false;
    beast::error_code ec;
    ws_.async_read(buf, [&](beast::error_code e, std::size_t) { done = true, ec = e; });
    ioc_.restart();
    ioc_.run_for(timeout);
    if (!done || ec) return std::nullopt;
    return WsMessage{ws_.got_binary(), beast::buffers_to_string(buf.data())};
  }

  /// Reads until a text message of the given type arrives; every message on
  /// the way is passed to `seen` when provided.
  template <class Seen>
  std::optional<WsMessage> read_until(const std::string& type, Seen&& seen,
                                      std::chrono::milliseconds timeout = std::chrono::seconds(5)) {
    const auto until = std::chrono::steady_clock::now() + timeout;
    while (std::chrono::steady_clock::now() < until) {
      auto m = read(std::chrono::duration_cast<std::chrono::milliseconds>(until - std::chrono::steady_clock::now()));
      if (!m) return std::nullopt;
      seen(*m);
      if (!m->binary && m->type() == type) return m;
    }
    return std::nullopt;
  }
  std::optional<WsMessage> read_until(const std::string& type,
                                      std::chrono::milliseconds timeout = std::chrono::seconds(5)) {
    return read_until(type, [](const WsMessage&) {}, timeout);
  }

  void close() {
    beast::error_code ec;
    ws_.close(websocket::close_code::normal, ec);
  }

 private:
  net::io_context ioc_;
  websocket::stream<beast::tcp_stream> ws_;
};

inline http::response<http::string_body> http_get(std::uint16_t port, const std::string& target) {
  net::io_context ioc;
  beast::tcp_stream stream(ioc);
  net::ip::tcp::resolver resolver(ioc);
  stream.connect(*resolver.resolve("127.0.0.1", std::to_string(port)).begin());
  http::request<http::empty_body> req(http::verb::get, target, 11);
  req.set(http::field::host, "127.0.0.1");
  http::write(stream, req);
  beast::flat_buffer buf;
  http::response<http::string_body> res;
  http::read(stream, buf, res);
  return res;
}

}  // namespace testsupport
