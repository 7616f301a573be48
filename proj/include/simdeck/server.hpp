#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "simdeck/engine.hpp"
#include "simdeck/protocol.hpp"

namespace simdeck {

struct ServerOptions {
  std::string address = "127.0.0.1";
  std::uint16_t port = protocol::kDefaultPort;  ///< 0 picks a free port
  /// Static files for plain HTTP requests. Empty or missing: a built-in
  /// placeholder page is served at "/".
  std::filesystem::path web_root;
};

/// HTTP + WebSocket front end for one engine. Every client gets the layout
/// on connect, then the shared stream of frames, layouts, reports and
/// errors. Client messages are posted to the engine in arrival order.
class Server {
 public:
  Server(Engine& engine, ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and starts serving on a background thread.
  /// Errors: "port in use", "listen failed".
  void start();
  /// Closes every connection and joins the server thread.
  void stop();

  std::uint16_t port() const;
  std::size_t session_count() const;

  struct Impl;

 private:
  std::shared_ptr<Impl> impl_;
};

}  // namespace simdeck
