#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "planetgen/config.hpp"
#include "planetgen/errors.hpp"

namespace planetgen {

class PortInUseError : public IoError {
 public:
  using IoError::IoError;
};

/// WebSocket front end for the Service: one connection, one session.
class TileServer {
 public:
  using Logger = std::function<void(const std::string&)>;

  /// Binds immediately. Port 0 picks a free port. Throws PortInUseError when
  /// the address cannot be bound.
  TileServer(PlanetConfig default_config, std::uint16_t port, std::string address = "127.0.0.1",
             Logger log = {});
  ~TileServer();
  TileServer(const TileServer&) = delete;
  TileServer& operator=(const TileServer&) = delete;

  std::uint16_t port() const;

  /// Serves until stop(); returns after every connection has closed.
  void run();
  /// Safe to call from any thread or from a signal-handling context that
  /// posts to it.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace planetgen
