#include "planetgen/server.hpp"

#include <sys/socket.h>

#include <atomic>
#include <list>
#include <mutex>
#include <optional>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "planetgen/session.hpp"

namespace planetgen {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

struct TileServer::Impl {
  struct Connection {
    std::thread thread;
    int native_handle = -1;
    std::atomic<bool> done{false};
  };

  PlanetConfig default_config;
  Logger log;
  asio::io_context ioc;
  tcp::acceptor acceptor{ioc};
  Service service;
  std::mutex mutex;
  std::list<Connection> connections;
  std::atomic<bool> stopping{false};

  void say(const std::string& line) {
    if (log) log(line);
  }

  void accept_next() {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec || stopping) return;
      start_connection(std::move(socket));
      reap();
      accept_next();
    });
  }

  void reap() {
    std::lock_guard lock(mutex);
    for (auto it = connections.begin(); it != connections.end();) {
      if (it->done) {
        it->thread.join();
        it = connections.erase(it);
      } else {
        ++it;
      }
    }
  }

  void start_connection(tcp::socket socket) {
    std::lock_guard lock(mutex);
    Connection& c = connections.emplace_back();
    c.native_handle = socket.native_handle();
    c.thread = std::thread([this, &c, s = std::move(socket)]() mutable {
      serve(std::move(s));
      c.done = true;
    });
  }

  void serve(tcp::socket socket) {
    ProtocolHandler handler(service, default_config);
    try {
      websocket::stream<tcp::socket> ws(std::move(socket));
      ws.accept();
      say("connection opened");
      for (;;) {
        beast::flat_buffer buffer;
        ws.read(buffer);
        const std::optional<std::string> before = handler.session_id();
        std::vector<Frame> replies;
        if (ws.got_text()) {
          replies = handler.handle_text(beast::buffers_to_string(buffer.data()));
        } else {
          const auto data = buffer.data();
          replies = handler.handle_binary(
              {static_cast<const std::uint8_t*>(data.data()), data.size()});
        }
        for (const Frame& f : replies) {
          ws.binary(f.binary);
          if (f.binary) ws.write(asio::buffer(f.bytes));
          else ws.write(asio::buffer(f.text));
        }
        if (handler.session_id() != before) {
          if (before) say("session " + *before + " closed");
          if (handler.session_id()) say("session " + *handler.session_id() + " opened");
        }
      }
    } catch (const std::exception& e) {
      if (handler.session_id()) say("session " + *handler.session_id() + " closed");
      say(std::string("connection closed: ") + e.what());
    }
  }
};

TileServer::TileServer(PlanetConfig default_config, std::uint16_t port, std::string address, Logger log)
    : impl_(std::make_unique<Impl>()) {
  validate(default_config);
  impl_->default_config = std::move(default_config);
  impl_->log = std::move(log);
  try {
    const tcp::endpoint endpoint(asio::ip::make_address(address), port);
    impl_->acceptor.open(endpoint.protocol());
    impl_->acceptor.set_option(asio::socket_base::reuse_address(true));
    impl_->acceptor.bind(endpoint);
    impl_->acceptor.listen();
  } catch (const boost::system::system_error& e) {
    throw PortInUseError("cannot listen on " + address + ":" + std::to_string(port) + ": " + e.what());
  }
}

TileServer::~TileServer() {
  stop();
  std::lock_guard lock(impl_->mutex);
  for (auto& c : impl_->connections)
    if (c.thread.joinable()) c.thread.join();
}

std::uint16_t TileServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void TileServer::run() {
  impl_->say("listening on port " + std::to_string(port()));
  impl_->accept_next();
  impl_->ioc.run();
  std::list<Impl::Connection> remaining;
  {
    std::lock_guard lock(impl_->mutex);
    remaining.splice(remaining.end(), impl_->connections);
  }
  for (auto& c : remaining)
    if (c.thread.joinable()) c.thread.join();
  impl_->say("stopped");
}

void TileServer::stop() {
  if (impl_->stopping.exchange(true)) return;
  asio::post(impl_->ioc, [impl = impl_.get()] {
    beast::error_code ec;
    impl->acceptor.close(ec);
    std::lock_guard lock(impl->mutex);
    // Unblocks the per-connection threads sitting in a blocking read.
    for (auto& c : impl->connections)
      if (!c.done) ::shutdown(c.native_handle, SHUT_RDWR);
    impl->ioc.stop();
  });
}

}  // namespace planetgen
