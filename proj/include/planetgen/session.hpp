#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "planetgen/config.hpp"
#include "planetgen/mesh.hpp"
#include "planetgen/quadtree.hpp"
#include "planetgen/scene.hpp"

namespace planetgen {

/// A scene instance as streamed to the viewer. Trees carry the tile they
/// belong to so the client can drop them with the tile; clouds do not.
struct SceneRecord {
  std::optional<NodeId> tile;
  SceneInstance instance;
};

nlohmann::json to_json(const SceneRecord& record);

struct TilePayload {
  NodeId node;
  StitchMask mask = 0;
  std::vector<std::uint8_t> bytes;  // "PTIL" encoding
};

/// One atomic update for the client: a JSON control frame followed by one
/// binary frame per tile payload.
struct Delta {
  std::vector<NodeId> removed;
  std::map<NodeId, StitchMask> masks;  // added tiles and survivors whose mask changed
  std::vector<SceneRecord> scene;
  std::vector<TilePayload> tiles;

  bool empty() const { return removed.empty() && masks.empty() && scene.empty() && tiles.empty(); }
  nlohmann::json control_frame() const;
};

struct SessionStats {
  std::size_t leaves = 0;
  int max_depth = 0;
  std::size_t vertices_resident = 0;
  double last_update_ms = 0.0;
  std::uint64_t total_added = 0;
  std::uint64_t total_removed = 0;
  std::uint64_t payloads_sent = 0;
};

nlohmann::json to_json(const SessionStats& stats);

/// One planet plus the quadtree and the mirror of what the client holds.
/// Not thread-safe; the Service serializes calls per session.
class Session {
 public:
  explicit Session(PlanetConfig config);

  /// Six root tiles and the cloud spawners. Only valid as the first call.
  Delta initial_delta();

  /// Runs the LOD update and returns what changed. Tile payloads are built
  /// for added leaves and for surviving leaves whose stitch mask changed.
  Delta on_camera(const CameraState& camera);

  SessionStats stats() const;
  const QuadTree& tree() const { return tree_; }
  const PlanetConfig& config() const { return config_; }

 private:
  TilePayload make_payload(const NodeId& node, StitchMask mask) const;
  void append_trees(const NodeId& node, Delta& delta) const;

  PlanetConfig config_;
  Terrain terrain_;
  LodParams lod_;
  QuadTree tree_;
  std::map<NodeId, StitchMask> client_;
  bool opened_ = false;
  SessionStats stats_;
};

class UnknownSessionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Owns all sessions. Sessions are independent; calls on one session are
/// serialized, calls on different sessions may run concurrently.
class Service {
 public:
  struct Opened {
    std::string id;
    Delta delta;
  };

  /// Throws ConfigError for an invalid config.
  Opened open_session(const PlanetConfig& config);
  Delta on_camera(const std::string& id, const CameraState& camera);
  SessionStats session_stats(const std::string& id);
  void close_session(const std::string& id);
  std::size_t session_count() const;

 private:
  struct Entry {
    std::mutex mutex;
    std::unique_ptr<Session> session;
  };
  std::shared_ptr<Entry> find(const std::string& id) const;

  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t next_id_ = 1;
};

struct Frame {
  bool binary = false;
  std::string text;
  std::vector<std::uint8_t> bytes;

  static Frame json(const nlohmann::json& j) { return Frame{false, j.dump(), {}}; }
  static Frame data(std::vector<std::uint8_t> b) { return Frame{true, {}, std::move(b)}; }
};

/// Error frame: {"type":"error","code":code,"message":...}
Frame error_frame(int code, const std::string& message);

/// Per-connection protocol state. Client frames:
///   {"type":"open","config":{...}}      config optional, defaults to the server's
///   {"type":"camera","pos":[x,y,z],"look":[x,y,z]}
///   {"type":"stats"}
///   {"type":"ephemeris","time":t}
/// Replies are a delta control frame plus binary tiles, a stats/ephemeris
/// frame, or an error frame (400 malformed, 404 no open session). Errors
/// never close the session.
class ProtocolHandler {
 public:
  ProtocolHandler(Service& service, PlanetConfig default_config);
  ~ProtocolHandler();
  ProtocolHandler(const ProtocolHandler&) = delete;
  ProtocolHandler& operator=(const ProtocolHandler&) = delete;

  std::vector<Frame> handle_text(std::string_view text);
  std::vector<Frame> handle_binary(std::span<const std::uint8_t> bytes);

  const std::optional<std::string>& session_id() const { return session_; }

 private:
  std::vector<Frame> delta_frames(const Delta& delta, const std::optional<std::string>& id) const;

  Service& service_;
  PlanetConfig default_config_;
  OrbitConfig orbit_;
  std::optional<std::string> session_;
};

}  // namespace planetgen
