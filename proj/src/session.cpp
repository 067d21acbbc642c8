#include "planetgen/session.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "planetgen/errors.hpp"
#include "planetgen/tile_codec.hpp"

namespace planetgen {
namespace {

using nlohmann::json;

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 parse_vec(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw DomainError(std::string(what) + " must be [x, y, z]");
  Vec3 v;
  double* out[3] = {&v.x, &v.y, &v.z};
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number()) throw DomainError(std::string(what) + " components must be numbers");
    *out[i] = j[i].get<double>();
  }
  if (!is_finite(v)) throw DomainError(std::string(what) + " must be finite");
  return v;
}

/// Builds every payload; independent tiles are spread over hardware threads.
template <typename Build>
std::vector<TilePayload> build_all(const std::vector<std::pair<NodeId, StitchMask>>& jobs, const Build& build) {
  std::vector<TilePayload> out(jobs.size());
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), jobs.size() / 2);
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) out[i] = build(jobs[i].first, jobs[i].second);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        out[i] = build(jobs[i].first, jobs[i].second);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace

json to_json(const SceneRecord& r) {
  json j{{"kind", std::string(kind_name(r.instance.kind))},
         {"anchor", vec_json(r.instance.anchor)},
         {"rotation", r.instance.rotation},
         {"scale", r.instance.scale},
         {"embed_depth", r.instance.embed_depth}};
  if (r.tile) j["tile"] = to_string(*r.tile);
  return j;
}

json Delta::control_frame() const {
  json removed_json = json::array();
  for (const NodeId& n : removed) removed_json.push_back(to_string(n));
  json masks_json = json::object();
  for (const auto& [n, m] : masks) masks_json[to_string(n)] = m;
  json scene_json = json::array();
  for (const SceneRecord& r : scene) scene_json.push_back(to_json(r));
  return {{"type", "delta"},
          {"removed", removed_json},
          {"masks", masks_json},
          {"scene", scene_json},
          {"tiles", tiles.size()}};
}

json to_json(const SessionStats& s) {
  return {{"type", "stats"},
          {"leaves", s.leaves},
          {"max_depth", s.max_depth},
          {"vertices_resident", s.vertices_resident},
          {"last_update_ms", s.last_update_ms},
          {"total_added", s.total_added},
          {"total_removed", s.total_removed},
          {"payloads_sent", s.payloads_sent}};
}

Session::Session(PlanetConfig config)
    : config_((validate(config), std::move(config))),
      terrain_(make_terrain(config_)),
      lod_(lod_params(config_)) {}

TilePayload Session::make_payload(const NodeId& node, StitchMask mask) const {
  const TileMesh tile = build_tile(node, mask, terrain_, config_.resolution, config_.base_radius);
  return TilePayload{node, mask, encode_tile(tile)};
}

void Session::append_trees(const NodeId& node, Delta& delta) const {
  for (const SceneInstance& tree : place_trees(node, terrain_, config_.base_radius, config_.seed, config_.trees))
    delta.scene.push_back(SceneRecord{node, tree});
}

Delta Session::initial_delta() {
  if (opened_) throw InvariantError("initial_delta requested twice");
  opened_ = true;
  const auto start = std::chrono::steady_clock::now();
  Delta delta;
  std::vector<std::pair<NodeId, StitchMask>> jobs;
  for (const NodeId& n : tree_.leaves()) {
    const StitchMask mask = tree_.stitch_mask(n);
    jobs.emplace_back(n, mask);
    delta.masks[n] = mask;
    client_[n] = mask;
    append_trees(n, delta);
  }
  delta.tiles = build_all(jobs, [this](const NodeId& n, StitchMask m) { return make_payload(n, m); });
  for (const SceneInstance& cloud : place_clouds(config_.seed, config_.base_radius, config_.clouds))
    delta.scene.push_back(SceneRecord{std::nullopt, cloud});
  stats_.total_added += delta.tiles.size();
  stats_.payloads_sent += delta.tiles.size();
  stats_.last_update_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return delta;
}

Delta Session::on_camera(const CameraState& camera) {
  if (!opened_) throw InvariantError("on_camera before initial_delta");
  const auto start = std::chrono::steady_clock::now();
  const LodUpdate update = update_tree(tree_, camera, lod_);

  Delta delta;
  delta.removed = update.removed;
  for (const NodeId& n : update.removed) client_.erase(n);
  std::vector<std::pair<NodeId, StitchMask>> jobs;
  for (const auto& [node, mask] : update.stitch_masks) {
    auto held = client_.find(node);
    const bool added = held == client_.end();
    if (!added && held->second == mask) continue;
    jobs.emplace_back(node, mask);
    delta.masks[node] = mask;
    client_[node] = mask;
    if (added) append_trees(node, delta);
  }
  delta.tiles = build_all(jobs, [this](const NodeId& n, StitchMask m) { return make_payload(n, m); });
  stats_.total_added += update.added.size();
  stats_.total_removed += update.removed.size();
  stats_.payloads_sent += delta.tiles.size();
  stats_.last_update_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return delta;
}

SessionStats Session::stats() const {
  SessionStats s = stats_;
  s.leaves = tree_.leaf_count();
  s.max_depth = tree_.max_leaf_depth();
  const std::size_t side = config_.resolution + 1;
  s.vertices_resident = s.leaves * side * side;
  return s;
}

Service::Opened Service::open_session(const PlanetConfig& config) {
  auto entry = std::make_shared<Entry>();
  entry->session = std::make_unique<Session>(config);
  Delta delta = entry->session->initial_delta();
  std::lock_guard lock(mutex_);
  std::string id = "s" + std::to_string(next_id_++);
  sessions_.emplace(id, std::move(entry));
  return Opened{std::move(id), std::move(delta)};
}

std::shared_ptr<Service::Entry> Service::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw UnknownSessionError("unknown session " + id);
  return it->second;
}

Delta Service::on_camera(const std::string& id, const CameraState& camera) {
  auto entry = find(id);
  std::lock_guard lock(entry->mutex);
  return entry->session->on_camera(camera);
}

SessionStats Service::session_stats(const std::string& id) {
  auto entry = find(id);
  std::lock_guard lock(entry->mutex);
  return entry->session->stats();
}

void Service::close_session(const std::string& id) {
  std::lock_guard lock(mutex_);
  sessions_.erase(id);
}

std::size_t Service::session_count() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

Frame error_frame(int code, const std::string& message) {
  return Frame::json({{"type", "error"}, {"code", code}, {"message", message}});
}

ProtocolHandler::ProtocolHandler(Service& service, PlanetConfig default_config)
    : service_(service), default_config_(std::move(default_config)), orbit_(default_config_.orbit) {}

ProtocolHandler::~ProtocolHandler() {
  if (session_) service_.close_session(*session_);
}

std::vector<Frame> ProtocolHandler::delta_frames(const Delta& delta,
                                                 const std::optional<std::string>& id) const {
  std::vector<Frame> frames;
  frames.reserve(delta.tiles.size() + 1);
  json control = delta.control_frame();
  if (id) control["session"] = *id;
  frames.push_back(Frame::json(control));
  for (const TilePayload& t : delta.tiles) frames.push_back(Frame::data(t.bytes));
  return frames;
}

std::vector<Frame> ProtocolHandler::handle_binary(std::span<const std::uint8_t>) {
  return {error_frame(400, "binary frames are not accepted from clients")};
}

std::vector<Frame> ProtocolHandler::handle_text(std::string_view text) {
  json msg;
  try {
    msg = json::parse(text);
  } catch (const json::parse_error&) {
    return {error_frame(400, "frame is not valid JSON")};
  }
  if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string())
    return {error_frame(400, "frame needs a string \"type\"")};
  const std::string type = msg["type"];

  try {
    if (type == "open") {
      PlanetConfig config = default_config_;
      if (msg.contains("config")) config = parse_config(msg["config"]);
      auto opened = service_.open_session(config);
      if (session_) service_.close_session(*session_);
      session_ = opened.id;
      orbit_ = config.orbit;
      return delta_frames(opened.delta, session_);
    }
    if (type == "camera") {
      if (!session_) return {error_frame(404, "no open session")};
      CameraState camera;
      if (!msg.contains("pos")) throw DomainError("camera frame needs \"pos\"");
      camera.position = parse_vec(msg["pos"], "pos");
      if (msg.contains("look")) camera.look_direction = parse_vec(msg["look"], "look");
      validate(camera);
      return delta_frames(service_.on_camera(*session_, camera), std::nullopt);
    }
    if (type == "stats") {
      if (!session_) return {error_frame(404, "no open session")};
      json j = to_json(service_.session_stats(*session_));
      j["session"] = *session_;
      return {Frame::json(j)};
    }
    if (type == "ephemeris") {
      if (!msg.contains("time") || !msg["time"].is_number()) throw DomainError("ephemeris frame needs numeric \"time\"");
      const Ephemeris e = ephemeris_at(msg["time"].get<double>(), orbit_);
      return {Frame::json({{"type", "ephemeris"},
                           {"time", e.time},
                           {"sun", {e.sun_direction.x, e.sun_direction.y, e.sun_direction.z}},
                           {"sun_position", {e.sun_position.x, e.sun_position.y, e.sun_position.z}},
                           {"moon", {e.moon_position.x, e.moon_position.y, e.moon_position.z}},
                           {"phase", e.moon_phase}})};
    }
    return {error_frame(400, "unknown frame type \"" + type + "\"")};
  } catch (const ConfigError& e) {
    return {error_frame(400, std::string("invalid config: ") + e.what())};
  } catch (const DomainError& e) {
    return {error_frame(400, e.what())};
  } catch (const UnknownSessionError& e) {
    session_.reset();
    return {error_frame(404, e.what())};
  }
}

}  // namespace planetgen
