#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <string>
#include <vector>

#include "planetgen/config.hpp"
#include "planetgen/errors.hpp"
#include "planetgen/mesh.hpp"
#include "planetgen/noise.hpp"
#include "planetgen/planet.hpp"
#include "planetgen/quadsphere.hpp"
#include "planetgen/scene.hpp"
#include "planetgen/session.hpp"
#include "planetgen/spline.hpp"
#include "planetgen/terrain.hpp"
#include "planetgen/tile_codec.hpp"

namespace py = pybind11;
using namespace planetgen;

namespace {

using Triple = std::array<double, 3>;

Vec3 vec(const Triple& t) { return {t[0], t[1], t[2]}; }
Triple triple(const Vec3& v) { return {v.x, v.y, v.z}; }

// Configs cross the boundary as JSON text or as a dict with the file schema.
PlanetConfig config_from(const py::object& o) {
  if (o.is_none()) return default_layered_config();
  if (py::isinstance<py::str>(o)) return parse_config(o.cast<std::string>());
  const std::string text = py::module_::import("json").attr("dumps")(o).cast<std::string>();
  return parse_config(text);
}

py::object json_to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::dict delta_to_py(const Delta& d) {
  py::dict out;
  out["control"] = json_to_py(d.control_frame());
  py::list tiles;
  for (const TilePayload& t : d.tiles)
    tiles.append(py::bytes(reinterpret_cast<const char*>(t.bytes.data()), t.bytes.size()));
  out["tiles"] = tiles;
  return out;
}

py::dict check_to_py(const CheckResult& r) {
  py::dict d;
  d["name"] = r.name;
  d["passed"] = r.passed;
  d["probes"] = r.probes;
  d["violations"] = r.violations;
  d["first_violation"] = r.first_violation;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Procedural planet engine";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);
  py::register_exception<TileDecodeError>(m, "TileDecodeError", PyExc_ValueError);

  py::enum_<Biome>(m, "Biome")
      .value("ocean", Biome::ocean)
      .value("beach", Biome::beach)
      .value("grassland", Biome::grassland)
      .value("forest", Biome::forest)
      .value("mountain", Biome::mountain)
      .value("lava", Biome::lava);

  py::enum_<Interpolation>(m, "Interpolation")
      .value("linear", Interpolation::linear)
      .value("monotone_cubic", Interpolation::monotone_cubic);

  py::class_<FbmParams>(m, "FbmParams")
      .def(py::init<>())
      .def(py::init([](int octaves, double persistence, double lacunarity, double exponentiation,
                       double base_frequency) {
             FbmParams p{octaves, persistence, lacunarity, exponentiation, base_frequency};
             validate(p);
             return p;
           }),
           py::arg("octaves") = 6, py::arg("persistence") = 0.5, py::arg("lacunarity") = 2.0,
           py::arg("exponentiation") = 1.0, py::arg("base_frequency") = 1.0)
      .def_readwrite("octaves", &FbmParams::octaves)
      .def_readwrite("persistence", &FbmParams::persistence)
      .def_readwrite("lacunarity", &FbmParams::lacunarity)
      .def_readwrite("exponentiation", &FbmParams::exponentiation)
      .def_readwrite("base_frequency", &FbmParams::base_frequency);

  m.def("perlin3", [](const Triple& p, std::uint64_t seed) { return perlin3(vec(p), NoiseSeed{seed}); },
        py::arg("p"), py::arg("seed"));
  m.def("fbm",
        [](const Triple& p, const FbmParams& params, std::uint64_t seed) {
          return fbm(vec(p), params, NoiseSeed{seed});
        },
        py::arg("p"), py::arg("params"), py::arg("seed"));

  py::class_<ControlPoint>(m, "ControlPoint")
      .def(py::init<double, double>(), py::arg("input"), py::arg("output"))
      .def_readwrite("input", &ControlPoint::input)
      .def_readwrite("output", &ControlPoint::output);

  py::class_<SplineCurve>(m, "SplineCurve")
      .def(py::init([](const std::vector<std::pair<double, double>>& pts, Interpolation mode) {
             std::vector<ControlPoint> cps;
             for (auto [i, o] : pts) cps.push_back({i, o});
             SplineCurve c(std::move(cps), mode);
             if (auto problem = validate(c)) throw ConfigError(*problem);
             return c;
           }),
           py::arg("points"), py::arg("mode") = Interpolation::linear)
      .def("__call__", [](const SplineCurve& c, double t) { return evaluate(c, t); })
      .def_property_readonly("mode", &SplineCurve::mode);

  py::class_<NodeId>(m, "NodeId")
      .def(py::init([](int face, int depth, std::uint32_t x, std::uint32_t y) {
             NodeId n{static_cast<std::uint8_t>(face), static_cast<std::uint8_t>(depth), x, y};
             require_valid(n);
             return n;
           }),
           py::arg("face"), py::arg("depth"), py::arg("x"), py::arg("y"))
      .def_static("parse", &parse_node_id)
      .def_property_readonly("face", [](const NodeId& n) { return int{n.face}; })
      .def_property_readonly("depth", [](const NodeId& n) { return int{n.depth}; })
      .def_property_readonly("x", [](const NodeId& n) { return n.x; })
      .def_property_readonly("y", [](const NodeId& n) { return n.y; })
      .def("children", &NodeId::children)
      .def("parent", &NodeId::parent)
      .def("__eq__", [](const NodeId& a, const NodeId& b) { return a == b; })
      .def("__lt__", [](const NodeId& a, const NodeId& b) { return a < b; })
      .def("__hash__", [](const NodeId& n) { return n.key(); })
      .def("__str__", [](const NodeId& n) { return to_string(n); })
      .def("__repr__", [](const NodeId& n) { return "NodeId('" + to_string(n) + "')"; });

  m.def("neighbor",
        [](const NodeId& n, const std::string& edge) {
          static const std::map<std::string, Edge> edges{
              {"north", Edge::north}, {"east", Edge::east}, {"south", Edge::south}, {"west", Edge::west}};
          auto it = edges.find(edge);
          if (it == edges.end()) throw DomainError("edge must be north, east, south or west");
          return neighbor(n, it->second);
        },
        py::arg("node"), py::arg("edge"));

  py::class_<Terrain>(m, "Terrain")
      .def(py::init([](const py::object& config) { return make_terrain(config_from(config)); }),
           py::arg("config") = py::none())
      .def("sample",
           [](const Terrain& t, const Triple& dir) {
             const SurfaceSample s = t.sample(vec(dir));
             py::dict d;
             d["displacement"] = s.displacement;
             d["biome"] = s.biome;
             if (s.layers) {
               d["continentalness"] = s.layers->continentalness;
               d["erosion"] = s.layers->erosion;
               d["peaks_valleys"] = s.layers->peaks_valleys;
               d["temperature"] = s.layers->temperature;
             }
             return d;
           },
           py::arg("direction"))
      .def_property_readonly("ocean_level", &Terrain::min_displacement)
      .def_property_readonly("max_displacement", &Terrain::max_displacement);

  py::class_<TileMesh>(m, "TileMesh")
      .def_readonly("node", &TileMesh::node)
      .def_readonly("resolution", &TileMesh::resolution)
      .def_property_readonly("center", [](const TileMesh& t) { return triple(t.center); })
      .def_property_readonly("vertex_count", &TileMesh::vertex_count)
      .def_property_readonly("triangle_count", [](const TileMesh& t) { return t.indices.size() / 3; })
      .def_property_readonly("biomes", [](const TileMesh& t) { return t.biomes; })
      .def_property_readonly("indices", [](const TileMesh& t) { return t.indices; })
      .def("absolute_positions",
           [](const TileMesh& t) {
             std::vector<Triple> out;
             for (std::size_t i = 0; i < t.vertex_count(); ++i) out.push_back(triple(t.absolute_position(i)));
             return out;
           })
      .def("normals",
           [](const TileMesh& t) {
             std::vector<Triple> out;
             for (const Vec3f& n : t.normals) out.push_back({n.x, n.y, n.z});
             return out;
           })
      .def("__eq__", [](const TileMesh& a, const TileMesh& b) { return a == b; });

  m.def("build_tile",
        [](const NodeId& node, int mask, const py::object& config) {
          const PlanetConfig c = config_from(config);
          if (mask < 0 || mask > 0xf) throw ConfigError("stitch mask has bits outside N/E/S/W");
          return build_tile(node, static_cast<StitchMask>(mask), make_terrain(c), c.resolution,
                            c.base_radius);
        },
        py::arg("node"), py::arg("mask") = 0, py::arg("config") = py::none());
  m.def("encode_tile", [](const TileMesh& t) {
    const auto bytes = encode_tile(t);
    return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  });
  m.def("decode_tile", [](const py::bytes& b) {
    const std::string s = b;
    return decode_tile({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
  });
  m.def("export_obj", [](const std::vector<TileMesh>& tiles, const std::string& path) {
    export_obj(tiles, path);
  });

  m.def("default_config",
        [](const std::string& generator) {
          if (generator == "simple") return json_to_py(to_json(default_simple_config()));
          if (generator == "layered") return json_to_py(to_json(default_layered_config()));
          throw ConfigError("unknown generator \"" + generator + "\"");
        },
        py::arg("generator") = "layered");
  m.def("validate_config", [](const py::object& config) { return json_to_py(to_json(config_from(config))); },
        "Parses, validates and returns the normalized config.");

  m.def("generate_planet",
        [](const py::object& config, int depth) {
          const GeneratedPlanet p = generate_planet(config_from(config), depth);
          py::dict d;
          d["tiles"] = p.tiles;
          d["vertices"] = p.summary.vertices;
          d["triangles"] = p.summary.triangles;
          py::dict hist;
          for (int b = 0; b < kBiomeCount; ++b)
            hist[py::str(std::string(biome_name(static_cast<Biome>(b))))] = p.summary.biome_histogram[b];
          d["biomes"] = hist;
          return d;
        },
        py::arg("config") = py::none(), py::arg("depth") = 0);
  m.def("verify_planet",
        [](const py::object& config, std::size_t samples, std::uint64_t probe_seed) {
          std::vector<CheckResult> results;
          const PlanetConfig c = config_from(config);
          {
            py::gil_scoped_release release;
            results = verify_planet(c, samples, probe_seed);
          }
          py::list out;
          for (const CheckResult& r : results) out.append(check_to_py(r));
          return out;
        },
        py::arg("config") = py::none(), py::arg("samples") = 1000, py::arg("probe_seed") = 1);

  m.def("ephemeris_at",
        [](double time, const py::object& config) {
          const Ephemeris e = ephemeris_at(time, config_from(config).orbit);
          py::dict d;
          d["time"] = e.time;
          d["sun_direction"] = triple(e.sun_direction);
          d["sun_position"] = triple(e.sun_position);
          d["moon_position"] = triple(e.moon_position);
          d["moon_phase"] = e.moon_phase;
          return d;
        },
        py::arg("time"), py::arg("config") = py::none());

  py::class_<Session>(m, "Session")
      .def(py::init([](const py::object& config) {
             PlanetConfig c = config_from(config);
             validate(c);
             return std::make_unique<Session>(std::move(c));
           }),
           py::arg("config") = py::none())
      .def("initial_delta", [](Session& s) { return delta_to_py(s.initial_delta()); })
      .def("on_camera",
           [](Session& s, const Triple& pos, const Triple& look) {
             return delta_to_py(s.on_camera(CameraState{vec(pos), vec(look)}));
           },
           py::arg("position"), py::arg("look") = Triple{0.0, 0.0, -1.0})
      .def("leaves",
           [](const Session& s) {
             std::vector<std::string> out;
             for (const NodeId& n : s.tree().leaves()) out.push_back(to_string(n));
             return out;
           })
      .def("stats", [](const Session& s) { return json_to_py(to_json(s.stats())); });
}
