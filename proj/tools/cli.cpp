#include "cli.hpp"

#include <pthread.h>
#include <signal.h>

#include <chrono>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "planetgen/config.hpp"
#include "planetgen/errors.hpp"
#include "planetgen/mesh.hpp"
#include "planetgen/planet.hpp"
#include "planetgen/server.hpp"

namespace planetgen::cli {
namespace {

struct PlanetOptions {
  std::string config_path;
  std::string generator = "layered";
  std::optional<std::uint64_t> seed;
};

void add_planet_options(CLI::App* cmd, PlanetOptions& o) {
  cmd->add_option("--config", o.config_path, "Planet configuration (JSON)");
  cmd->add_option("--generator", o.generator, "Built-in config when --config is absent")
      ->check(CLI::IsMember({"simple", "layered"}));
  cmd->add_option("--seed", o.seed, "Override the configured seed");
}

PlanetConfig resolve(const PlanetOptions& o) {
  PlanetConfig c;
  if (!o.config_path.empty()) c = load_config(o.config_path);
  else c = o.generator == "simple" ? default_simple_config() : default_layered_config();
  if (o.seed) c.seed = NoiseSeed{*o.seed};
  validate(c);
  return c;
}

int cmd_generate(const PlanetOptions& o, const std::string& path, int depth, std::ostream& out) {
  const PlanetConfig config = resolve(o);
  const auto start = std::chrono::steady_clock::now();
  const GeneratedPlanet planet = generate_planet(config, depth);
  export_obj(planet.tiles, path);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out << "wrote " << path << "\n" << planet.summary.text() << "elapsed_s: " << seconds << "\n";
  return kOk;
}

int cmd_verify(const PlanetOptions& o, std::size_t samples, std::ostream& out) {
  const PlanetConfig config = resolve(o);
  bool ok = true;
  for (const CheckResult& r : verify_planet(config, samples)) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " probes=" << r.probes
        << " violations=" << r.violations;
    if (!r.passed) out << " first: " << r.first_violation;
    out << "\n";
    ok = ok && r.passed;
  }
  out << (ok ? "all invariants hold\n" : "invariant violations found\n");
  return ok ? kOk : kFailure;
}

int cmd_serve(const PlanetOptions& o, std::uint16_t port, const std::string& host, std::ostream& out) {
  const PlanetConfig config = resolve(o);

  // Signals are taken synchronously by a watcher thread; every other thread
  // inherits the blocked mask.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  sigaddset(&set, SIGUSR1);
  sigset_t previous;
  pthread_sigmask(SIG_BLOCK, &set, &previous);

  std::mutex log_mutex;
  auto log = [&](const std::string& line) {
    std::lock_guard lock(log_mutex);
    out << line << std::endl;
  };

  int code = kOk;
  try {
    TileServer server(config, port, host, log);
    std::thread watcher([&] {
      int sig = 0;
      sigwait(&set, &sig);
      if (sig != SIGUSR1) log("signal " + std::to_string(sig) + ", shutting down");
      server.stop();
    });
    server.run();
    pthread_kill(watcher.native_handle(), SIGUSR1);
    watcher.join();
  } catch (...) {
    pthread_sigmask(SIG_SETMASK, &previous, nullptr);
    throw;
  }
  // Drop a wake-up signal that raced with a real one.
  timespec zero{0, 0};
  while (sigtimedwait(&set, nullptr, &zero) > 0) {
  }
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Procedural planet generator", "planetgen"};
  app.require_subcommand(1);

  PlanetOptions gen_opts;
  std::string out_path;
  int depth = 0;
  auto* generate = app.add_subcommand("generate", "Export a uniform-depth planet as OBJ");
  add_planet_options(generate, gen_opts);
  generate->add_option("--out", out_path, "Output OBJ path")->required();
  generate->add_option("--depth", depth, "Uniform quadtree depth")->check(CLI::Range(0, 12));

  PlanetOptions verify_opts;
  std::size_t samples = 10000;
  auto* verify = app.add_subcommand("verify", "Run the randomized invariant sweep");
  add_planet_options(verify, verify_opts);
  verify->add_option("--samples", samples, "Number of random probes")->check(CLI::PositiveNumber);

  PlanetOptions serve_opts;
  std::uint16_t port = 8765;
  std::string host = "127.0.0.1";
  auto* serve = app.add_subcommand("serve", "Serve tiles over WebSocket");
  add_planet_options(serve, serve_opts);
  serve->add_option("--port", port, "TCP port (0 picks a free one)");
  serve->add_option("--host", host, "Listen address");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kConfig;
  }

  try {
    if (*generate) return cmd_generate(gen_opts, out_path, depth, out);
    if (*verify) return cmd_verify(verify_opts, samples, out);
    if (*serve) return cmd_serve(serve_opts, port, host, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const PortInUseError& e) {
    err << "port error: " << e.what() << "\n";
    return kPort;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace planetgen::cli
