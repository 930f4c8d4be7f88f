// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "duplexforge/random.hpp"
#include "duplexforge_cli/cli.hpp"

#ifndef DUPLEXFORGE_VERSION
#define DUPLEXFORGE_VERSION "0.0.0"
#endif

namespace duplexforge::cli {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read scenario file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t threads_from_env() {
  const char* env = std::getenv("DUPLEXFORGE_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const unsigned long v = std::strtoul(env, &end, 10);
  if (*end != '\0' || v == 0) throw ConfigError("DUPLEXFORGE_THREADS must be a positive integer");
  return v;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Manifest keys are emitted in sorted order, so the file is stable except for wall_clock_seconds.
void write_manifest(const RunOptions& opt, const std::string& command, const Scenario& s,
                    const CommandOutput& output, double seconds) {
  nlohmann::json j;
  j["command"] = command;
  j["scenario_hash"] = hex64(fnv1a64(serialize_scenario(s)));
  j["master_seed"] = s.master_seed ? nlohmann::json(*s.master_seed) : nlohmann::json(nullptr);
  j["version"] = DUPLEXFORGE_VERSION;
  j["wall_clock_seconds"] = seconds;
  j["outputs"] = output.files;
  std::ofstream out(opt.out_dir / "run_manifest.json", std::ios::binary);
  if (!out) throw ConfigError("cannot write run_manifest.json");
  out << j.dump(2) << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Full-duplex mmWave link, cancellation, codebook and beam-selection experiments",
               "duplexforge"};
  app.set_version_flag("--version", DUPLEXFORGE_VERSION);
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> threads;

  using Command = std::function<CommandOutput(const Scenario&, const RunOptions&)>;
  const std::vector<std::tuple<std::string, std::string, Command>> commands{
      {"rate-region", "TDD, FDD and full-duplex rate-region boundaries", cmd_rate_region},
      {"sic-fit", "Least-squares analog SIC tap weights on a synthetic SI channel", cmd_sic_fit},
      {"codebook", "SI-aware transmit/receive codebook design", cmd_codebook},
      {"steer", "Neighborhood beam selection trials or a single run over an INR map", cmd_steer},
  };
  std::map<CLI::App*, std::pair<std::string, Command>> by_app;
  for (const auto& [name, help, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--scenario", scenario_path, "Scenario file")->required();
    sub->add_option("--out", out_dir, "Output directory (created if missing)")->required();
    sub->add_option("--seed", seed, "Master seed override");
    sub->add_option("--trials", trials, "Number of Monte-Carlo trials (steer)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--threads", threads, "Worker threads (default: $DUPLEXFORGE_THREADS or 1)")
        ->check(CLI::PositiveNumber);
    by_app.emplace(sub, std::pair{name, fn});
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const auto& [name, fn] = by_app.at(app.get_subcommands().front());
  try {
    const auto start = std::chrono::steady_clock::now();
    const std::filesystem::path path(scenario_path);
    const Scenario s = load_scenario(read_file(path), seed);

    RunOptions opt;
    opt.out_dir = out_dir;
    opt.scenario_dir = path.parent_path();
    opt.threads = threads ? *threads : threads_from_env();
    opt.trials = trials;
    std::error_code ec;
    std::filesystem::create_directories(opt.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + out_dir + ": " + ec.message());

    const CommandOutput output = fn(s, opt);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(opt, name, s, output, seconds);
    out << output.summary;
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "duplexforge " << name << ": configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const GeometryError& e) {
    err << "duplexforge " << name << ": configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "duplexforge " << name << ": numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace duplexforge::cli
