// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_harness.hpp"
#include "duplexforge/units.hpp"

using namespace duplexforge;
namespace fs = std::filesystem;
using duplexforge::testing_cli::Run;
using duplexforge::testing_cli::invoke;
using duplexforge::testing_cli::read_text;
using duplexforge::testing_cli::scratch_dir;

namespace {

const fs::path kScenarios = DUPLEXFORGE_SCENARIO_DIR;

fs::path write_scenario(const fs::path& dir, const std::string& text) {
  fs::create_directories(dir);
  const fs::path p = dir / "scenario.scn";
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

std::vector<std::string> csv_row(const std::string& text, std::size_t index) {
  std::istringstream in(text);
  std::string line;
  for (std::size_t i = 0; i <= index; ++i) std::getline(in, line);
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

}  // namespace

TEST_CASE("rate-region output") {
  const auto out = scratch_dir("rate");
  const Run r = invoke({"rate-region", "--scenario", (kScenarios / "rate_region.scn").string(),
                        "--out", out.string()});
  REQUIRE(r.code == 0);
  const std::string csv = read_text(out / "rate_region.csv");
  CHECK(csv.rfind("strategy,alpha,r_tx,r_rx,is_star\n", 0) == 0);
  CHECK(csv.find("fd@-inf/-inf,,3.45943162,3.45943162,1\n") != std::string::npos);
  // One star per strategy block.
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::map<std::string, int> stars;
  while (std::getline(in, line)) {
    const auto label = line.substr(0, line.find(','));
    stars[label] += line.back() == '1';
  }
  CHECK(stars.size() == 5);
  for (const auto& [label, n] : stars) CHECK(n == 1);
  CHECK(fs::exists(out / "run_manifest.json"));
}

TEST_CASE("sic-fit: in-span channel cancels, short filter matches the projection oracle") {
  const auto dir = scratch_dir("sic");
  const Run r = invoke({"sic-fit", "--scenario", (kScenarios / "sic_fit.scn").string(), "--out",
                        (dir / "full").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("n_taps = 4") != std::string::npos);
  const auto summary = read_text(dir / "full" / "sic_summary.txt");
  const auto pos = summary.find("cancellation_db = ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(summary.substr(pos + 18)) >= 120.0);

  // Integer delays give orthonormal tap columns, so one tap removes exactly the first
  // channel tap: cancellation = total power / power of taps 1..3, with 3 dB decay per tap.
  const auto p = write_scenario(dir, "seed = 7\nsic.enabled = true\nsic.n_taps = 1\n"
                                     "sic.channel_taps = 4\nsic.channel_decay_db = 3\n");
  const Run one = invoke({"sic-fit", "--scenario", p.string(), "--out", (dir / "one").string()});
  REQUIRE(one.code == 0);
  double total = 0.0, rest = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double pk = std::pow(10.0, -0.3 * k);
    total += pk;
    if (k > 0) rest += pk;
  }
  const auto s1 = read_text(dir / "one" / "sic_summary.txt");
  const double got = std::stod(s1.substr(s1.find("cancellation_db = ") + 18));
  CHECK(got == doctest::Approx(10.0 * std::log10(total / rest)).epsilon(1e-7));
}

TEST_CASE("codebook on a zero channel reports the floor") {
  const auto dir = scratch_dir("cb0");
  const auto p = write_scenario(dir, "arrays.tx.n_elements = 4\narrays.rx.n_elements = 4\n"
                                     "channel.si.model = zero\ncodebook.enabled = true\n"
                                     "codebook.tx.n_beams = 3\ncodebook.rx.n_beams = 3\n");
  const Run r = invoke({"codebook", "--scenario", p.string(), "--out", (dir / "o").string()});
  REQUIRE(r.code == 0);
  const auto csv = read_text(dir / "o" / "codebook_summary.csv");
  CHECK(csv_row(csv, 2)[0] == "designed");
  CHECK(csv_row(csv, 2)[1] == "-300");
  const auto f = read_text(dir / "o" / "F.csv");
  CHECK(csv_row(f, 0).size() == 3);
  CHECK(f.find(';') != std::string::npos);
  CHECK(fs::exists(dir / "o" / "W.csv"));
  CHECK(fs::exists(dir / "o" / "objective_trace.csv"));
  CHECK(read_text(dir / "o" / "run_manifest.json").find("\"codebook\"") != std::string::npos);
}

TEST_CASE("steer trials and map mode") {
  const auto dir = scratch_dir("steer");
  const Run r = invoke({"steer", "--scenario", (kScenarios / "steer.scn").string(), "--out",
                        (dir / "t").string(), "--trials", "20", "--threads", "3"});
  REQUIRE(r.code == 0);
  const auto csv = read_text(dir / "t" / "steer_trials.csv");
  CHECK(csv.rfind("trial,inr_initial_db,inr_final_db,deviation,measurements\n", 0) == 0);
  CHECK(csv_row(csv, 20)[0] == "19");
  CHECK(csv_row(csv, 20)[4] == "625");
  CHECK(fs::exists(dir / "t" / "steer_cdf.csv"));

  // Map mode: a map whose only sub-target pair sits one degree off in transmit azimuth.
  // Six radius-1 pairs rank ahead of it, so steer measures 7 of the 9.
  std::ofstream map(dir / "map.csv", std::ios::binary);
  map << "tx_dtheta,tx_dphi,rx_dtheta,rx_dphi,inr_db\n";
  for (int a = -1; a <= 1; ++a) {
    for (int b = -1; b <= 1; ++b) map << a << ",0," << b << ",0," << ((a == 1 && b == 0) ? -3 : 25) << "\n";
  }
  map.close();
  const auto p = write_scenario(dir, "steer.enabled = true\nsteer.delta_theta_deg = 1\n"
                                     "steer.delta_phi_deg = 0\nsteer.target_inr_db = 0\n"
                                     "steer.map_file = map.csv\n");
  const Run m = invoke({"steer", "--scenario", p.string(), "--out", (dir / "m").string()});
  REQUIRE(m.code == 0);
  const auto res = read_text(dir / "m" / "steer_map_result.csv");
  CHECK(csv_row(res, 1) == std::vector<std::string>{"steer", "1", "0", "0", "0", "-3", "1", "7", "1"});
  CHECK(csv_row(res, 2)[7] == "9");
}

TEST_CASE("exit codes") {
  const auto dir = scratch_dir("exit");
  CHECK(invoke({"rate-region"}).code == 2);
  CHECK(invoke({"no-such-command"}).code == 2);
  CHECK(invoke({"--version"}).code == 0);
  CHECK(invoke({"rate-region", "--scenario", (dir / "missing.scn").string(), "--out",
                (dir / "o").string()})
            .code == 2);

  auto p = write_scenario(dir / "typo", "arrays.tx.antenas = 4\n");
  Run r = invoke({"rate-region", "--scenario", p.string(), "--out", (dir / "o").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("antenas") != std::string::npos);

  p = write_scenario(dir / "noblock", "name = \"x\"\n");
  CHECK(invoke({"codebook", "--scenario", p.string(), "--out", (dir / "o").string()}).code == 2);

  p = write_scenario(dir / "overlap", "arrays.pose.translation = 0, 0, 0\ncodebook.enabled = true\n");
  CHECK(invoke({"codebook", "--scenario", p.string(), "--out", (dir / "o").string()}).code == 2);

  // An SI gain beyond double range makes H non-finite: a numerical failure, not a config error.
  p = write_scenario(dir / "huge", "channel.si.gain_db = 7000\ncodebook.enabled = true\n");
  r = invoke({"codebook", "--scenario", p.string(), "--out", (dir / "o").string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("numerical") != std::string::npos);
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
  const auto dir = scratch_dir("det");
  const std::vector<std::pair<std::string, std::string>> cmds{
      {"rate-region", "rate_region.scn"},
      {"sic-fit", "sic_fit.scn"},
      {"codebook", "codebook16.scn"},
      {"steer", "steer_fd_link.scn"},
  };
  for (const auto& [cmd, file] : cmds) {
    const auto scn = (kScenarios / file).string();
    const auto a = dir / (cmd + "_a"), b = dir / (cmd + "_b"), c = dir / (cmd + "_c");
    REQUIRE(invoke({cmd.c_str(), "--scenario", scn, "--out", a.string(), "--trials", "12"}).code == 0);
    REQUIRE(invoke({cmd.c_str(), "--scenario", scn, "--out", b.string(), "--trials", "12"}).code == 0);
    REQUIRE(invoke({cmd.c_str(), "--scenario", scn, "--out", c.string(), "--trials", "12",
                    "--threads", "4"})
                .code == 0);
    const auto diff_ab = duplexforge::testing_cli::compare_outputs(a, b);
    const auto diff_ac = duplexforge::testing_cli::compare_outputs(a, c);
    CHECK_MESSAGE(diff_ab.empty(), cmd << ": " << diff_ab);
    CHECK_MESSAGE(diff_ac.empty(), cmd << ": " << diff_ac);
  }
}

TEST_CASE("format_g9") {
  CHECK(cli::format_g9(3.4594316186372973) == "3.45943162");
  CHECK(cli::format_g9(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(cli::format_g9(kDbFloor) == "-300");
}
