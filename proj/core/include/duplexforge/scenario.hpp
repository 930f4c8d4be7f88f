// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "duplexforge/arrays.hpp"
#include "duplexforge/channels.hpp"
#include "duplexforge/codebook_design.hpp"
#include "duplexforge/errors.hpp"
#include "duplexforge/fd_link.hpp"
#include "duplexforge/steer.hpp"

namespace duplexforge {

// Scenario files are line-oriented UTF-8 text:
//
//   # comment
//   seed = 7
//   arrays.tx.n_elements = 16      # trailing comments need a space before '#'
//   channel.users.tx_direction = 10, 0
//
// Keys are dotted paths from a fixed schema; unknown keys are errors. Values are numbers
// (`inf`/`-inf` allowed where noted), identifiers, or comma-separated number lists. Angles
// are degrees, powers dBm, gains dB. docs/scenario-format.md lists every key.

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct ArrayConfig {
  std::size_t n_elements = 16;
  /// Planar arrays: rows along elevation; columns = n_elements / rows.
  std::size_t rows = 1;
  double spacing = 0.5;

  bool operator==(const ArrayConfig&) const = default;
};

struct PoseConfig {
  std::array<double, 3> translation{10.0, 0.0, 0.0};
  std::array<double, 3> rotation_deg{0.0, 0.0, 0.0};

  bool operator==(const PoseConfig&) const = default;
};

enum class SiModelChoice { spherical_wave, rayleigh, identity, zero };

struct SiConfig {
  SiModelChoice model = SiModelChoice::spherical_wave;
  double rho = 1.0;
  /// Extra power scaling applied to H, dB.
  double gain_db = 0.0;

  bool operator==(const SiConfig&) const = default;
};

struct UsersConfig {
  std::array<double, 2> tx_direction{0.0, 0.0};  // downlink user, (az, el)
  std::array<double, 2> rx_direction{0.0, 0.0};  // uplink user
  double tx_gain_db = 0.0;
  double rx_gain_db = 0.0;
  double cross_link_gain_db = kNegInf;

  bool operator==(const UsersConfig&) const = default;
};

struct RegionConfig {
  double snr_tx_db = 10.0;
  double snr_rx_db = 10.0;
  std::size_t n_points = 11;
  /// Paired element-wise: the fd boundary is evaluated at (inr_tx_db[k], inr_rx_db[k]).
  std::vector<double> inr_tx_db{kNegInf, 0.0, 10.0};
  std::vector<double> inr_rx_db{kNegInf, 0.0, 10.0};

  bool operator==(const RegionConfig&) const = default;
};

struct SicConfig {
  std::size_t n_taps = 4;
  double tap_delay_samples = 1.0;
  std::size_t samples = 64;
  /// Taps of the synthetic SI impulse response (same delay grid as the canceller).
  std::size_t channel_taps = 4;
  /// Power decay per SI channel tap, dB.
  double channel_decay_db = 3.0;
  /// Noise power relative to the first SI tap, dB. -inf is noiseless.
  double noise_db = kNegInf;

  bool operator==(const SicConfig&) const = default;
};

struct CodebookSideConfig {
  /// Declared array size; checked against arrays.* when present.
  std::optional<std::size_t> n_elements;
  std::size_t n_beams = 8;
  std::array<double, 2> span_deg{-60.0, 60.0};
  double elevation_deg = 0.0;

  bool operator==(const CodebookSideConfig&) const = default;
};

struct CodebookConfig {
  CodebookSideConfig tx;
  CodebookSideConfig rx;
  double sigma2_tx = 0.1;
  double sigma2_rx = 0.1;
  std::size_t max_iters = 200;
  double tolerance = 1e-6;

  bool operator==(const CodebookConfig&) const = default;
};

enum class SteerBase { fd_link, flat };

struct SteerConfig {
  NeighborhoodSpec neighborhood{};
  double target_inr_db = kNegInf;
  double sigma_db = 10.0;
  std::size_t trials = 100;
  SteerBase base = SteerBase::fd_link;
  double base_inr_db = 20.0;
  std::array<double, 2> azimuth_span_deg{-60.0, 60.0};
  std::array<double, 2> elevation_span_deg{-10.0, 10.0};
  /// External INR map (CSV). When set, one selection runs over the map.
  std::string map_file;
  std::array<double, 2> initial_tx_direction{0.0, 0.0};
  std::array<double, 2> initial_rx_direction{0.0, 0.0};

  bool operator==(const SteerConfig&) const = default;
};

struct Scenario {
  std::string name;
  std::optional<std::uint64_t> master_seed;
  ArrayConfig tx_array;
  ArrayConfig rx_array;
  PoseConfig pose;
  SiConfig si;
  UsersConfig users;
  LinkPowers powers;
  PhaseShifterSpec phase_shifter;
  std::optional<RegionConfig> region;
  std::optional<SicConfig> sic;
  std::optional<CodebookConfig> codebook;
  std::optional<SteerConfig> steer;

  bool operator==(const Scenario&) const = default;
  /// True if any configured block draws random numbers. Map-driven steer runs do not.
  bool stochastic() const;
};

struct ScenarioIssue {
  std::string path;  // dotted key or block, e.g. "codebook.rx"
  std::size_t line = 0;  // 0 when not tied to a line
  std::string message;
};

/// Thrown by load_scenario with every issue found, not only the first.
class ScenarioError : public ConfigError {
 public:
  explicit ScenarioError(std::vector<ScenarioIssue> issues);
  const std::vector<ScenarioIssue>& issues() const { return issues_; }

 private:
  std::vector<ScenarioIssue> issues_;
};

/// Parses and validates. `seed_override` replaces (or supplies) the master seed.
Scenario load_scenario(std::string_view text,
                       std::optional<std::uint64_t> seed_override = std::nullopt);

/// Canonical text form; load_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& s);

/// Seed for the stream named `label`, derived from the master seed with a fixed
/// platform-independent hash (FNV-1a of the label, splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view label);

// Materialization of the scenario into toolkit objects.

ArrayGeometry make_geometry(const ArrayConfig& cfg);
ArrayPose make_pose(const PoseConfig& cfg);
/// SI channel; the rayleigh model draws from derive_seed(master, "si").
SiChannel make_si_channel(const Scenario& s);
/// Users, cross link (seed label "cross-link"), SI channel and powers.
LinkContext make_link_context(const Scenario& s);
Direction make_direction(const std::array<double, 2>& az_el);
CoverageSpec make_coverage(const ArrayConfig& array, const CodebookSideConfig& side);

}  // namespace duplexforge
