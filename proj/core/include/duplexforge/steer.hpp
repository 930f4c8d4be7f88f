// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "duplexforge/arrays.hpp"
#include "duplexforge/fd_link.hpp"

namespace duplexforge {

/// Size (delta_*) and resolution (res_*) of the spatial neighborhood around a steering
/// direction, in degrees. theta is azimuth, phi is elevation.
struct NeighborhoodSpec {
  double delta_theta_deg = 2.0;
  double delta_phi_deg = 2.0;
  double res_theta_deg = 1.0;
  double res_phi_deg = 1.0;

  void validate() const;
  /// floor(delta / res) for each axis.
  int max_theta_steps() const;
  int max_phi_steps() const;

  bool operator==(const NeighborhoodSpec&) const = default;
};

/// One lattice point (m * res_theta, n * res_phi) of a neighborhood.
struct NeighborhoodOffset {
  int m = 0;
  int n = 0;
  double dtheta_deg = 0.0;
  double dphi_deg = 0.0;

  bool operator==(const NeighborhoodOffset&) const = default;
};

/// The product of the azimuth and elevation lattices, sorted by dtheta^2 + dphi^2, then
/// dtheta, then dphi. The first element is always (0, 0).
std::vector<NeighborhoodOffset> neighborhood_offsets(const NeighborhoodSpec& spec);

/// Source of receive-link INR measurements for a (transmit, receive) steering pair.
///
/// Implementations must return the same value for the same pair within one session.
class InrMeasurer {
 public:
  virtual ~InrMeasurer() = default;

  /// Measures INR in dB and counts the call.
  double measure(const Direction& tx, const Direction& rx) {
    const double v = do_measure(tx, rx);
    ++calls_;
    return v;
  }
  std::size_t calls() const { return calls_; }

 protected:
  virtual double do_measure(const Direction& tx, const Direction& rx) = 0;

 private:
  std::size_t calls_ = 0;
};

struct SteerResult {
  Direction tx_dir;
  Direction rx_dir;
  NeighborhoodOffset tx_offset;
  NeighborhoodOffset rx_offset;
  double inr_db = 0.0;
  /// Smallest sub-neighborhood radius (in degrees) containing the selected pair.
  double deviation_theta_deg = 0.0;
  double deviation_phi_deg = 0.0;
  std::size_t measurements_used = 0;
  bool met_target = false;

  double deviation_sq() const {
    return deviation_theta_deg * deviation_theta_deg + deviation_phi_deg * deviation_phi_deg;
  }
};

/// Minimal-deviation beam selection with an INR constraint.
///
/// Searches sub-neighborhoods in increasing order of dtheta^2 + dphi^2 (a single radius
/// shared by both beams), measuring each pair at most once, and stops at the first radius
/// that holds a pair with INR <= target. Among equally distant feasible pairs the one with
/// the lowest (tx, rx) offset rank wins. If the whole neighborhood misses the target, the
/// constraint relaxes to the neighborhood minimum. Pass target = -inf for pure minimization.
SteerResult steer_select(const Direction& initial_tx, const Direction& initial_rx,
                         const NeighborhoodSpec& spec, double target_inr_db,
                         InrMeasurer& measurer);

/// Measures every pair of the full neighborhood and solves the same problem by enumeration.
SteerResult brute_force_steer(const Direction& initial_tx, const Direction& initial_rx,
                              const NeighborhoodSpec& spec, double target_inr_db,
                              InrMeasurer& measurer);

/// INR (dB) of a (tx, rx) steering pair before small-scale variation.
using InrSurface = std::function<double(const Direction&, const Direction&)>;

/// Surface from the fd_link INR with matched beams toward each direction.
InrSurface fd_link_inr_surface(LinkContext ctx, ArrayGeometry tx_geometry,
                               ArrayGeometry rx_geometry);

/// Constant surface.
InrSurface flat_inr_surface(double inr_db);

/// Surface plus an i.i.d. N(0, sigma^2) dB term per pair. The term for a pair depends only on
/// (seed, pair), so the map is the same whatever order it is materialized in; values are
/// cached after the first measurement.
class SimulatedMeasurer : public InrMeasurer {
 public:
  SimulatedMeasurer(InrSurface surface, double sigma_small_scale_db, std::uint64_t seed);

  /// Small-scale term alone, in dB.
  double small_scale_db(const Direction& tx, const Direction& rx) const;

 protected:
  double do_measure(const Direction& tx, const Direction& rx) override;

 private:
  using Key = std::pair<std::pair<long long, long long>, std::pair<long long, long long>>;
  static Key key_of(const Direction& tx, const Direction& rx);

  InrSurface surface_;
  double sigma_db_;
  std::uint64_t seed_;
  std::map<Key, double> cache_;
};

/// INR values over the pair lattice of one neighborhood, keyed by (tx offset, rx offset).
class InrGridMap {
 public:
  explicit InrGridMap(NeighborhoodSpec spec);

  const NeighborhoodSpec& spec() const { return spec_; }
  void set(const NeighborhoodOffset& tx, const NeighborhoodOffset& rx, double inr_db);
  /// Throws DomainError if the pair is outside the lattice or was never set.
  double at(const NeighborhoodOffset& tx, const NeighborhoodOffset& rx) const;
  bool complete() const;
  std::size_t size() const { return values_.size(); }

  /// Fills every pair from a measurer around the given initial directions.
  static InrGridMap measure_all(const NeighborhoodSpec& spec, const Direction& initial_tx,
                                const Direction& initial_rx, InrMeasurer& measurer);

 private:
  std::size_t index(const NeighborhoodOffset& tx, const NeighborhoodOffset& rx) const;

  NeighborhoodSpec spec_;
  int mt_ = 0;
  int mp_ = 0;
  std::vector<double> values_;
  std::vector<bool> filled_;
};

/// Serves measurements from an InrGridMap centred on the given initial directions.
class MapMeasurer : public InrMeasurer {
 public:
  MapMeasurer(const InrGridMap& map, Direction initial_tx, Direction initial_rx);

 protected:
  double do_measure(const Direction& tx, const Direction& rx) override;

 private:
  NeighborhoodOffset offset_of(const Direction& initial, const Direction& d) const;

  const InrGridMap& map_;
  Direction initial_tx_;
  Direction initial_rx_;
};

}  // namespace duplexforge
