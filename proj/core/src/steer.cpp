// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#include "duplexforge/steer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "duplexforge/errors.hpp"
#include "duplexforge/random.hpp"
#include "duplexforge/units.hpp"

namespace duplexforge {

namespace {

int lattice_steps(double delta, double res) {
  // The epsilon absorbs ratios like 0.3 / 0.1 = 2.9999999999999996.
  return static_cast<int>(std::floor(delta / res + 1e-9));
}

// A pair of offset ranks with the squared radius of the smallest shared sub-neighborhood
// containing both offsets.
struct RankedPair {
  std::size_t tx = 0;
  std::size_t rx = 0;
  int p = 0;
  int q = 0;
  double radius_sq = 0.0;
};

// All (tx, rx) pairs in the order the selection rule prefers them: smaller radius first,
// then lower tx rank, then lower rx rank.
std::vector<RankedPair> ranked_pairs(const std::vector<NeighborhoodOffset>& offsets,
                                     const NeighborhoodSpec& spec) {
  std::vector<RankedPair> pairs;
  pairs.reserve(offsets.size() * offsets.size());
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    for (std::size_t j = 0; j < offsets.size(); ++j) {
      const int p = std::max(std::abs(offsets[i].m), std::abs(offsets[j].m));
      const int q = std::max(std::abs(offsets[i].n), std::abs(offsets[j].n));
      const double dt = p * spec.res_theta_deg;
      const double dp = q * spec.res_phi_deg;
      pairs.push_back({i, j, p, q, dt * dt + dp * dp});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const RankedPair& a, const RankedPair& b) {
    return a.radius_sq < b.radius_sq;
  });
  return pairs;
}

class Session {
 public:
  Session(const Direction& tx0, const Direction& rx0, const NeighborhoodSpec& spec,
          InrMeasurer& measurer)
      : tx0_(tx0), rx0_(rx0), spec_(spec), offsets_(neighborhood_offsets(spec)),
        measurer_(measurer), start_calls_(measurer.calls()),
        cache_(offsets_.size() * offsets_.size(), std::numeric_limits<double>::quiet_NaN()),
        seen_(cache_.size(), false) {}

  const std::vector<NeighborhoodOffset>& offsets() const { return offsets_; }

  double inr(std::size_t i, std::size_t j) {
    const std::size_t k = i * offsets_.size() + j;
    if (!seen_[k]) {
      cache_[k] = measurer_.measure(tx_dir(i), rx_dir(j));
      seen_[k] = true;
    }
    return cache_[k];
  }

  Direction tx_dir(std::size_t i) const {
    return tx0_.offset(offsets_[i].dtheta_deg, offsets_[i].dphi_deg);
  }
  Direction rx_dir(std::size_t j) const {
    return rx0_.offset(offsets_[j].dtheta_deg, offsets_[j].dphi_deg);
  }

  SteerResult result(const RankedPair& pair, double target) {
    SteerResult r;
    r.tx_offset = offsets_[pair.tx];
    r.rx_offset = offsets_[pair.rx];
    r.tx_dir = tx_dir(pair.tx);
    r.rx_dir = rx_dir(pair.rx);
    r.inr_db = inr(pair.tx, pair.rx);
    r.deviation_theta_deg = pair.p * spec_.res_theta_deg;
    r.deviation_phi_deg = pair.q * spec_.res_phi_deg;
    r.measurements_used = measurer_.calls() - start_calls_;
    r.met_target = r.inr_db <= target;
    return r;
  }

 private:
  Direction tx0_;
  Direction rx0_;
  NeighborhoodSpec spec_;
  std::vector<NeighborhoodOffset> offsets_;
  InrMeasurer& measurer_;
  std::size_t start_calls_;
  std::vector<double> cache_;
  std::vector<bool> seen_;
};

// First pair in preference order whose INR is <= threshold. Every pair must be measured.
const RankedPair& first_within(const std::vector<RankedPair>& pairs, Session& s, double threshold) {
  for (const auto& p : pairs) {
    if (s.inr(p.tx, p.rx) <= threshold) return p;
  }
  throw NumericalError("no pair reaches the neighborhood minimum (NaN INR measurement?)");
}

double neighborhood_min(const std::vector<RankedPair>& pairs, Session& s) {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& p : pairs) lo = std::min(lo, s.inr(p.tx, p.rx));
  return lo;
}

}  // namespace

void NeighborhoodSpec::validate() const {
  if (!(delta_theta_deg >= 0.0) || !(delta_phi_deg >= 0.0)) {
    throw ConfigError("neighborhood size must be >= 0");
  }
  if (!(res_theta_deg > 0.0) || !(res_phi_deg > 0.0)) {
    throw ConfigError("neighborhood resolution must be > 0");
  }
  if (delta_theta_deg > 0.0 && res_theta_deg > delta_theta_deg) {
    throw ConfigError("azimuth resolution exceeds the neighborhood size");
  }
  if (delta_phi_deg > 0.0 && res_phi_deg > delta_phi_deg) {
    throw ConfigError("elevation resolution exceeds the neighborhood size");
  }
}

int NeighborhoodSpec::max_theta_steps() const {
  return lattice_steps(delta_theta_deg, res_theta_deg);
}
int NeighborhoodSpec::max_phi_steps() const { return lattice_steps(delta_phi_deg, res_phi_deg); }

std::vector<NeighborhoodOffset> neighborhood_offsets(const NeighborhoodSpec& spec) {
  spec.validate();
  const int mt = spec.max_theta_steps();
  const int mp = spec.max_phi_steps();
  std::vector<NeighborhoodOffset> out;
  out.reserve(static_cast<std::size_t>((2 * mt + 1) * (2 * mp + 1)));
  for (int m = -mt; m <= mt; ++m) {
    for (int n = -mp; n <= mp; ++n) {
      out.push_back({m, n, m * spec.res_theta_deg, n * spec.res_phi_deg});
    }
  }
  std::sort(out.begin(), out.end(), [](const NeighborhoodOffset& a, const NeighborhoodOffset& b) {
    const double ra = a.dtheta_deg * a.dtheta_deg + a.dphi_deg * a.dphi_deg;
    const double rb = b.dtheta_deg * b.dtheta_deg + b.dphi_deg * b.dphi_deg;
    if (ra != rb) return ra < rb;
    if (a.m != b.m) return a.m < b.m;
    return a.n < b.n;
  });
  return out;
}

SteerResult steer_select(const Direction& initial_tx, const Direction& initial_rx,
                         const NeighborhoodSpec& spec, double target_inr_db,
                         InrMeasurer& measurer) {
  Session s(initial_tx, initial_rx, spec, measurer);
  const auto pairs = ranked_pairs(s.offsets(), spec);

  // Every pair of a smaller radius has already failed when a pair is reached, so the first
  // feasible one is optimal.
  for (const auto& p : pairs) {
    if (s.inr(p.tx, p.rx) <= target_inr_db) return s.result(p, target_inr_db);
  }
  // Target unreachable: the constraint becomes INR <= neighborhood minimum (all pairs cached).
  return s.result(first_within(pairs, s, neighborhood_min(pairs, s)), target_inr_db);
}

SteerResult brute_force_steer(const Direction& initial_tx, const Direction& initial_rx,
                              const NeighborhoodSpec& spec, double target_inr_db,
                              InrMeasurer& measurer) {
  Session s(initial_tx, initial_rx, spec, measurer);
  const std::size_t k = s.offsets().size();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) s.inr(i, j);
  }
  const auto pairs = ranked_pairs(s.offsets(), spec);
  const double threshold = std::max(target_inr_db, neighborhood_min(pairs, s));
  return s.result(first_within(pairs, s, threshold), target_inr_db);
}

InrSurface fd_link_inr_surface(LinkContext ctx, ArrayGeometry tx_geometry,
                               ArrayGeometry rx_geometry) {
  ctx.validate();
  if (tx_geometry.size() != ctx.n_tx() || rx_geometry.size() != ctx.n_rx()) {
    throw DimensionError("surface geometries do not match the link context");
  }
  return [ctx = std::move(ctx), tx = std::move(tx_geometry), rx = std::move(rx_geometry)](
             const Direction& t, const Direction& r) {
    return linear_to_db_clamped(inr_rx(ctx, steering_vector(tx, t), steering_vector(rx, r)));
  };
}

InrSurface flat_inr_surface(double inr_db) {
  return [inr_db](const Direction&, const Direction&) { return inr_db; };
}

SimulatedMeasurer::SimulatedMeasurer(InrSurface surface, double sigma_small_scale_db,
                                     std::uint64_t seed)
    : surface_(std::move(surface)), sigma_db_(sigma_small_scale_db), seed_(seed) {
  if (!surface_) throw DomainError("simulated measurer needs an INR surface");
  if (!(sigma_db_ >= 0.0)) throw DomainError("small-scale sigma must be >= 0");
}

SimulatedMeasurer::Key SimulatedMeasurer::key_of(const Direction& tx, const Direction& rx) {
  // Micro-degree lattice: directions reached through different offset sums map together.
  auto q = [](double deg) { return std::llround(deg * 1e6); };
  return {{q(tx.azimuth_deg()), q(tx.elevation_deg())}, {q(rx.azimuth_deg()), q(rx.elevation_deg())}};
}

double SimulatedMeasurer::small_scale_db(const Direction& tx, const Direction& rx) const {
  if (sigma_db_ == 0.0) return 0.0;
  const Key k = key_of(tx, rx);
  std::uint64_t h = mix64(seed_);
  for (long long v : {k.first.first, k.first.second, k.second.first, k.second.second}) {
    h = mix64(h ^ static_cast<std::uint64_t>(v));
  }
  Rng rng(h);
  std::normal_distribution<double> z(0.0, 1.0);
  return sigma_db_ * z(rng);
}

double SimulatedMeasurer::do_measure(const Direction& tx, const Direction& rx) {
  const Key k = key_of(tx, rx);
  if (auto it = cache_.find(k); it != cache_.end()) return it->second;
  const double v = surface_(tx, rx) + small_scale_db(tx, rx);
  cache_.emplace(k, v);
  return v;
}

InrGridMap::InrGridMap(NeighborhoodSpec spec) : spec_(spec) {
  spec_.validate();
  mt_ = spec_.max_theta_steps();
  mp_ = spec_.max_phi_steps();
  const auto side = static_cast<std::size_t>((2 * mt_ + 1) * (2 * mp_ + 1));
  values_.assign(side * side, 0.0);
  filled_.assign(side * side, false);
}

std::size_t InrGridMap::index(const NeighborhoodOffset& tx, const NeighborhoodOffset& rx) const {
  auto flat = [&](const NeighborhoodOffset& o) {
    if (std::abs(o.m) > mt_ || std::abs(o.n) > mp_) {
      throw DomainError("offset (" + std::to_string(o.m) + ", " + std::to_string(o.n) +
                        ") lies outside the neighborhood");
    }
    return static_cast<std::size_t>((o.m + mt_) * (2 * mp_ + 1) + (o.n + mp_));
  };
  const auto side = static_cast<std::size_t>((2 * mt_ + 1) * (2 * mp_ + 1));
  return flat(tx) * side + flat(rx);
}

void InrGridMap::set(const NeighborhoodOffset& tx, const NeighborhoodOffset& rx, double inr_db) {
  const std::size_t k = index(tx, rx);
  values_[k] = inr_db;
  filled_[k] = true;
}

double InrGridMap::at(const NeighborhoodOffset& tx, const NeighborhoodOffset& rx) const {
  const std::size_t k = index(tx, rx);
  if (!filled_[k]) throw DomainError("INR map has no value for the requested pair");
  return values_[k];
}

bool InrGridMap::complete() const {
  return std::all_of(filled_.begin(), filled_.end(), [](bool b) { return b; });
}

InrGridMap InrGridMap::measure_all(const NeighborhoodSpec& spec, const Direction& initial_tx,
                                   const Direction& initial_rx, InrMeasurer& measurer) {
  InrGridMap map(spec);
  const auto offsets = neighborhood_offsets(spec);
  for (const auto& t : offsets) {
    for (const auto& r : offsets) {
      map.set(t, r,
              measurer.measure(initial_tx.offset(t.dtheta_deg, t.dphi_deg),
                               initial_rx.offset(r.dtheta_deg, r.dphi_deg)));
    }
  }
  return map;
}

MapMeasurer::MapMeasurer(const InrGridMap& map, Direction initial_tx, Direction initial_rx)
    : map_(map), initial_tx_(initial_tx), initial_rx_(initial_rx) {}

NeighborhoodOffset MapMeasurer::offset_of(const Direction& initial, const Direction& d) const {
  const auto& spec = map_.spec();
  NeighborhoodOffset o;
  o.m = static_cast<int>(
      std::lround(wrap_deg(d.azimuth_deg() - initial.azimuth_deg()) / spec.res_theta_deg));
  o.n = static_cast<int>(std::lround((d.elevation_deg() - initial.elevation_deg()) / spec.res_phi_deg));
  o.dtheta_deg = o.m * spec.res_theta_deg;
  o.dphi_deg = o.n * spec.res_phi_deg;
  return o;
}

double MapMeasurer::do_measure(const Direction& tx, const Direction& rx) {
  return map_.at(offset_of(initial_tx_, tx), offset_of(initial_rx_, rx));
}

}  // namespace duplexforge
