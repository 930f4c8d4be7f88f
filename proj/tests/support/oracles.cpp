// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <tuple>

#include "duplexforge/channels.hpp"

namespace duplexforge::oracle {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

CVector steering(const std::vector<Vec3>& positions, double az_deg, double el_deg) {
  const double az = az_deg * std::numbers::pi / 180.0;
  const double el = el_deg * std::numbers::pi / 180.0;
  const double ux = std::cos(el) * std::sin(az);
  const double uy = std::cos(el) * std::cos(az);
  const double uz = std::sin(el);
  CVector a(static_cast<Eigen::Index>(positions.size()));
  for (std::size_t m = 0; m < positions.size(); ++m) {
    const auto& p = positions[m];
    const double phase = 2.0 * std::numbers::pi * (ux * p.x() + uy * p.y() + uz * p.z());
    a(static_cast<Eigen::Index>(m)) = std::exp(cplx(0.0, phase));
  }
  return a;
}

CVector ls_qr(const CMatrix& a, const CVector& y) {
  return a.colPivHouseholderQr().solve(-y);
}

double sum_se(const LinkContext& ctx, const CVector& f, const CVector& w) {
  auto lin = [](double dbm) { return std::pow(10.0, dbm / 10.0); };
  cplx g_tx(0.0, 0.0), g_rx(0.0, 0.0), g_si(0.0, 0.0);
  for (Eigen::Index i = 0; i < f.size(); ++i) g_tx += std::conj(ctx.h_tx.coefficients(i)) * f(i);
  for (Eigen::Index i = 0; i < w.size(); ++i) g_rx += std::conj(w(i)) * ctx.h_rx.coefficients(i);
  for (Eigen::Index m = 0; m < w.size(); ++m) {
    cplx hf(0.0, 0.0);
    for (Eigen::Index n = 0; n < f.size(); ++n) hf += ctx.si.matrix(m, n) * f(n);
    g_si += std::conj(w(m)) * hf;
  }
  const auto& p = ctx.powers;
  const double snr_t = lin(p.p_bs_dbm) * std::norm(g_tx) / lin(p.n_ue_dbm);
  const double snr_r = lin(p.p_ue_dbm) * std::norm(g_rx) / lin(p.n_bs_dbm);
  const double inr_t = lin(p.p_ue_dbm) * std::norm(ctx.h_cl.coefficient) / lin(p.n_ue_dbm);
  const double inr_r = lin(p.p_bs_dbm) * std::norm(g_si) / lin(p.n_bs_dbm);
  return std::log2(1.0 + snr_t / (1.0 + inr_t)) + std::log2(1.0 + snr_r / (1.0 + inr_r));
}

BestPair exhaustive(const Codebook& tx, const Codebook& rx, const LinkContext& ctx) {
  BestPair best{0, 0, -1.0};
  for (std::size_t i = 0; i < tx.size(); ++i) {
    for (std::size_t j = 0; j < rx.size(); ++j) {
      const double v = sum_se(ctx, tx.beams[i].weights, rx.beams[j].weights);
      if (v > best.sum_se) best = {i, j, v};
    }
  }
  return best;
}

SteerChoice steer(const InrGridMap& map, double target_db) {
  const auto& spec = map.spec();
  const int mt = static_cast<int>(std::floor(spec.delta_theta_deg / spec.res_theta_deg + 1e-9));
  const int mp = static_cast<int>(std::floor(spec.delta_phi_deg / spec.res_phi_deg + 1e-9));

  // Offsets ranked by squared distance, then dtheta, then dphi.
  std::vector<std::pair<int, int>> offs;
  for (int m = -mt; m <= mt; ++m) {
    for (int n = -mp; n <= mp; ++n) offs.emplace_back(m, n);
  }
  auto key = [&](const std::pair<int, int>& o) {
    const double dt = o.first * spec.res_theta_deg;
    const double dp = o.second * spec.res_phi_deg;
    return std::tuple(dt * dt + dp * dp, dt, dp);
  };
  std::sort(offs.begin(), offs.end(), [&](auto& a, auto& b) { return key(a) < key(b); });

  auto value = [&](const std::pair<int, int>& t, const std::pair<int, int>& r) {
    const NeighborhoodOffset to{t.first, t.second, t.first * spec.res_theta_deg,
                                t.second * spec.res_phi_deg};
    const NeighborhoodOffset ro{r.first, r.second, r.first * spec.res_theta_deg,
                                r.second * spec.res_phi_deg};
    return map.at(to, ro);
  };

  double global_min = INFINITY;
  for (const auto& t : offs) {
    for (const auto& r : offs) global_min = std::min(global_min, value(t, r));
  }
  SteerChoice best;
  best.threshold_db = std::max(target_db, global_min);
  best.radius_sq = INFINITY;
  for (const auto& t : offs) {
    for (const auto& r : offs) {
      const double v = value(t, r);
      if (!(v <= best.threshold_db)) continue;
      const double dt = std::max(std::abs(t.first), std::abs(r.first)) * spec.res_theta_deg;
      const double dp = std::max(std::abs(t.second), std::abs(r.second)) * spec.res_phi_deg;
      const double rad = dt * dt + dp * dp;
      if (rad < best.radius_sq) {
        best = {t.first, t.second, r.first, r.second, v, rad, best.threshold_db};
      }
    }
  }
  return best;
}

double median_min_reduction(std::size_t n, double sigma, std::size_t trials, std::uint64_t seed) {
  std::mt19937 rng(static_cast<std::uint32_t>(seed));
  std::normal_distribution<double> z(0.0, sigma);
  std::vector<double> red(trials);
  for (auto& r : red) {
    const double x0 = z(rng);
    double lo = x0;
    for (std::size_t i = 1; i < n; ++i) lo = std::min(lo, z(rng));
    r = x0 - lo;
  }
  std::sort(red.begin(), red.end());
  return trials % 2 ? red[trials / 2] : 0.5 * (red[trials / 2 - 1] + red[trials / 2]);
}

BeamInstance random_beam_instance(std::uint64_t seed, std::size_t n, std::size_t max_candidates,
                                  int bits) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> az(-60.0, 60.0);
  std::uniform_int_distribution<int> phase_idx(0, (1 << bits) - 1);
  std::uniform_int_distribution<std::size_t> count(max_candidates / 2, max_candidates);

  const auto geom = ArrayGeometry::uniform_linear(n);
  BeamInstance inst;
  inst.ctx.h_tx = los_user_channel(geom, Direction(az(rng), 0.0), 0.0);
  inst.ctx.h_rx = los_user_channel(geom, Direction(az(rng), 0.0), 0.0);
  inst.ctx.si = rayleigh_si_channel(n, n, rng());
  inst.ctx.h_cl = cross_link_channel(-10.0, rng());
  inst.ctx.powers = {0.0, 0.0, -10.0, -10.0};

  PhaseShifterSpec spec;
  spec.phase_bits = bits;
  auto candidates = [&] {
    const std::size_t total = count(rng);
    std::vector<Direction> dirs;
    for (std::size_t k = 0; k < total / 2; ++k) dirs.emplace_back(az(rng), 0.0);
    Codebook cb = conjugate_codebook(geom, dirs, spec);
    while (cb.size() < total) {
      CVector v(static_cast<Eigen::Index>(n));
      for (auto& e : v) {
        e = std::polar(1.0, phase_idx(rng) * 2.0 * std::numbers::pi / (1 << bits));
      }
      cb.beams.push_back({v, spec});
    }
    cb.labels.clear();
    return cb;
  };
  inst.space.tx_candidates = candidates();
  inst.space.rx_candidates = candidates();
  return inst;
}

CodebookInstance random_codebook_instance(std::uint64_t seed, std::size_t n, std::size_t m) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto geom = ArrayGeometry::uniform_linear(n);
  ArrayPose pose;
  pose.translation = Vec3(static_cast<double>(n) * 0.5 + 4.0 + 3.0 * (u(rng) + 1.0), u(rng), u(rng));
  pose.rotation = ArrayPose::rotation_from_euler_deg(5.0 * u(rng), 5.0 * u(rng), 15.0 * u(rng));
  CodebookInstance inst{spherical_wave_si_channel(geom, geom, pose, 1.0),
                        {geom, azimuth_sweep(-60.0, 60.0, m)},
                        {geom, azimuth_sweep(-60.0, 60.0, m)}};
  return inst;
}

InrGridMap random_inr_map(const NeighborhoodSpec& spec, std::uint64_t seed, double mu_db,
                          double sigma_db) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(mu_db, sigma_db);
  InrGridMap map(spec);
  const auto offs = neighborhood_offsets(spec);
  for (const auto& t : offs) {
    for (const auto& r : offs) map.set(t, r, z(rng));
  }
  return map;
}

}  // namespace duplexforge::oracle
