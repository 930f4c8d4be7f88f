// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#include "duplexforge/link_math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "duplexforge/errors.hpp"
#include "duplexforge/units.hpp"

namespace duplexforge {

namespace {

void require_ratio(double v, const char* what) {
  if (std::isnan(v) || v < 0.0) {
    throw DomainError(std::string(what) + " must be a non-negative ratio, got " + std::to_string(v));
  }
}

void require_snrs(const LinkSnrs& s) {
  require_ratio(s.snr_tx, "snr_tx");
  require_ratio(s.snr_rx, "snr_rx");
}

// alpha * log2(1 + snr / alpha), with the alpha -> 0 limit being 0.
double bandwidth_scaled_rate(double alpha, double snr) {
  if (alpha <= 0.0) return 0.0;
  return alpha * log2_1p(snr / alpha);
}

}  // namespace

void LinkBudget::validate() const {
  if (!std::isfinite(p_tx_dbm) || !std::isfinite(p_noise_dbm) || !std::isfinite(cancellation_db)) {
    throw DomainError("link budget fields must be finite");
  }
  if (cancellation_db < 0.0) throw DomainError("cancellation_db must be >= 0");
}

DuplexShare::DuplexShare(double alpha) : alpha_(alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw DomainError("duplex share must lie in [0, 1], got " + std::to_string(alpha));
  }
}

std::string_view to_string(DuplexStrategy s) {
  switch (s) {
    case DuplexStrategy::tdd: return "tdd";
    case DuplexStrategy::fdd: return "fdd";
    case DuplexStrategy::fd: return "fd";
  }
  return "?";
}

double sinr(double snr, double inr) {
  require_ratio(snr, "snr");
  require_ratio(inr, "inr");
  return snr / (1.0 + inr);
}

double residual_si_inr_db(const LinkBudget& budget) {
  budget.validate();
  return budget.p_tx_dbm - budget.cancellation_db - budget.p_noise_dbm;
}

RatePoint capacity_fd(const LinkSnrs& snrs) {
  require_snrs(snrs);
  return {log2_1p(snrs.snr_tx), log2_1p(snrs.snr_rx)};
}

RatePoint rate_fd(const LinkSnrs& snrs, const LinkInrs& inrs) {
  return {log2_1p(sinr(snrs.snr_tx, inrs.inr_tx)), log2_1p(sinr(snrs.snr_rx, inrs.inr_rx))};
}

RatePoint rate_tdd(const LinkSnrs& snrs, DuplexShare share) {
  const RatePoint full = capacity_fd(snrs);
  const double a = share.alpha();
  return {a * full.r_tx, (1.0 - a) * full.r_rx};
}

RatePoint rate_fdd(const LinkSnrs& snrs, DuplexShare share) {
  require_snrs(snrs);
  const double a = share.alpha();
  return {bandwidth_scaled_rate(a, snrs.snr_tx), bandwidth_scaled_rate(1.0 - a, snrs.snr_rx)};
}

RegionBoundary rate_region_boundary(DuplexStrategy strategy, const LinkSnrs& snrs,
                                    const LinkInrs& inrs, std::size_t n_points) {
  if (n_points < 2) throw ConfigError("rate region needs n_points >= 2");

  RegionBoundary out;
  out.strategy = strategy;

  if (strategy == DuplexStrategy::fd) {
    const RatePoint corner = rate_fd(snrs, inrs);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.points = {{nan, {corner.r_tx, 0.0}}, {nan, corner}, {nan, {0.0, corner.r_rx}}};
    out.star = 1;
    return out;
  }

  out.points.reserve(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    // Endpoints are exact: i = 0 gives alpha = 1, the last index gives alpha = 0.
    const double alpha =
        static_cast<double>(n_points - 1 - i) / static_cast<double>(n_points - 1);
    const DuplexShare share(alpha);
    const RatePoint r =
        strategy == DuplexStrategy::tdd ? rate_tdd(snrs, share) : rate_fdd(snrs, share);
    out.points.push_back({alpha, r});
  }

  // Sums that agree to rounding count as ties so the smallest-alpha rule is stable.
  std::size_t best = out.points.size() - 1;
  for (std::size_t k = out.points.size() - 1; k-- > 0;) {
    const double s = out.points[k].rate.sum();
    const double b = out.points[best].rate.sum();
    if (s > b + 1e-12 * std::max(1.0, std::abs(b))) best = k;
  }
  out.star = best;
  return out;
}

}  // namespace duplexforge
