// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace duplexforge {

// Scalar duplexing formulas. Unless a name says `_db`, every ratio here is linear.

/// Transmit power, noise power and total self-interference mitigation, all in the dB domain.
struct LinkBudget {
  double p_tx_dbm = 0.0;
  double p_noise_dbm = 0.0;
  double cancellation_db = 0.0;

  /// Throws DomainError unless every field is finite and cancellation_db >= 0.
  void validate() const;
};

/// Interference-free SNRs of the transmit and receive links (linear).
struct LinkSnrs {
  double snr_tx = 0.0;
  double snr_rx = 0.0;
};

/// Cross-link INR on the transmit link and SI INR on the receive link (linear).
struct LinkInrs {
  double inr_tx = 0.0;
  double inr_rx = 0.0;
};

/// A (transmit, receive) spectral-efficiency pair in bits/s/Hz.
struct RatePoint {
  double r_tx = 0.0;
  double r_rx = 0.0;

  double sum() const { return r_tx + r_rx; }
};

/// Fraction of time (TDD) or bandwidth (FDD) given to transmission.
class DuplexShare {
 public:
  /// Throws DomainError outside [0, 1].
  explicit DuplexShare(double alpha);
  double alpha() const { return alpha_; }

 private:
  double alpha_;
};

enum class DuplexStrategy { tdd, fdd, fd };

std::string_view to_string(DuplexStrategy s);

double sinr(double snr, double inr);

/// INR of the residual self-interference, p_tx - L - p_noise, in dB.
double residual_si_inr_db(const LinkBudget& budget);

RatePoint capacity_fd(const LinkSnrs& snrs);
RatePoint rate_fd(const LinkSnrs& snrs, const LinkInrs& inrs);
RatePoint rate_tdd(const LinkSnrs& snrs, DuplexShare share);
/// alpha in {0, 1} is evaluated as the continuous limit: the link with no bandwidth carries 0.
RatePoint rate_fdd(const LinkSnrs& snrs, DuplexShare share);

struct RegionPoint {
  /// Share swept for tdd/fdd. For fd the value is NaN (no share applies).
  double alpha = 0.0;
  RatePoint rate;
};

struct RegionBoundary {
  DuplexStrategy strategy = DuplexStrategy::tdd;
  std::vector<RegionPoint> points;
  /// Index of the point with the largest r_tx + r_rx; ties go to the smallest alpha.
  std::size_t star = 0;
};

/// Boundary of the achievable region of one strategy.
///
/// tdd/fdd sweep alpha over n_points uniform values from 1 down to 0, so the listing runs
/// from the transmit axis to the receive axis. fd returns the three corners of its
/// rectangle in the same orientation with the star on the inner corner. `inrs` is only
/// used by fd. Throws ConfigError for n_points < 2.
RegionBoundary rate_region_boundary(DuplexStrategy strategy, const LinkSnrs& snrs,
                                    const LinkInrs& inrs, std::size_t n_points);

}  // namespace duplexforge
