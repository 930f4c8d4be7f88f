// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#pragma once

#include "duplexforge/arrays.hpp"
#include "duplexforge/channels.hpp"
#include "duplexforge/link_math.hpp"

namespace duplexforge {

/// Transmit and noise powers of the full-duplex BS and its two users, dBm.
struct LinkPowers {
  double p_bs_dbm = 0.0;
  double p_ue_dbm = 0.0;
  double n_bs_dbm = 0.0;
  double n_ue_dbm = 0.0;

  bool operator==(const LinkPowers&) const = default;
};

/// Everything about a full-duplex BS link except the beams.
struct LinkContext {
  UserChannel h_tx;  // BS -> downlink user
  UserChannel h_rx;  // uplink user -> BS
  CrossLinkChannel h_cl;
  SiChannel si;
  LinkPowers powers;

  std::size_t n_tx() const { return static_cast<std::size_t>(h_tx.coefficients.size()); }
  std::size_t n_rx() const { return static_cast<std::size_t>(h_rx.coefficients.size()); }

  /// Throws DimensionError if H is not n_rx x n_tx.
  void validate() const;
};

/// A context with concrete transmit (f) and receive (w) beams.
struct FdLink {
  LinkContext context;
  BeamWeights f;
  BeamWeights w;
};

struct SpectralEfficiency {
  double r_tx = 0.0;
  double r_rx = 0.0;
  double sum = 0.0;
};

// Linear ratios. Beams carry no norm constraint; power enters only through LinkPowers.

double snr_tx(const LinkContext& ctx, const CVector& f);
double snr_rx(const LinkContext& ctx, const CVector& w);
/// P_bs |w^H H f|^2 / N_bs.
double inr_rx(const LinkContext& ctx, const CVector& f, const CVector& w);
/// P_ue |h_cl|^2 / N_ue. Independent of both beams.
double inr_tx(const LinkContext& ctx);
/// P_bs |w^H c|^2 / N_bs for a precomputed coupled vector c = H f.
double inr_rx_coupled(const LinkContext& ctx, const CVector& coupled, const CVector& w);

SpectralEfficiency sum_spectral_efficiency(const LinkContext& ctx, const CVector& f,
                                           const CVector& w);

/// Rates from already-evaluated link terms; the single formula every caller shares.
SpectralEfficiency spectral_efficiency_from_terms(const LinkSnrs& snrs, const LinkInrs& inrs);

double snr_tx(const FdLink& link);
double snr_rx(const FdLink& link);
double inr_rx(const FdLink& link);
double inr_tx(const FdLink& link);
SpectralEfficiency sum_spectral_efficiency(const FdLink& link);

/// Same four metrics in dB (clamped at kDbFloor).
struct LinkMetricsDb {
  double snr_tx_db = 0.0;
  double snr_rx_db = 0.0;
  double inr_tx_db = 0.0;
  double inr_rx_db = 0.0;
};
LinkMetricsDb link_metrics_db(const FdLink& link);

}  // namespace duplexforge
