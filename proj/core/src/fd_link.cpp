// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#include "duplexforge/fd_link.hpp"

#include <string>

#include "duplexforge/errors.hpp"
#include "duplexforge/units.hpp"

namespace duplexforge {

namespace {

void require_length(const CVector& v, std::size_t n, const char* what) {
  if (static_cast<std::size_t>(v.size()) != n) {
    throw DimensionError(std::string(what) + " has " + std::to_string(v.size()) +
                         " entries, expected " + std::to_string(n));
  }
}

// P_tx / P_noise with both in dBm.
double power_ratio(double p_dbm, double noise_dbm) { return db_to_linear(p_dbm - noise_dbm); }

}  // namespace

void LinkContext::validate() const {
  if (si.n_rx() != n_rx() || si.n_tx() != n_tx()) {
    throw DimensionError("SI channel is " + std::to_string(si.n_rx()) + "x" +
                         std::to_string(si.n_tx()) + " but the arrays are " +
                         std::to_string(n_rx()) + "x" + std::to_string(n_tx()));
  }
}

double snr_tx(const LinkContext& ctx, const CVector& f) {
  require_length(f, ctx.n_tx(), "transmit beam");
  return power_ratio(ctx.powers.p_bs_dbm, ctx.powers.n_ue_dbm) *
         std::norm(ctx.h_tx.coefficients.dot(f));
}

double snr_rx(const LinkContext& ctx, const CVector& w) {
  require_length(w, ctx.n_rx(), "receive beam");
  return power_ratio(ctx.powers.p_ue_dbm, ctx.powers.n_bs_dbm) *
         std::norm(w.dot(ctx.h_rx.coefficients));
}

double inr_rx(const LinkContext& ctx, const CVector& f, const CVector& w) {
  ctx.validate();
  require_length(f, ctx.n_tx(), "transmit beam");
  require_length(w, ctx.n_rx(), "receive beam");
  return inr_rx_coupled(ctx, ctx.si.matrix * f, w);
}

double inr_rx_coupled(const LinkContext& ctx, const CVector& coupled, const CVector& w) {
  return power_ratio(ctx.powers.p_bs_dbm, ctx.powers.n_bs_dbm) * std::norm(w.dot(coupled));
}

double inr_tx(const LinkContext& ctx) {
  return power_ratio(ctx.powers.p_ue_dbm, ctx.powers.n_ue_dbm) * std::norm(ctx.h_cl.coefficient);
}

SpectralEfficiency spectral_efficiency_from_terms(const LinkSnrs& snrs, const LinkInrs& inrs) {
  const RatePoint r = rate_fd(snrs, inrs);
  return {r.r_tx, r.r_rx, r.r_tx + r.r_rx};
}

SpectralEfficiency sum_spectral_efficiency(const LinkContext& ctx, const CVector& f,
                                           const CVector& w) {
  return spectral_efficiency_from_terms({snr_tx(ctx, f), snr_rx(ctx, w)},
                                        {inr_tx(ctx), inr_rx(ctx, f, w)});
}

double snr_tx(const FdLink& link) { return snr_tx(link.context, link.f.weights); }
double snr_rx(const FdLink& link) { return snr_rx(link.context, link.w.weights); }
double inr_rx(const FdLink& link) { return inr_rx(link.context, link.f.weights, link.w.weights); }
double inr_tx(const FdLink& link) { return inr_tx(link.context); }

SpectralEfficiency sum_spectral_efficiency(const FdLink& link) {
  return sum_spectral_efficiency(link.context, link.f.weights, link.w.weights);
}

LinkMetricsDb link_metrics_db(const FdLink& link) {
  return {linear_to_db_clamped(snr_tx(link)), linear_to_db_clamped(snr_rx(link)),
          linear_to_db_clamped(inr_tx(link)), linear_to_db_clamped(inr_rx(link))};
}

}  // namespace duplexforge
