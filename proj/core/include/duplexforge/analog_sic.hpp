// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#pragma once

#include <cstddef>

#include "duplexforge/linalg.hpp"

namespace duplexforge {

/// N-tap analog FIR canceller with a uniform tap delay.
struct FirFilterSpec {
  std::size_t n_taps = 1;
  double tap_delay = 1.0;  // seconds
};

/// T x K matrix: column i is the measured (or synthesized) impulse response of tap i.
struct TapResponseMatrix {
  CMatrix columns;
  double sample_period = 1.0;
  /// Set when the tap delay is not a whole number of samples and the columns are sinc pulses.
  bool fractional_delay = false;

  std::size_t samples() const { return static_cast<std::size_t>(columns.rows()); }
  std::size_t taps() const { return static_cast<std::size_t>(columns.cols()); }
};

struct SicFit {
  CVector weights;
  double residual_power_db = 0.0;  // 10 log10(|r|^2 / T)
  double cancellation_db = 0.0;    // 10 log10(|y|^2 / |r|^2), >= 0
  /// The Gram matrix was ill-conditioned and a ridge term was added.
  bool regularized = false;
};

/// Columns are unit impulses delayed by i * tap_delay.
///
/// Integer delays (in samples) give exact impulses starting at sample 0. Fractional delays
/// give truncated sinc pulses; the tap span is then centred in the window with an integer
/// bulk latency so that both tails of every pulse are kept.
/// The span (n_taps - 1) * tap_delay must fall inside the window (ConfigError otherwise).
TapResponseMatrix ideal_tap_matrix(const FirFilterSpec& spec, double sample_period,
                                   std::size_t samples);

/// Least-squares weights that reconstruct an inverted copy of `y`:
/// x = -(A^H A)^-1 A^H y, residual r = y + A x.
///
/// When cond(A^H A) > 1e12 the Gram matrix is loaded with 1e-9 * trace / K.
SicFit ls_tap_weights(const CVector& y, const TapResponseMatrix& taps);

/// y + A x.
CVector apply_sic(const CVector& y, const TapResponseMatrix& taps, const SicFit& fit);

}  // namespace duplexforge
