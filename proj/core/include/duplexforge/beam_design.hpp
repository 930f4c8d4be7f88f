// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "duplexforge/arrays.hpp"
#include "duplexforge/fd_link.hpp"

namespace duplexforge {

/// Finite candidate sets for the transmit and receive beams.
struct BeamSearchSpace {
  Codebook tx_candidates;
  Codebook rx_candidates;

  /// Throws DomainError if a side is empty, DimensionError if lengths do not match `ctx`.
  void validate(const LinkContext& ctx) const;
};

struct BeamDesignResult {
  BeamWeights f;
  BeamWeights w;
  std::size_t tx_index = 0;
  std::size_t rx_index = 0;
  SpectralEfficiency se;
  double sum_se = 0.0;
  std::size_t evaluations = 0;
  /// Alternating search only: sum SE at the start and after every half-step.
  std::vector<double> trace;
  std::size_t rounds = 0;
};

struct ExhaustiveOptions {
  std::size_t max_evaluations = 10'000'000;
  /// Workers split the transmit candidates; the result does not depend on this.
  std::size_t threads = 1;
};

/// Global optimum of R_tx(f) + R_rx(f, w) over the two finite sets.
/// Ties go to the lowest tx index, then the lowest rx index.
BeamDesignResult exhaustive_beam_search(const BeamSearchSpace& space, const LinkContext& ctx,
                                        const ExhaustiveOptions& options = {});

struct AlternatingOptions {
  std::size_t max_rounds = 50;
  /// Starting indices. Defaults to the SNR-greedy pair (best snr_tx, best snr_rx).
  std::optional<std::size_t> initial_tx;
  std::optional<std::size_t> initial_rx;
};

/// Coordinate ascent: best w for the current f, then best f for that w, until a full
/// round changes nothing. The current beam is kept on ties, so the trace never decreases.
BeamDesignResult alternating_beam_search(const BeamSearchSpace& space, const LinkContext& ctx,
                                         const AlternatingOptions& options = {});

}  // namespace duplexforge
