// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "duplexforge/arrays.hpp"
#include "duplexforge/channels.hpp"

namespace duplexforge {

/// Directions a codebook must cover, one per beam, on a given array.
struct CoverageSpec {
  ArrayGeometry geometry;
  std::vector<Direction> directions;

  std::size_t n_elements() const { return geometry.size(); }
  std::size_t n_beams() const { return directions.size(); }
  /// N x M steering matrix; column j pairs with codebook beam j.
  CMatrix matrix() const;
};

struct CodebookDesignConfig {
  double sigma2_tx = 0.1;
  double sigma2_rx = 0.1;
  std::size_t max_iters = 200;
  double tolerance = 1e-6;
  /// Realizable weights. phase_bits = 0 designs over continuous unit-modulus phases.
  PhaseShifterSpec spec{};

  void validate() const;
};

struct CodebookDesignResult {
  Codebook F;
  Codebook W;
  /// |W^H H F|_F^2 at initialization and after each accepted outer iteration. With a
  /// quantized spec the last entry is the value after the final projection.
  std::vector<double> objective_trace;
  double coverage_tx = 0.0;
  double coverage_rx = 0.0;
  /// Both coverage budgets hold for the returned codebooks.
  bool feasible = true;
  /// The projected conjugate codebooks were returned because nothing better was feasible.
  bool baseline_fallback = false;
  /// Objective change (dB) caused by the final projection; 0 for continuous phases.
  double quantization_jump_db = 0.0;
  std::size_t iterations = 0;
  /// Human-readable notes on constraint violations and fallbacks; empty when clean.
  std::string report;
};

/// |N 1 - diag(A^H X)|^2, i.e. how far each beam's gain toward its own coverage direction is
/// from the full array gain N.
double coverage_variance(const Codebook& codebook, const CoverageSpec& coverage);
double coverage_variance(const CMatrix& codebook, const CMatrix& coverage);

/// 10 log10(|W^H H F|_F^2 / (M_tx M_rx)), floored at kDbFloor.
double average_coupling_db(const Codebook& F, const Codebook& W, const SiChannel& H);
double average_coupling_db(const CMatrix& F, const CMatrix& W, const CMatrix& H);

/// Transmit and receive codebooks with low average self-interference coupling subject to
/// the coverage-variance budgets sigma2 * N^2 * M and per-entry realizability.
///
/// Alternates between the two codebooks. Each half-step solves, per column, the
/// regularized least-squares problem
///     min |B f|^2 + lambda |N - a^H f|^2 + mu |f - f_prev|^2
/// (B = W^H H for the transmit side), projects onto unit modulus and keeps the result only
/// if it stays within the coverage budget and does not raise the objective. lambda doubles
/// after a coverage violation and halves while there is slack; mu doubles after a rejected
/// objective increase. A quantized spec is applied at the end; if the projection breaks a
/// budget the design is repeated with tighter internal budgets before falling back to the
/// projected conjugate codebooks.
CodebookDesignResult design_codebooks(const SiChannel& H, const CoverageSpec& cov_tx,
                                      const CoverageSpec& cov_rx,
                                      const CodebookDesignConfig& config = {});

}  // namespace duplexforge
