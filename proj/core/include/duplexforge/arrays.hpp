// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "duplexforge/linalg.hpp"

namespace duplexforge {

/// Element positions in wavelengths. The array faces +y: broadside is azimuth 0, elevation 0.
class ArrayGeometry {
 public:
  explicit ArrayGeometry(std::vector<Vec3> positions);

  /// `n` elements along +x with the given spacing; element 0 sits at the origin.
  static ArrayGeometry uniform_linear(std::size_t n, double spacing = 0.5);

  /// rows x cols elements in the x-z plane from the origin, row-major (row index runs along z).
  static ArrayGeometry uniform_planar(std::size_t rows, std::size_t cols, double spacing = 0.5);

  std::size_t size() const { return positions_.size(); }
  const std::vector<Vec3>& positions() const { return positions_; }
  const Vec3& position(std::size_t m) const { return positions_[m]; }

 private:
  std::vector<Vec3> positions_;
};

/// Azimuth in [-180, 180) and elevation in [-90, 90], degrees.
class Direction {
 public:
  Direction() = default;
  /// Throws DomainError outside the ranges above.
  Direction(double azimuth_deg, double elevation_deg);

  /// Shifts by (d_az, d_el): azimuth wraps, elevation saturates at +-90.
  Direction offset(double d_azimuth_deg, double d_elevation_deg) const;

  double azimuth_deg() const { return azimuth_deg_; }
  double elevation_deg() const { return elevation_deg_; }
  Vec3 unit_vector() const;

  bool operator==(const Direction&) const = default;

 private:
  double azimuth_deg_ = 0.0;
  double elevation_deg_ = 0.0;
};

/// Digitally controlled phase shifter (and optional attenuator).
///
/// phase_bits = 0 is the continuous-phase limit: any phase, still unit modulus unless an
/// amplitude set is configured.
struct PhaseShifterSpec {
  int phase_bits = 0;
  int amplitude_bits = 0;
  /// Explicit attenuation levels in dB (>= 0). Overrides amplitude_bits when non-empty.
  std::vector<double> amplitude_levels_db;

  void validate() const;
  bool quantized_phase() const { return phase_bits > 0; }
  /// Realizable magnitudes, ascending. {1} for phase-only control.
  std::vector<double> amplitude_levels() const;

  bool operator==(const PhaseShifterSpec&) const = default;
};

/// nullopt means no per-entry constraint at all.
using WeightConstraint = std::optional<PhaseShifterSpec>;

struct BeamWeights {
  CVector weights;
  WeightConstraint constraint;

  std::size_t size() const { return static_cast<std::size_t>(weights.size()); }
};

/// Ordered beams; column i of matrix() is beams[i].
struct Codebook {
  std::vector<BeamWeights> beams;
  std::vector<Direction> labels;

  std::size_t size() const { return beams.size(); }
  std::size_t n_elements() const { return beams.empty() ? 0 : beams.front().size(); }
  CMatrix matrix() const;
  /// Rebuilds a codebook from matrix columns, all tagged with `constraint`.
  static Codebook from_matrix(const CMatrix& columns, WeightConstraint constraint,
                              std::vector<Direction> labels = {});
};

/// a_m = exp(+j 2 pi <u(dir), p_m>).
CVector steering_vector(const ArrayGeometry& geometry, const Direction& dir);

/// Steering vectors as columns, one per direction.
CMatrix steering_matrix(const ArrayGeometry& geometry, std::span<const Direction> dirs);

/// {0, 2 pi / 2^b, ..., (2^b - 1) 2 pi / 2^b}. Throws DomainError unless b >= 1.
std::vector<double> phase_set(const PhaseShifterSpec& spec);

struct ProjectedWeights {
  BeamWeights beam;
  /// Entries that had zero magnitude under phase-only control; they were set to 1.
  std::vector<std::size_t> zero_entries;
};

/// Snaps every entry to the nearest realizable phase (circular distance) and magnitude.
ProjectedWeights project_weights(const CVector& raw, const WeightConstraint& constraint);

/// Matched beams toward each direction: beam i is the projection of steering_vector(dir_i),
/// the weight vector whose Hermitian product with the array response is maximal.
Codebook conjugate_codebook(const ArrayGeometry& geometry, std::span<const Direction> directions,
                            const WeightConstraint& constraint);

/// 10 log10 |a(dir)^H w|^2, floored at kDbFloor.
double beamforming_gain_db(const CVector& weights, const ArrayGeometry& geometry,
                           const Direction& dir);
double beamforming_gain_db(const BeamWeights& weights, const ArrayGeometry& geometry,
                           const Direction& dir);

/// `count` directions uniform in azimuth over [first, last] at a fixed elevation.
std::vector<Direction> azimuth_sweep(double first_deg, double last_deg, std::size_t count,
                                     double elevation_deg = 0.0);

}  // namespace duplexforge
