// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#include "duplexforge/arrays.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "duplexforge/errors.hpp"
#include "duplexforge/units.hpp"

namespace duplexforge {

ArrayGeometry::ArrayGeometry(std::vector<Vec3> positions) : positions_(std::move(positions)) {
  if (positions_.empty()) throw GeometryError("array needs at least one element");
  for (const auto& p : positions_) {
    if (!p.allFinite()) throw GeometryError("array element position is not finite");
  }
}

ArrayGeometry ArrayGeometry::uniform_linear(std::size_t n, double spacing) {
  return uniform_planar(1, n, spacing);
}

ArrayGeometry ArrayGeometry::uniform_planar(std::size_t rows, std::size_t cols, double spacing) {
  if (rows == 0 || cols == 0) throw GeometryError("array needs at least one element");
  std::vector<Vec3> pos;
  pos.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      pos.emplace_back(static_cast<double>(c) * spacing, 0.0, static_cast<double>(r) * spacing);
    }
  }
  return ArrayGeometry(std::move(pos));
}

Direction::Direction(double azimuth_deg, double elevation_deg)
    : azimuth_deg_(azimuth_deg), elevation_deg_(elevation_deg) {
  if (!(azimuth_deg >= -180.0 && azimuth_deg < 180.0)) {
    throw DomainError("azimuth must lie in [-180, 180), got " + std::to_string(azimuth_deg));
  }
  if (!(elevation_deg >= -90.0 && elevation_deg <= 90.0)) {
    throw DomainError("elevation must lie in [-90, 90], got " + std::to_string(elevation_deg));
  }
}

Direction Direction::offset(double d_azimuth_deg, double d_elevation_deg) const {
  return {wrap_deg(azimuth_deg_ + d_azimuth_deg),
          std::clamp(elevation_deg_ + d_elevation_deg, -90.0, 90.0)};
}

Vec3 Direction::unit_vector() const {
  const double az = deg_to_rad(azimuth_deg_);
  const double el = deg_to_rad(elevation_deg_);
  return {std::cos(el) * std::sin(az), std::cos(el) * std::cos(az), std::sin(el)};
}

void PhaseShifterSpec::validate() const {
  if (phase_bits < 0 || phase_bits > 30) throw DomainError("phase_bits must lie in [0, 30]");
  if (amplitude_bits < 0 || amplitude_bits > 30) {
    throw DomainError("amplitude_bits must lie in [0, 30]");
  }
  for (double l : amplitude_levels_db) {
    if (!std::isfinite(l) || l < 0.0) {
      throw DomainError("attenuation levels must be finite and >= 0 dB");
    }
  }
}

std::vector<double> PhaseShifterSpec::amplitude_levels() const {
  std::vector<double> levels;
  if (!amplitude_levels_db.empty()) {
    for (double l : amplitude_levels_db) levels.push_back(db_to_amplitude(-l));
  } else if (amplitude_bits > 0) {
    // Uniform linear steps in (0, 1].
    const int n = 1 << amplitude_bits;
    for (int k = 1; k <= n; ++k) levels.push_back(static_cast<double>(k) / n);
  } else {
    levels.push_back(1.0);
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  return levels;
}

CMatrix Codebook::matrix() const {
  const auto n = static_cast<Eigen::Index>(n_elements());
  CMatrix out(n, static_cast<Eigen::Index>(beams.size()));
  for (std::size_t i = 0; i < beams.size(); ++i) {
    if (beams[i].weights.size() != n) throw DimensionError("codebook beams differ in length");
    out.col(static_cast<Eigen::Index>(i)) = beams[i].weights;
  }
  return out;
}

Codebook Codebook::from_matrix(const CMatrix& columns, WeightConstraint constraint,
                               std::vector<Direction> labels) {
  Codebook cb;
  cb.beams.reserve(static_cast<std::size_t>(columns.cols()));
  for (Eigen::Index i = 0; i < columns.cols(); ++i) {
    cb.beams.push_back({columns.col(i), constraint});
  }
  cb.labels = std::move(labels);
  return cb;
}

CVector steering_vector(const ArrayGeometry& geometry, const Direction& dir) {
  const Vec3 u = dir.unit_vector();
  CVector a(static_cast<Eigen::Index>(geometry.size()));
  for (std::size_t m = 0; m < geometry.size(); ++m) {
    a(static_cast<Eigen::Index>(m)) = std::polar(1.0, kTwoPi * u.dot(geometry.position(m)));
  }
  return a;
}

CMatrix steering_matrix(const ArrayGeometry& geometry, std::span<const Direction> dirs) {
  CMatrix out(static_cast<Eigen::Index>(geometry.size()), static_cast<Eigen::Index>(dirs.size()));
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    out.col(static_cast<Eigen::Index>(i)) = steering_vector(geometry, dirs[i]);
  }
  return out;
}

std::vector<double> phase_set(const PhaseShifterSpec& spec) {
  spec.validate();
  if (spec.phase_bits < 1) throw DomainError("phase_set needs phase_bits >= 1");
  const long n = 1L << spec.phase_bits;
  std::vector<double> out(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = static_cast<double>(i) * kTwoPi / static_cast<double>(n);
  }
  return out;
}

namespace {

double nearest_level(const std::vector<double>& levels, double magnitude) {
  auto it = std::lower_bound(levels.begin(), levels.end(), magnitude);
  if (it == levels.end()) return levels.back();
  if (it == levels.begin()) return *it;
  const double hi = *it;
  const double lo = *std::prev(it);
  return (magnitude - lo <= hi - magnitude) ? lo : hi;
}

}  // namespace

ProjectedWeights project_weights(const CVector& raw, const WeightConstraint& constraint) {
  if (!raw.allFinite()) throw DomainError("beam weights must be finite");
  ProjectedWeights out;
  out.beam.constraint = constraint;
  if (!constraint) {
    out.beam.weights = raw;
    return out;
  }
  const PhaseShifterSpec& spec = *constraint;
  spec.validate();

  const std::vector<double> levels = spec.amplitude_levels();
  const long n_phases = spec.quantized_phase() ? (1L << spec.phase_bits) : 0;

  out.beam.weights.resize(raw.size());
  for (Eigen::Index m = 0; m < raw.size(); ++m) {
    const double mag = std::abs(raw(m));
    double phase = 0.0;
    if (mag == 0.0) {
      out.zero_entries.push_back(static_cast<std::size_t>(m));
    } else if (n_phases > 0) {
      // Rounding the phase index is the circular nearest neighbour, including across 0/2pi.
      const double step = kTwoPi / static_cast<double>(n_phases);
      long k = std::lround(std::arg(raw(m)) / step) % n_phases;
      if (k < 0) k += n_phases;
      phase = static_cast<double>(k) * kTwoPi / static_cast<double>(n_phases);
    } else {
      phase = std::arg(raw(m));
    }
    const double level = mag == 0.0 ? levels.back() : nearest_level(levels, mag);
    out.beam.weights(m) = std::polar(level, phase);
  }
  return out;
}

Codebook conjugate_codebook(const ArrayGeometry& geometry, std::span<const Direction> directions,
                            const WeightConstraint& constraint) {
  if (directions.empty()) throw DomainError("codebook needs at least one direction");
  Codebook cb;
  for (const auto& d : directions) {
    cb.beams.push_back(project_weights(steering_vector(geometry, d), constraint).beam);
    cb.labels.push_back(d);
  }
  return cb;
}

double beamforming_gain_db(const CVector& weights, const ArrayGeometry& geometry,
                           const Direction& dir) {
  if (static_cast<std::size_t>(weights.size()) != geometry.size()) {
    throw DimensionError("beam has " + std::to_string(weights.size()) + " weights for a " +
                         std::to_string(geometry.size()) + "-element array");
  }
  const cplx response = steering_vector(geometry, dir).dot(weights);
  return linear_to_db_clamped(std::norm(response));
}

double beamforming_gain_db(const BeamWeights& weights, const ArrayGeometry& geometry,
                           const Direction& dir) {
  return beamforming_gain_db(weights.weights, geometry, dir);
}

std::vector<Direction> azimuth_sweep(double first_deg, double last_deg, std::size_t count,
                                     double elevation_deg) {
  std::vector<Direction> out;
  if (count == 0) return out;
  if (count == 1) {
    out.emplace_back(wrap_deg(0.5 * (first_deg + last_deg)), elevation_deg);
    return out;
  }
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    out.emplace_back(wrap_deg(first_deg + t * (last_deg - first_deg)), elevation_deg);
  }
  return out;
}

}  // namespace duplexforge
