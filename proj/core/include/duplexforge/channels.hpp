// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "duplexforge/arrays.hpp"
#include "duplexforge/linalg.hpp"

namespace duplexforge {

struct UserChannel {
  CVector coefficients;
  std::string description;
};

struct CrossLinkChannel {
  cplx coefficient{0.0, 0.0};
};

enum class SiModel { spherical_wave, rayleigh, custom };

/// N_rx x N_tx self-interference channel between the transmit and receive arrays.
struct SiChannel {
  CMatrix matrix;
  SiModel model = SiModel::custom;

  std::size_t n_rx() const { return static_cast<std::size_t>(matrix.rows()); }
  std::size_t n_tx() const { return static_cast<std::size_t>(matrix.cols()); }
};

/// Placement of the receive array frame relative to the transmit array frame (wavelengths).
/// A receive element at local position p sits at rotation * p + translation.
struct ArrayPose {
  Vec3 translation = Vec3::Zero();
  Mat3 rotation = Mat3::Identity();

  /// Throws GeometryError if the rotation is not orthonormal or anything is non-finite.
  void validate() const;
  ArrayPose inverse() const;

  /// Rotation from intrinsic x-y-z Euler angles in degrees.
  static Mat3 rotation_from_euler_deg(double rx, double ry, double rz);
  /// Two coplanar panels side by side, rx offset 10 wavelengths along x.
  static ArrayPose side_by_side(double separation = 10.0);
};

struct LogNormalInrModel {
  double mu_db = 20.0;
  double sigma_db = 10.0;
};

/// LOS ray: 10^(gain_db/20) * steering_vector(dir), so the matched beam sees gain N.
UserChannel los_user_channel(const ArrayGeometry& geometry, const Direction& dir, double gain_db);

/// H[m, n] = rho / r_mn * exp(-j 2 pi r_mn), r_mn the rx-m to tx-n distance in wavelengths.
SiChannel spherical_wave_si_channel(const ArrayGeometry& tx, const ArrayGeometry& rx,
                                    const ArrayPose& pose, double rho = 1.0);

/// i.i.d. CN(0, 1) entries.
SiChannel rayleigh_si_channel(std::size_t n_rx, std::size_t n_tx, std::uint64_t seed);

/// Wraps a user-supplied matrix.
SiChannel custom_si_channel(CMatrix matrix);

/// mu_db + sigma_db * z with z standard normal.
std::vector<double> sample_inr_db(const LogNormalInrModel& model, std::size_t n, std::uint64_t seed);

/// Magnitude 10^(gain/20) with a uniform random phase. gain = -inf gives 0.
CrossLinkChannel cross_link_channel(double gain_db, std::uint64_t seed);

}  // namespace duplexforge
