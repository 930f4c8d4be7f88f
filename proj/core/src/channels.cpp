// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#include "duplexforge/channels.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "duplexforge/errors.hpp"
#include "duplexforge/random.hpp"
#include "duplexforge/units.hpp"

namespace duplexforge {

void ArrayPose::validate() const {
  if (!translation.allFinite() || !rotation.allFinite()) {
    throw GeometryError("array pose must be finite");
  }
  const double err = (rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (err > 1e-9) throw GeometryError("array pose rotation is not orthonormal");
}

ArrayPose ArrayPose::inverse() const {
  ArrayPose inv;
  inv.rotation = rotation.transpose();
  inv.translation = -(inv.rotation * translation);
  return inv;
}

Mat3 ArrayPose::rotation_from_euler_deg(double rx, double ry, double rz) {
  using Eigen::AngleAxisd;
  return (AngleAxisd(deg_to_rad(rx), Vec3::UnitX()) * AngleAxisd(deg_to_rad(ry), Vec3::UnitY()) *
          AngleAxisd(deg_to_rad(rz), Vec3::UnitZ()))
      .toRotationMatrix();
}

ArrayPose ArrayPose::side_by_side(double separation) {
  ArrayPose p;
  p.translation = Vec3(separation, 0.0, 0.0);
  return p;
}

UserChannel los_user_channel(const ArrayGeometry& geometry, const Direction& dir, double gain_db) {
  UserChannel ch;
  ch.coefficients = db_to_amplitude(gain_db) * steering_vector(geometry, dir);
  std::ostringstream desc;
  desc << "los az=" << dir.azimuth_deg() << " el=" << dir.elevation_deg() << " gain_db=" << gain_db;
  ch.description = desc.str();
  return ch;
}

SiChannel spherical_wave_si_channel(const ArrayGeometry& tx, const ArrayGeometry& rx,
                                    const ArrayPose& pose, double rho) {
  pose.validate();
  if (!std::isfinite(rho)) throw DomainError("rho must be finite");
  SiChannel si;
  si.model = SiModel::spherical_wave;
  si.matrix.resize(static_cast<Eigen::Index>(rx.size()), static_cast<Eigen::Index>(tx.size()));
  for (std::size_t m = 0; m < rx.size(); ++m) {
    const Vec3 rx_pos = pose.rotation * rx.position(m) + pose.translation;
    for (std::size_t n = 0; n < tx.size(); ++n) {
      const double r = (rx_pos - tx.position(n)).norm();
      if (!(r > 0.0)) {
        throw GeometryError("rx element " + std::to_string(m) + " coincides with tx element " +
                            std::to_string(n));
      }
      si.matrix(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) =
          std::polar(rho / r, -kTwoPi * r);
    }
  }
  return si;
}

SiChannel rayleigh_si_channel(std::size_t n_rx, std::size_t n_tx, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  SiChannel si;
  si.model = SiModel::rayleigh;
  si.matrix.resize(static_cast<Eigen::Index>(n_rx), static_cast<Eigen::Index>(n_tx));
  // Column-major fill order is part of the reproducibility contract.
  for (Eigen::Index n = 0; n < si.matrix.cols(); ++n) {
    for (Eigen::Index m = 0; m < si.matrix.rows(); ++m) {
      const double re = normal(rng);
      const double im = normal(rng);
      si.matrix(m, n) = {re, im};
    }
  }
  return si;
}

SiChannel custom_si_channel(CMatrix matrix) {
  if (!matrix.allFinite()) throw DomainError("SI channel entries must be finite");
  return {std::move(matrix), SiModel::custom};
}

std::vector<double> sample_inr_db(const LogNormalInrModel& model, std::size_t n,
                                  std::uint64_t seed) {
  if (n == 0) throw DomainError("need at least one INR draw");
  if (!(model.sigma_db >= 0.0) || !std::isfinite(model.mu_db)) {
    throw DomainError("log-normal INR model needs finite mu and sigma >= 0");
  }
  Rng rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& v : out) v = model.mu_db + model.sigma_db * z(rng);
  return out;
}

CrossLinkChannel cross_link_channel(double gain_db, std::uint64_t seed) {
  if (std::isnan(gain_db) || gain_db == std::numeric_limits<double>::infinity()) {
    throw DomainError("cross-link gain must be finite or -inf");
  }
  Rng rng(seed);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  const double theta = phase(rng);
  return {std::polar(db_to_amplitude(gain_db), theta)};
}

}  // namespace duplexforge
