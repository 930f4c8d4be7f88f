// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#include "duplexforge/units.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace duplexforge {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double linear_to_db_clamped(double linear) {
  if (!(linear > 0.0)) return kDbFloor;
  return std::clamp(linear_to_db(linear), kDbFloor, kDbCeiling);
}

double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }

double log2_1p(double x) {
  // log1p keeps full relative precision below 1e-8 where log2(1 + x) collapses to 0.
  return std::log1p(x) / std::numbers::ln2;
}

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

double wrap_deg(double deg) {
  double w = std::fmod(deg + 180.0, 360.0);
  if (w < 0.0) w += 360.0;
  return w - 180.0;
}

}  // namespace duplexforge
