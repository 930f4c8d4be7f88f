// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#pragma once

namespace duplexforge {

// Reports never carry -inf: zero powers print as this floor.
inline constexpr double kDbFloor = -300.0;
// Mirror ceiling used for cancellation ratios with an exactly-zero residual.
inline constexpr double kDbCeiling = 300.0;

/// Power ratio in dB to linear. -inf maps to 0.
double db_to_linear(double db);

/// Linear power ratio to dB, unclamped (0 -> -inf).
double linear_to_db(double linear);

/// Linear power ratio to dB, clamped into [kDbFloor, kDbCeiling].
double linear_to_db_clamped(double linear);

/// Amplitude scale corresponding to a power gain in dB, 10^(db/20).
double db_to_amplitude(double db);

/// log2(1 + x), accurate for tiny x.
double log2_1p(double x);

double deg_to_rad(double deg);
double rad_to_deg(double rad);

/// Wraps an angle in degrees into [-180, 180).
double wrap_deg(double deg);

}  // namespace duplexforge
