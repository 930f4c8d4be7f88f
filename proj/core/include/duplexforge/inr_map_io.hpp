// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#pragma once

#include <iosfwd>
#include <optional>

#include "duplexforge/steer.hpp"

namespace duplexforge {

// CSV grid of a measured (or simulated) neighborhood:
//
//   tx_dtheta,tx_dphi,rx_dtheta,rx_dphi,inr_db
//   0,0,0,0,12.5
//   ...
//
// Offsets are in degrees relative to the initial directions. Rows may come in any order but
// every lattice pair must be present exactly once.

/// Writes rows in neighborhood-offset rank order (tx outer, rx inner), 9 significant digits.
void write_inr_map_csv(std::ostream& out, const InrGridMap& map);

/// Reads a grid. Without `spec`, the neighborhood size and resolution are inferred from the
/// offsets present. Throws ConfigError on malformed rows, duplicates or missing pairs.
InrGridMap read_inr_map_csv(std::istream& in, std::optional<NeighborhoodSpec> spec = std::nullopt);

}  // namespace duplexforge
