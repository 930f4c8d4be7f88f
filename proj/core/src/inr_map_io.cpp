// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#include "duplexforge/inr_map_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "duplexforge/errors.hpp"

namespace duplexforge {

namespace {

constexpr const char* kHeader = "tx_dtheta,tx_dphi,rx_dtheta,rx_dphi,inr_db";

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, std::size_t line) {
  const std::string t = trim(text);
  if (t == "-inf") return -INFINITY;
  if (t == "inf") return INFINITY;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("INR map line " + std::to_string(line) + ": '" + t + "' is not a number");
  }
  return v;
}

// Smallest positive spacing among the magnitudes, or 1 when only zero is present.
double infer_resolution(const std::set<double>& mags) {
  double res = 0.0;
  for (double v : mags) {
    if (v > 0.0) {
      res = v;
      break;
    }
  }
  return res > 0.0 ? res : 1.0;
}

}  // namespace

void write_inr_map_csv(std::ostream& out, const InrGridMap& map) {
  out << kHeader << '\n';
  const auto offsets = neighborhood_offsets(map.spec());
  for (const auto& t : offsets) {
    for (const auto& r : offsets) {
      out << fmt9(t.dtheta_deg) << ',' << fmt9(t.dphi_deg) << ',' << fmt9(r.dtheta_deg) << ','
          << fmt9(r.dphi_deg) << ',' << fmt9(map.at(t, r)) << '\n';
    }
  }
}

InrGridMap read_inr_map_csv(std::istream& in, std::optional<NeighborhoodSpec> spec) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ConfigError("INR map is empty");
  ++line_no;
  if (trim(line) != kHeader) {
    throw ConfigError("INR map header must be '" + std::string(kHeader) + "'");
  }

  std::vector<std::array<double, 5>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::array<double, 5> row{};
    std::size_t start = 0;
    for (std::size_t k = 0; k < 5; ++k) {
      const auto comma = line.find(',', start);
      const bool last = k == 4;
      if (last != (comma == std::string::npos)) {
        throw ConfigError("INR map line " + std::to_string(line_no) + " needs 5 fields");
      }
      row[k] = parse_number(line.substr(start, last ? std::string::npos : comma - start), line_no);
      start = comma + 1;
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw ConfigError("INR map has no rows");

  if (!spec) {
    std::set<double> theta, phi;
    for (const auto& r : rows) {
      theta.insert(std::abs(r[0]));
      theta.insert(std::abs(r[2]));
      phi.insert(std::abs(r[1]));
      phi.insert(std::abs(r[3]));
    }
    spec = NeighborhoodSpec{*theta.rbegin(), *phi.rbegin(), infer_resolution(theta),
                            infer_resolution(phi)};
  }

  InrGridMap map(*spec);
  auto offset = [&](double dt, double dp, std::size_t row) {
    NeighborhoodOffset o;
    const double m = dt / spec->res_theta_deg;
    const double n = dp / spec->res_phi_deg;
    o.m = static_cast<int>(std::lround(m));
    o.n = static_cast<int>(std::lround(n));
    if (std::abs(m - o.m) > 1e-6 || std::abs(n - o.n) > 1e-6) {
      throw ConfigError("INR map row " + std::to_string(row) + " is off the offset lattice");
    }
    o.dtheta_deg = o.m * spec->res_theta_deg;
    o.dphi_deg = o.n * spec->res_phi_deg;
    return o;
  };

  std::set<std::array<int, 4>> seen;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const auto t = offset(r[0], r[1], i + 2);
    const auto x = offset(r[2], r[3], i + 2);
    if (!seen.insert({t.m, t.n, x.m, x.n}).second) {
      throw ConfigError("INR map row " + std::to_string(i + 2) + " duplicates an earlier pair");
    }
    try {
      map.set(t, x, r[4]);
    } catch (const DomainError& e) {
      throw ConfigError("INR map row " + std::to_string(i + 2) + ": " + e.what());
    }
  }
  if (!map.complete()) {
    throw ConfigError("INR map is missing " + std::to_string(map.size() - seen.size()) + " pairs");
  }
  return map;
}

}  // namespace duplexforge
