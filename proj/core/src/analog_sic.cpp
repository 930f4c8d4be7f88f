// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#include "duplexforge/analog_sic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "duplexforge/errors.hpp"
#include "duplexforge/units.hpp"

namespace duplexforge {

namespace {

constexpr double kMaxCondition = 1e12;
constexpr double kRidgeScale = 1e-9;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = kPi * x;
  return std::sin(px) / px;
}

}  // namespace

TapResponseMatrix ideal_tap_matrix(const FirFilterSpec& spec, double sample_period,
                                   std::size_t samples) {
  if (spec.n_taps == 0) throw ConfigError("FIR canceller needs at least one tap");
  if (!(spec.tap_delay > 0.0) || !(sample_period > 0.0)) {
    throw ConfigError("tap delay and sample period must be positive");
  }
  if (samples == 0) throw ConfigError("tap responses need at least one sample");

  const double step = spec.tap_delay / sample_period;
  const double whole = std::round(step);
  const bool fractional = std::abs(step - whole) > 1e-9 * std::max(1.0, step);
  // Every tap must land inside the record, or its column is zero and A^H A is singular.
  if (static_cast<double>(spec.n_taps - 1) * step >= static_cast<double>(samples)) {
    throw ConfigError("tap span exceeds the " + std::to_string(samples) + "-sample window");
  }

  TapResponseMatrix out;
  out.sample_period = sample_period;
  out.fractional_delay = fractional;
  const auto t_len = static_cast<Eigen::Index>(samples);
  const auto k_len = static_cast<Eigen::Index>(spec.n_taps);
  out.columns = CMatrix::Zero(t_len, k_len);

  if (!fractional) {
    for (Eigen::Index i = 0; i < k_len; ++i) {
      const double at = static_cast<double>(i) * whole;
      if (at < static_cast<double>(samples)) out.columns(static_cast<Eigen::Index>(at), i) = 1.0;
    }
    return out;
  }

  const double span = static_cast<double>(spec.n_taps - 1) * step;
  const double bulk = std::max(0.0, std::floor((static_cast<double>(samples) - 1.0 - span) / 2.0));
  for (Eigen::Index i = 0; i < k_len; ++i) {
    const double delay = bulk + static_cast<double>(i) * step;
    for (Eigen::Index t = 0; t < t_len; ++t) {
      out.columns(t, i) = sinc(static_cast<double>(t) - delay);
    }
  }
  return out;
}

SicFit ls_tap_weights(const CVector& y, const TapResponseMatrix& taps) {
  const CMatrix& a = taps.columns;
  if (y.size() == 0) throw DomainError("no SI samples to fit");
  if (a.cols() == 0) throw DimensionError("tap response matrix has no columns");
  if (a.rows() != y.size()) {
    throw DimensionError("SI record has " + std::to_string(y.size()) +
                         " samples but tap responses have " + std::to_string(a.rows()));
  }
  if (!y.allFinite() || !a.allFinite()) throw DomainError("SIC inputs must be finite");

  SicFit fit;
  CMatrix gram = a.adjoint() * a;
  const CVector rhs = a.adjoint() * y;

  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxCondition) {
    const double trace = gram.trace().real();
    double eps = kRidgeScale * trace / static_cast<double>(a.cols());
    if (!(eps > 0.0)) eps = kRidgeScale;  // all-zero A
    gram.diagonal().array() += eps;
    fit.regularized = true;
  }

  const Eigen::LLT<CMatrix> chol(gram);
  if (chol.info() != Eigen::Success) throw NumericalError("tap Gram matrix factorization failed");
  fit.weights = -chol.solve(rhs);
  if (!fit.weights.allFinite()) throw NumericalError("tap weight solve produced non-finite values");

  const double y_energy = y.squaredNorm();
  CVector residual = y + a * fit.weights;
  if (residual.squaredNorm() > y_energy) {
    // Rounding left the solve worse than doing nothing; x = 0 is then the better fit.
    fit.weights.setZero();
    residual = y;
  }
  const double r_energy = residual.squaredNorm();
  fit.residual_power_db = linear_to_db_clamped(r_energy / static_cast<double>(y.size()));
  if (y_energy == 0.0) {
    fit.cancellation_db = 0.0;
  } else if (r_energy == 0.0) {
    fit.cancellation_db = kDbCeiling;
  } else {
    fit.cancellation_db = std::min(kDbCeiling, linear_to_db(y_energy / r_energy));
  }
  return fit;
}

CVector apply_sic(const CVector& y, const TapResponseMatrix& taps, const SicFit& fit) {
  if (taps.columns.rows() != y.size() || taps.columns.cols() != fit.weights.size()) {
    throw DimensionError("apply_sic: sample or tap count mismatch");
  }
  return y + taps.columns * fit.weights;
}

}  // namespace duplexforge
