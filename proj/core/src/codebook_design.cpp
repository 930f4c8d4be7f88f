// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#include "duplexforge/codebook_design.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "duplexforge/errors.hpp"
#include "duplexforge/units.hpp"

namespace duplexforge {

namespace {

constexpr std::size_t kMaxTighten = 6;
constexpr std::size_t kPatience = 25;

// Slack for rounding in the budget comparison; keeps sigma2 = 0 meaning "exactly A".
double budget_of(double sigma2, const CMatrix& a) {
  const double n = static_cast<double>(a.rows());
  const double m = static_cast<double>(a.cols());
  return sigma2 * n * n * m;
}

bool within(double coverage, double budget, const CMatrix& a) {
  const double n = static_cast<double>(a.rows());
  const double m = static_cast<double>(a.cols());
  return coverage <= budget + 1e-12 * n * n * m;
}

double objective(const CMatrix& f, const CMatrix& w, const CMatrix& h) {
  return (w.adjoint() * h * f).squaredNorm();
}

CMatrix unit_modulus(const CMatrix& x) {
  CMatrix out(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      const cplx v = x(r, c);
      out(r, c) = std::abs(v) == 0.0 ? cplx(1.0, 0.0) : std::polar(1.0, std::arg(v));
    }
  }
  return out;
}

CMatrix project_columns(const CMatrix& x, const PhaseShifterSpec& spec) {
  CMatrix out(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    out.col(c) = project_weights(x.col(c), spec).beam.weights;
  }
  return out;
}

// One codebook being optimized: current columns, coverage matrix, budget and step controls.
struct Side {
  CMatrix x;
  CMatrix a;
  double budget = 0.0;
  bool fixed = false;
  double lambda = 1.0;
  double mu = 1.0;
};

// Candidate columns for one side given the Gram matrix of its "other side" operator.
CMatrix half_step(const Side& s, const CMatrix& gram) {
  const Eigen::Index n = s.x.rows();
  const double n_gain = static_cast<double>(n);
  CMatrix out(n, s.x.cols());
  for (Eigen::Index c = 0; c < s.x.cols(); ++c) {
    const CVector a = s.a.col(c);
    CMatrix lhs = gram + s.lambda * (a * a.adjoint());
    lhs.diagonal().array() += s.mu;
    const CVector rhs = s.lambda * n_gain * a + s.mu * s.x.col(c);
    out.col(c) = lhs.ldlt().solve(rhs);
  }
  return unit_modulus(out);
}

struct Design {
  CMatrix f;
  CMatrix w;
  std::vector<double> trace;
  std::size_t iterations = 0;
};

// Continuous-phase design under the given budgets. Every accepted iterate is feasible and
// no worse than its predecessor.
Design run_design(const CMatrix& h, const CMatrix& a_tx, const CMatrix& a_rx, double budget_tx,
                  double budget_rx, const CodebookDesignConfig& cfg) {
  Side tx{a_tx, a_tx, budget_tx, budget_tx <= 0.0};
  Side rx{a_rx, a_rx, budget_rx, budget_rx <= 0.0};

  Design d;
  double obj = objective(tx.x, rx.x, h);
  d.trace.push_back(obj);
  if (obj == 0.0 || (tx.fixed && rx.fixed)) {
    d.f = tx.x;
    d.w = rx.x;
    return d;
  }

  auto init_scales = [](Side& s, const CMatrix& gram) {
    const double n = static_cast<double>(s.x.rows());
    const double mean_eig = std::max(gram.trace().real() / n, 1e-300);
    s.lambda = mean_eig / n;
    s.mu = mean_eig;
  };
  init_scales(tx, (rx.x.adjoint() * h).adjoint() * (rx.x.adjoint() * h));
  init_scales(rx, (h * tx.x) * (h * tx.x).adjoint());

  // Returns true when the candidate was accepted.
  auto step = [&](Side& s, const CMatrix& gram, auto&& objective_with) {
    if (s.fixed) return true;
    const CMatrix cand = half_step(s, gram);
    const double cov = coverage_variance(cand, s.a);
    const double cand_obj = objective_with(cand);
    if (!within(cov, s.budget, s.a)) {
      s.lambda *= 2.0;
      return false;
    }
    if (cand_obj > obj) {
      s.mu *= 2.0;
      return false;
    }
    s.x = cand;
    obj = cand_obj;
    if (cov < 0.5 * s.budget) s.lambda *= 0.5;
    s.mu *= 0.5;
    return true;
  };

  std::size_t idle = 0;
  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    const double before = obj;

    const CMatrix b_tx = rx.x.adjoint() * h;  // M_rx x N_tx
    const bool ok_tx = step(tx, b_tx.adjoint() * b_tx,
                            [&](const CMatrix& f) { return objective(f, rx.x, h); });
    const CMatrix c_rx = h * tx.x;  // N_rx x M_tx; |W^H c_rx|^2 is the objective
    const bool ok_rx = step(rx, c_rx * c_rx.adjoint(),
                            [&](const CMatrix& w) { return objective(tx.x, w, h); });

    d.iterations = it + 1;
    const bool improved = obj < before;
    if (improved) d.trace.push_back(obj);
    idle = improved ? 0 : idle + 1;

    const double rel = before > 0.0 ? (before - obj) / before : 0.0;
    if (obj == 0.0) break;
    if (ok_tx && ok_rx && rel < cfg.tolerance) break;
    if (idle >= kPatience) break;
  }
  d.f = tx.x;
  d.w = rx.x;
  return d;
}

}  // namespace

CMatrix CoverageSpec::matrix() const { return steering_matrix(geometry, directions); }

void CodebookDesignConfig::validate() const {
  if (!(sigma2_tx >= 0.0) || !(sigma2_rx >= 0.0)) {
    throw ConfigError("coverage-variance budgets must be >= 0");
  }
  if (max_iters == 0) throw ConfigError("max_iters must be >= 1");
  if (!(tolerance >= 0.0)) throw ConfigError("tolerance must be >= 0");
  spec.validate();
}

double coverage_variance(const CMatrix& codebook, const CMatrix& coverage) {
  if (codebook.rows() != coverage.rows() || codebook.cols() != coverage.cols()) {
    throw DimensionError("codebook and coverage matrices differ in shape");
  }
  const double n = static_cast<double>(coverage.rows());
  double total = 0.0;
  for (Eigen::Index j = 0; j < coverage.cols(); ++j) {
    total += std::norm(n - coverage.col(j).dot(codebook.col(j)));
  }
  return total;
}

double coverage_variance(const Codebook& codebook, const CoverageSpec& coverage) {
  if (codebook.size() != coverage.n_beams()) {
    throw DimensionError("codebook has " + std::to_string(codebook.size()) + " beams but " +
                         std::to_string(coverage.n_beams()) + " coverage directions");
  }
  return coverage_variance(codebook.matrix(), coverage.matrix());
}

double average_coupling_db(const CMatrix& F, const CMatrix& W, const CMatrix& H) {
  if (H.rows() != W.rows() || H.cols() != F.rows()) {
    throw DimensionError("codebooks do not match the SI channel dimensions");
  }
  const double pairs = static_cast<double>(F.cols()) * static_cast<double>(W.cols());
  if (pairs == 0.0) throw DimensionError("empty codebook");
  return linear_to_db_clamped(objective(F, W, H) / pairs);
}

double average_coupling_db(const Codebook& F, const Codebook& W, const SiChannel& H) {
  return average_coupling_db(F.matrix(), W.matrix(), H.matrix);
}

CodebookDesignResult design_codebooks(const SiChannel& H, const CoverageSpec& cov_tx,
                                      const CoverageSpec& cov_rx,
                                      const CodebookDesignConfig& config) {
  config.validate();
  if (cov_tx.n_beams() == 0 || cov_rx.n_beams() == 0) {
    throw DomainError("coverage specs need at least one direction");
  }
  if (H.n_tx() != cov_tx.n_elements() || H.n_rx() != cov_rx.n_elements()) {
    throw DimensionError("SI channel is " + std::to_string(H.n_rx()) + "x" +
                         std::to_string(H.n_tx()) + " but coverage arrays are " +
                         std::to_string(cov_rx.n_elements()) + "x" +
                         std::to_string(cov_tx.n_elements()));
  }
  if (!H.matrix.allFinite()) throw DomainError("SI channel must be finite");

  const CMatrix& h = H.matrix;
  const CMatrix a_tx = cov_tx.matrix();
  const CMatrix a_rx = cov_rx.matrix();
  const double budget_tx = budget_of(config.sigma2_tx, a_tx);
  const double budget_rx = budget_of(config.sigma2_rx, a_rx);
  const PhaseShifterSpec& spec = config.spec;
  const bool continuous = !spec.quantized_phase() && spec.amplitude_levels() == std::vector{1.0};

  const CMatrix base_f = continuous ? a_tx : project_columns(a_tx, spec);
  const CMatrix base_w = continuous ? a_rx : project_columns(a_rx, spec);
  const double base_obj = objective(base_f, base_w, h);

  auto finish = [&](const CMatrix& f, const CMatrix& w, CodebookDesignResult r) {
    r.F = Codebook::from_matrix(f, spec, cov_tx.directions);
    r.W = Codebook::from_matrix(w, spec, cov_rx.directions);
    r.coverage_tx = coverage_variance(f, a_tx);
    r.coverage_rx = coverage_variance(w, a_rx);
    r.feasible = within(r.coverage_tx, budget_tx, a_tx) && within(r.coverage_rx, budget_rx, a_rx);
    if (!r.feasible) {
      std::ostringstream msg;
      msg << "coverage budget violated: tx " << r.coverage_tx << " (budget " << budget_tx
          << "), rx " << r.coverage_rx << " (budget " << budget_rx << ")";
      r.report += r.report.empty() ? msg.str() : "; " + msg.str();
    }
    return r;
  };

  double scale = 1.0;
  for (std::size_t attempt = 0; attempt < (continuous ? 1 : kMaxTighten); ++attempt) {
    Design d = run_design(h, a_tx, a_rx, budget_tx * scale, budget_rx * scale, config);
    CodebookDesignResult r;
    r.iterations = d.iterations;
    r.objective_trace = std::move(d.trace);
    if (continuous) return finish(d.f, d.w, std::move(r));

    const CMatrix qf = project_columns(d.f, spec);
    const CMatrix qw = project_columns(d.w, spec);
    const double q_obj = objective(qf, qw, h);
    const bool ok = within(coverage_variance(qf, a_tx), budget_tx, a_tx) &&
                    within(coverage_variance(qw, a_rx), budget_rx, a_rx) && q_obj <= base_obj;
    if (ok) {
      const double before = r.objective_trace.back();
      r.quantization_jump_db = linear_to_db_clamped(q_obj) - linear_to_db_clamped(before);
      r.objective_trace.push_back(q_obj);
      return finish(qf, qw, std::move(r));
    }
    scale *= 0.5;
  }

  CodebookDesignResult r;
  r.baseline_fallback = true;
  r.objective_trace = {base_obj};
  r.report = "quantized design never beat the projected conjugate codebooks within budget";
  return finish(base_f, base_w, std::move(r));
}

}  // namespace duplexforge
