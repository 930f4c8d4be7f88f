// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include "duplexforge/analog_sic.hpp"
#include "duplexforge/inr_map_io.hpp"
#include "duplexforge/link_math.hpp"
#include "duplexforge/random.hpp"
#include "duplexforge/units.hpp"
#include "duplexforge_cli/cli.hpp"

namespace duplexforge::cli {

namespace {

class CsvFile {
 public:
  CsvFile(const RunOptions& opt, std::string name, CommandOutput& output)
      : out_(opt.out_dir / name, std::ios::binary) {
    if (!out_) throw ConfigError("cannot write " + (opt.out_dir / name).string());
    output.files.push_back(std::move(name));
  }
  template <typename... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cells, first = false), ...);
    out_ << '\n';
  }
  std::ostream& stream() { return out_; }

 private:
  std::ofstream out_;
};

std::string complex_cell(cplx v) { return format_g9(v.real()) + ";" + format_g9(v.imag()); }

void write_matrix(const RunOptions& opt, const std::string& name, const CMatrix& m,
                  CommandOutput& output) {
  CsvFile f(opt, name, output);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      f.stream() << (c ? "," : "") << complex_cell(m(r, c));
    }
    f.stream() << '\n';
  }
}

// Type-7 sample quantile of sorted data.
double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return std::nan("");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::string kv(const std::string& key, const std::string& value) { return key + " = " + value + "\n"; }

std::uint64_t seed_of(const Scenario& s) {
  if (!s.master_seed) throw ConfigError("this command needs a master seed (seed = ... or --seed)");
  return *s.master_seed;
}

}  // namespace

std::string format_g9(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

CommandOutput cmd_rate_region(const Scenario& s, const RunOptions& opt) {
  if (!s.region) throw ConfigError("scenario has no region block (region.enabled = true)");
  const RegionConfig& r = *s.region;
  const LinkSnrs snrs{db_to_linear(r.snr_tx_db), db_to_linear(r.snr_rx_db)};

  CommandOutput output;
  CsvFile csv(opt, "rate_region.csv", output);
  csv.row("strategy", "alpha", "r_tx", "r_rx", "is_star");
  std::ostringstream summary;

  auto emit = [&](const std::string& label, const RegionBoundary& b) {
    for (std::size_t i = 0; i < b.points.size(); ++i) {
      const auto& p = b.points[i];
      csv.row(label, std::isnan(p.alpha) ? std::string() : format_g9(p.alpha),
              format_g9(p.rate.r_tx), format_g9(p.rate.r_rx), i == b.star ? 1 : 0);
    }
    const auto& star = b.points[b.star];
    summary << kv("star." + label, format_g9(star.rate.r_tx) + ", " + format_g9(star.rate.r_rx) +
                                       " (sum " + format_g9(star.rate.sum()) + ")");
  };

  for (auto strategy : {DuplexStrategy::tdd, DuplexStrategy::fdd}) {
    emit(std::string(to_string(strategy)), rate_region_boundary(strategy, snrs, {}, r.n_points));
  }
  for (std::size_t k = 0; k < r.inr_tx_db.size(); ++k) {
    const LinkInrs inrs{db_to_linear(r.inr_tx_db[k]), db_to_linear(r.inr_rx_db[k])};
    emit("fd@" + format_g9(r.inr_tx_db[k]) + "/" + format_g9(r.inr_rx_db[k]),
         rate_region_boundary(DuplexStrategy::fd, snrs, inrs, r.n_points));
  }
  summary << kv("capacity_fd.sum", format_g9(capacity_fd(snrs).sum()));
  output.summary = summary.str();
  return output;
}

CommandOutput cmd_sic_fit(const Scenario& s, const RunOptions& opt) {
  if (!s.sic) throw ConfigError("scenario has no sic block (sic.enabled = true)");
  const SicConfig& c = *s.sic;
  const std::uint64_t master = seed_of(s);

  // One grid for the SI channel and the canceller so both share the same tap delays.
  const std::size_t k_all = std::max(c.n_taps, c.channel_taps);
  const TapResponseMatrix grid =
      ideal_tap_matrix({k_all, c.tap_delay_samples}, 1.0, c.samples);
  TapResponseMatrix taps = grid;
  taps.columns = grid.columns.leftCols(static_cast<Eigen::Index>(c.n_taps));
  const CMatrix truth = grid.columns.leftCols(static_cast<Eigen::Index>(c.channel_taps));

  Rng channel_rng(derive_seed(master, "sic-channel"));
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  CVector h(static_cast<Eigen::Index>(c.channel_taps));
  for (Eigen::Index k = 0; k < h.size(); ++k) {
    h(k) = std::polar(db_to_amplitude(-c.channel_decay_db * static_cast<double>(k)), phase(channel_rng));
  }
  CVector y = truth * h;
  if (std::isfinite(c.noise_db)) {
    Rng noise_rng(derive_seed(master, "sic-noise"));
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5 * db_to_linear(c.noise_db)));
    for (Eigen::Index t = 0; t < y.size(); ++t) {
      const double re = normal(noise_rng);
      const double im = normal(noise_rng);
      y(t) += cplx(re, im);
    }
  }

  const SicFit fit = ls_tap_weights(y, taps);

  CommandOutput output;
  {
    CsvFile csv(opt, "sic_fit.csv", output);
    csv.row("tap", "re", "im");
    for (Eigen::Index k = 0; k < fit.weights.size(); ++k) {
      csv.row(k, format_g9(fit.weights(k).real()), format_g9(fit.weights(k).imag()));
    }
  }
  std::string summary;
  summary += kv("n_taps", std::to_string(c.n_taps));
  summary += kv("channel_taps", std::to_string(c.channel_taps));
  summary += kv("fractional_delay", taps.fractional_delay ? "true" : "false");
  summary += kv("regularized", fit.regularized ? "true" : "false");
  summary += kv("residual_power_db", format_g9(fit.residual_power_db));
  summary += kv("cancellation_db", format_g9(fit.cancellation_db));
  {
    CsvFile txt(opt, "sic_summary.txt", output);
    txt.stream() << summary;
  }
  output.summary = summary;
  return output;
}

CommandOutput cmd_codebook(const Scenario& s, const RunOptions& opt) {
  if (!s.codebook) throw ConfigError("scenario has no codebook block (codebook.enabled = true)");
  const CodebookConfig& c = *s.codebook;
  const SiChannel H = make_si_channel(s);
  const CoverageSpec cov_tx = make_coverage(s.tx_array, c.tx);
  const CoverageSpec cov_rx = make_coverage(s.rx_array, c.rx);

  CodebookDesignConfig cfg;
  cfg.sigma2_tx = c.sigma2_tx;
  cfg.sigma2_rx = c.sigma2_rx;
  cfg.max_iters = c.max_iters;
  cfg.tolerance = c.tolerance;
  cfg.spec = s.phase_shifter;
  const CodebookDesignResult res = design_codebooks(H, cov_tx, cov_rx, cfg);

  const Codebook base_f = conjugate_codebook(cov_tx.geometry, cov_tx.directions, s.phase_shifter);
  const Codebook base_w = conjugate_codebook(cov_rx.geometry, cov_rx.directions, s.phase_shifter);

  CommandOutput output;
  write_matrix(opt, "F.csv", res.F.matrix(), output);
  write_matrix(opt, "W.csv", res.W.matrix(), output);
  {
    CsvFile csv(opt, "objective_trace.csv", output);
    csv.row("step", "objective", "objective_db");
    for (std::size_t i = 0; i < res.objective_trace.size(); ++i) {
      const double v = res.objective_trace[i];
      csv.row(i, format_g9(v), format_g9(linear_to_db_clamped(v)));
    }
  }
  const double base_db = average_coupling_db(base_f, base_w, H);
  const double design_db = average_coupling_db(res.F, res.W, H);
  {
    CsvFile csv(opt, "codebook_summary.csv", output);
    csv.row("codebook", "average_coupling_db", "coverage_tx", "coverage_rx");
    csv.row("conjugate", format_g9(base_db), format_g9(coverage_variance(base_f, cov_tx)),
            format_g9(coverage_variance(base_w, cov_rx)));
    csv.row("designed", format_g9(design_db), format_g9(res.coverage_tx),
            format_g9(res.coverage_rx));
  }
  std::string summary;
  summary += kv("conjugate_coupling_db", format_g9(base_db));
  summary += kv("designed_coupling_db", format_g9(design_db));
  summary += kv("iterations", std::to_string(res.iterations));
  summary += kv("feasible", res.feasible ? "true" : "false");
  summary += kv("baseline_fallback", res.baseline_fallback ? "true" : "false");
  summary += kv("quantization_jump_db", format_g9(res.quantization_jump_db));
  if (!res.report.empty()) summary += kv("report", res.report);
  output.summary = summary;
  return output;
}

namespace {

struct TrialRow {
  double inr_initial_db = 0.0;
  double inr_final_db = 0.0;
  double deviation = 0.0;
  std::size_t measurements = 0;
  bool met_target = false;
};

// Runs body(i) for i in [0, n) on `threads` workers. Rethrows the error of the lowest failing
// index so failures do not depend on scheduling.
template <typename Body>
void parallel_for(std::size_t n, std::size_t threads, Body body) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t t = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < t; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

CommandOutput steer_from_map(const Scenario& s, const RunOptions& opt) {
  const SteerConfig& c = *s.steer;
  std::filesystem::path path(c.map_file);
  if (path.is_relative()) path = opt.scenario_dir / path;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read INR map " + path.string());
  const InrGridMap map = read_inr_map_csv(in, c.neighborhood);

  const Direction tx0 = make_direction(c.initial_tx_direction);
  const Direction rx0 = make_direction(c.initial_rx_direction);
  MapMeasurer fast(map, tx0, rx0);
  MapMeasurer full(map, tx0, rx0);
  const SteerResult a = steer_select(tx0, rx0, c.neighborhood, c.target_inr_db, fast);
  const SteerResult b = brute_force_steer(tx0, rx0, c.neighborhood, c.target_inr_db, full);

  CommandOutput output;
  CsvFile csv(opt, "steer_map_result.csv", output);
  csv.row("method", "tx_dtheta", "tx_dphi", "rx_dtheta", "rx_dphi", "inr_db", "deviation",
          "measurements", "met_target");
  for (const auto& [name, r] : {std::pair{"steer", &a}, std::pair{"brute_force", &b}}) {
    csv.row(name, format_g9(r->tx_offset.dtheta_deg), format_g9(r->tx_offset.dphi_deg),
            format_g9(r->rx_offset.dtheta_deg), format_g9(r->rx_offset.dphi_deg),
            format_g9(r->inr_db), format_g9(std::sqrt(r->deviation_sq())), r->measurements_used,
            r->met_target ? 1 : 0);
  }
  output.summary = kv("inr_initial_db", format_g9(map.at({}, {}))) +
                   kv("inr_selected_db", format_g9(a.inr_db)) +
                   kv("deviation_deg", format_g9(std::sqrt(a.deviation_sq()))) +
                   kv("measurements", std::to_string(a.measurements_used)) +
                   kv("brute_force_measurements", std::to_string(b.measurements_used));
  return output;
}

}  // namespace

CommandOutput cmd_steer(const Scenario& s, const RunOptions& opt) {
  if (!s.steer) throw ConfigError("scenario has no steer block (steer.enabled = true)");
  const SteerConfig& c = *s.steer;
  if (!c.map_file.empty()) return steer_from_map(s, opt);

  const std::uint64_t master = seed_of(s);
  const std::size_t trials = opt.trials.value_or(c.trials);
  if (trials == 0) throw ConfigError("steer needs at least one trial");

  InrSurface surface = c.base == SteerBase::flat
                           ? flat_inr_surface(c.base_inr_db)
                           : fd_link_inr_surface(make_link_context(s), make_geometry(s.tx_array),
                                                 make_geometry(s.rx_array));

  std::vector<TrialRow> rows(trials);
  parallel_for(trials, opt.threads, [&](std::size_t i) {
    const std::uint64_t trial_seed = derive_seed(master, "trial-" + std::to_string(i));
    Rng rng(derive_seed(trial_seed, "directions"));
    auto draw = [&rng](const std::array<double, 2>& span) {
      return span[0] == span[1] ? span[0]
                                : std::uniform_real_distribution<double>(span[0], span[1])(rng);
    };
    const double tx_az = draw(c.azimuth_span_deg);
    const double tx_el = draw(c.elevation_span_deg);
    const double rx_az = draw(c.azimuth_span_deg);
    const double rx_el = draw(c.elevation_span_deg);
    const Direction tx0(tx_az, tx_el);
    const Direction rx0(rx_az, rx_el);

    SimulatedMeasurer measurer(surface, c.sigma_db, derive_seed(trial_seed, "inr"));
    const SteerResult r = steer_select(tx0, rx0, c.neighborhood, c.target_inr_db, measurer);
    rows[i] = {measurer.measure(tx0, rx0), r.inr_db, std::sqrt(r.deviation_sq()),
               r.measurements_used, r.met_target};
  });

  CommandOutput output;
  {
    CsvFile csv(opt, "steer_trials.csv", output);
    csv.row("trial", "inr_initial_db", "inr_final_db", "deviation", "measurements");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      csv.row(i, format_g9(r.inr_initial_db), format_g9(r.inr_final_db), format_g9(r.deviation),
              r.measurements);
    }
  }

  std::vector<double> initial, final_, reduction;
  for (const auto& r : rows) {
    initial.push_back(r.inr_initial_db);
    final_.push_back(r.inr_final_db);
    reduction.push_back(r.inr_initial_db - r.inr_final_db);
  }
  for (auto* v : {&initial, &final_, &reduction}) std::sort(v->begin(), v->end());
  {
    CsvFile csv(opt, "steer_cdf.csv", output);
    csv.row("cdf", "inr_initial_db", "inr_final_db", "reduction_db");
    for (int p = 0; p <= 100; p += 5) {
      const double q = p / 100.0;
      csv.row(format_g9(q), format_g9(quantile(initial, q)), format_g9(quantile(final_, q)),
              format_g9(quantile(reduction, q)));
    }
  }

  const double met = static_cast<double>(std::count_if(rows.begin(), rows.end(),
                                                       [](const TrialRow& r) { return r.met_target; }));
  const double mean_meas =
      std::accumulate(rows.begin(), rows.end(), 0.0,
                      [](double a, const TrialRow& r) { return a + static_cast<double>(r.measurements); }) /
      static_cast<double>(trials);
  std::string summary;
  summary += kv("trials", std::to_string(trials));
  summary += kv("median_inr_initial_db", format_g9(quantile(initial, 0.5)));
  summary += kv("median_inr_final_db", format_g9(quantile(final_, 0.5)));
  summary += kv("median_reduction_db", format_g9(quantile(reduction, 0.5)));
  summary += kv("mean_measurements", format_g9(mean_meas));
  summary += kv("fraction_met_target", format_g9(met / static_cast<double>(trials)));
  {
    CsvFile txt(opt, "steer_summary.txt", output);
    txt.stream() << summary;
  }
  output.summary = summary;
  return output;
}

}  // namespace duplexforge::cli
