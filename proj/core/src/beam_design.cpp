// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#include "duplexforge/beam_design.hpp"

#include <algorithm>
#include <string>
#include <thread>

#include "duplexforge/errors.hpp"

namespace duplexforge {

namespace {

// Per-candidate terms evaluated once. A pair score then goes through the same fd_link
// primitives as sum_spectral_efficiency, so it is bit-identical to a direct evaluation.
class PairScorer {
 public:
  PairScorer(const BeamSearchSpace& space, const LinkContext& ctx)
      : ctx_(ctx), inr_tx_(inr_tx(ctx)) {
    for (const auto& f : space.tx_candidates.beams) {
      snr_tx_.push_back(snr_tx(ctx, f.weights));
      coupled_.push_back(ctx.si.matrix * f.weights);
    }
    for (const auto& w : space.rx_candidates.beams) {
      snr_rx_.push_back(snr_rx(ctx, w.weights));
      rx_.push_back(&w.weights);
    }
  }

  SpectralEfficiency se(std::size_t i, std::size_t j) const {
    return spectral_efficiency_from_terms({snr_tx_[i], snr_rx_[j]},
                                          {inr_tx_, inr_rx_coupled(ctx_, coupled_[i], *rx_[j])});
  }
  double operator()(std::size_t i, std::size_t j) const { return se(i, j).sum; }

  std::size_t n_tx() const { return snr_tx_.size(); }
  std::size_t n_rx() const { return snr_rx_.size(); }
  double snr_tx_of(std::size_t i) const { return snr_tx_[i]; }
  double snr_rx_of(std::size_t j) const { return snr_rx_[j]; }

 private:
  const LinkContext& ctx_;
  double inr_tx_;
  std::vector<double> snr_tx_;
  std::vector<double> snr_rx_;
  std::vector<CVector> coupled_;
  std::vector<const CVector*> rx_;
};

struct Best {
  std::size_t i = 0;
  std::size_t j = 0;
  double score = -1.0;
  bool found = false;
};

// Scans rows [begin, end) in lexicographic order; strict improvement keeps the first maximum.
Best scan_rows(const PairScorer& score, std::size_t begin, std::size_t end) {
  Best best;
  for (std::size_t i = begin; i < end; ++i) {
    for (std::size_t j = 0; j < score.n_rx(); ++j) {
      const double s = score(i, j);
      if (!best.found || s > best.score) best = {i, j, s, true};
    }
  }
  return best;
}

std::size_t argmax(std::size_t n, auto&& value) {
  std::size_t best = 0;
  double best_v = value(0);
  for (std::size_t k = 1; k < n; ++k) {
    const double v = value(k);
    if (v > best_v) {
      best = k;
      best_v = v;
    }
  }
  return best;
}

BeamDesignResult make_result(const BeamSearchSpace& space, const LinkContext& ctx, std::size_t i,
                             std::size_t j) {
  BeamDesignResult r;
  r.tx_index = i;
  r.rx_index = j;
  r.f = space.tx_candidates.beams[i];
  r.w = space.rx_candidates.beams[j];
  r.se = sum_spectral_efficiency(ctx, r.f.weights, r.w.weights);
  r.sum_se = r.se.sum;
  return r;
}

}  // namespace

void BeamSearchSpace::validate(const LinkContext& ctx) const {
  ctx.validate();
  if (tx_candidates.size() == 0 || rx_candidates.size() == 0) {
    throw DomainError("beam search needs at least one candidate per side");
  }
  for (const auto& f : tx_candidates.beams) {
    if (f.size() != ctx.n_tx()) throw DimensionError("transmit candidate length != N_tx");
  }
  for (const auto& w : rx_candidates.beams) {
    if (w.size() != ctx.n_rx()) throw DimensionError("receive candidate length != N_rx");
  }
}

BeamDesignResult exhaustive_beam_search(const BeamSearchSpace& space, const LinkContext& ctx,
                                        const ExhaustiveOptions& options) {
  space.validate(ctx);
  const std::size_t n_tx = space.tx_candidates.size();
  const std::size_t n_rx = space.rx_candidates.size();
  if (n_rx != 0 && n_tx > options.max_evaluations / n_rx) {
    throw ConfigError("exhaustive search over " + std::to_string(n_tx) + " x " +
                      std::to_string(n_rx) + " pairs exceeds the budget of " +
                      std::to_string(options.max_evaluations) + " evaluations");
  }

  const PairScorer score(space, ctx);
  const std::size_t workers = std::clamp<std::size_t>(options.threads, 1, n_tx);

  Best best;
  if (workers == 1) {
    best = scan_rows(score, 0, n_tx);
  } else {
    std::vector<Best> partial(workers);
    std::vector<std::thread> pool;
    const std::size_t chunk = (n_tx + workers - 1) / workers;
    for (std::size_t t = 0; t < workers; ++t) {
      const std::size_t begin = std::min(n_tx, t * chunk);
      const std::size_t end = std::min(n_tx, begin + chunk);
      pool.emplace_back([&, t, begin, end] { partial[t] = scan_rows(score, begin, end); });
    }
    for (auto& th : pool) th.join();
    // Chunks are merged in row order with the same strict rule as the sequential scan.
    for (const auto& p : partial) {
      if (p.found && (!best.found || p.score > best.score)) best = p;
    }
  }

  BeamDesignResult r = make_result(space, ctx, best.i, best.j);
  r.evaluations = n_tx * n_rx;
  return r;
}

BeamDesignResult alternating_beam_search(const BeamSearchSpace& space, const LinkContext& ctx,
                                         const AlternatingOptions& options) {
  space.validate(ctx);
  if (options.max_rounds == 0) throw ConfigError("alternating search needs max_rounds >= 1");
  const PairScorer score(space, ctx);

  std::size_t i = options.initial_tx.value_or(
      argmax(score.n_tx(), [&](std::size_t k) { return score.snr_tx_of(k); }));
  std::size_t j = options.initial_rx.value_or(
      argmax(score.n_rx(), [&](std::size_t k) { return score.snr_rx_of(k); }));
  if (i >= score.n_tx() || j >= score.n_rx()) throw DomainError("initial beam index out of range");

  std::vector<double> trace{score(i, j)};
  std::size_t evaluations = 1;
  std::size_t rounds = 0;

  // Best index along one coordinate, keeping `current` unless something is strictly better.
  auto improve = [&](std::size_t n, std::size_t current, auto&& value) {
    std::size_t best = current;
    double best_v = value(current);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == current) continue;
      const double v = value(k);
      ++evaluations;
      if (v > best_v) {
        best = k;
        best_v = v;
      }
    }
    return std::pair{best, best_v};
  };

  while (rounds < options.max_rounds) {
    ++rounds;
    const auto [new_j, v_rx] = improve(score.n_rx(), j, [&](std::size_t k) { return score(i, k); });
    trace.push_back(v_rx);
    const auto [new_i, v_tx] =
        improve(score.n_tx(), i, [&](std::size_t k) { return score(k, new_j); });
    trace.push_back(v_tx);
    const bool changed = new_i != i || new_j != j;
    i = new_i;
    j = new_j;
    if (!changed) break;
  }

  BeamDesignResult r = make_result(space, ctx, i, j);
  r.evaluations = evaluations;
  r.trace = std::move(trace);
  r.rounds = rounds;
  return r;
}

}  // namespace duplexforge
