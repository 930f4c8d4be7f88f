// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#include <doctest.h>

#include <cstdio>

#include "duplexforge/beam_design.hpp"
#include "duplexforge/channels.hpp"
#include "duplexforge/errors.hpp"
#include "oracles.hpp"

using namespace duplexforge;

namespace {

Codebook book(std::initializer_list<std::pair<cplx, cplx>> beams) {
  Codebook cb;
  for (const auto& [a, b] : beams) {
    CVector v(2);
    v << a, b;
    cb.beams.push_back({v, std::nullopt});
  }
  return cb;
}

// Downlink user at broadside, uplink user at endfire, strong identity SI.
LinkContext two_element_context() {
  const auto g = ArrayGeometry::uniform_linear(2);
  LinkContext ctx;
  ctx.h_tx = los_user_channel(g, Direction(0.0, 0.0), 0.0);
  ctx.h_rx = los_user_channel(g, Direction(90.0, 0.0), 0.0);
  ctx.si = custom_si_channel(CMatrix::Identity(2, 2) * 1e3);
  ctx.powers = {10.0, 10.0, 0.0, 0.0};
  return ctx;
}

}  // namespace

TEST_CASE("single candidates") {
  const auto ctx = two_element_context();
  const BeamSearchSpace space{book({{1.0, 1.0}}), book({{1.0, -1.0}})};
  const auto ex = exhaustive_beam_search(space, ctx);
  CHECK(ex.tx_index == 0);
  CHECK(ex.rx_index == 0);
  CHECK(ex.evaluations == 1);
  const auto alt = alternating_beam_search(space, ctx);
  CHECK(alt.sum_se == ex.sum_se);
}

TEST_CASE("the SI-nulling receive beam wins when interference dominates") {
  const auto ctx = two_element_context();
  const BeamSearchSpace space{book({{1.0, 1.0}, {1.0, -1.0}}), book({{1.0, 1.0}, {1.0, -1.0}})};
  const auto ex = exhaustive_beam_search(space, ctx);
  CHECK(ex.tx_index == 0);
  CHECK(ex.rx_index == 1);
  CHECK(ex.evaluations == 4);
  // Hand enumeration: r_tx = log2(1 + 4 * 10), r_rx = log2(1 + 4 * 10) with zero SI.
  CHECK(ex.sum_se == doctest::Approx(2.0 * std::log2(41.0)).epsilon(1e-12));
  CHECK(ex.sum_se == doctest::Approx(oracle::sum_se(ctx, ex.f.weights, ex.w.weights)).epsilon(1e-12));
}

TEST_CASE("ties go to the lowest indices") {
  const auto ctx = two_element_context();
  const BeamSearchSpace space{book({{1.0, 1.0}, {1.0, 1.0}, {-1.0, -1.0}}),
                              book({{1.0, -1.0}, {-1.0, 1.0}})};
  const auto ex = exhaustive_beam_search(space, ctx);
  CHECK(ex.tx_index == 0);
  CHECK(ex.rx_index == 0);
}

TEST_CASE("budget and validation") {
  const auto ctx = two_element_context();
  const BeamSearchSpace space{book({{1.0, 1.0}, {1.0, -1.0}}), book({{1.0, 1.0}, {1.0, -1.0}})};
  ExhaustiveOptions opt;
  opt.max_evaluations = 3;
  CHECK_THROWS_AS(exhaustive_beam_search(space, ctx, opt), ConfigError);
  CHECK_THROWS_AS(exhaustive_beam_search({Codebook{}, space.rx_candidates}, ctx), DomainError);
  AlternatingOptions bad;
  bad.max_rounds = 0;
  CHECK_THROWS_AS(alternating_beam_search(space, ctx, bad), ConfigError);
}

TEST_CASE("exhaustive search agrees with the nested-loop oracle and is thread-count invariant") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto inst = oracle::random_beam_instance(1000 + s, 4, 24, 2);
    const auto ref = oracle::exhaustive(inst.space.tx_candidates, inst.space.rx_candidates, inst.ctx);
    const auto one = exhaustive_beam_search(inst.space, inst.ctx);
    ExhaustiveOptions four;
    four.threads = 4;
    const auto par = exhaustive_beam_search(inst.space, inst.ctx, four);
    CHECK(one.sum_se == doctest::Approx(ref.sum_se).epsilon(1e-12));
    CHECK(par.tx_index == one.tx_index);
    CHECK(par.rx_index == one.rx_index);
    CHECK(par.sum_se == one.sum_se);
    CHECK(one.evaluations == inst.space.tx_candidates.size() * inst.space.rx_candidates.size());
  }
}

TEST_CASE("alternating search: monotone, bounded, fixed point at the optimum") {
  std::size_t hits = 0;
  const std::size_t n = 100;
  for (std::uint64_t s = 0; s < n; ++s) {
    const auto inst = oracle::random_beam_instance(s, 4, 64, 2);
    const auto ex = exhaustive_beam_search(inst.space, inst.ctx);
    const auto alt = alternating_beam_search(inst.space, inst.ctx);
    REQUIRE(!alt.trace.empty());
    for (std::size_t k = 1; k < alt.trace.size(); ++k) CHECK(alt.trace[k] >= alt.trace[k - 1]);
    CHECK(alt.sum_se <= ex.sum_se);
    CHECK(alt.sum_se == alt.trace.back());
    if (alt.sum_se == ex.sum_se) ++hits;

    AlternatingOptions at_opt;
    at_opt.initial_tx = ex.tx_index;
    at_opt.initial_rx = ex.rx_index;
    const auto fixed = alternating_beam_search(inst.space, inst.ctx, at_opt);
    CHECK(fixed.tx_index == ex.tx_index);
    CHECK(fixed.rx_index == ex.rx_index);
    CHECK(fixed.rounds == 1);
  }
  // Coordinate ascent stalls at local optima on most of these instances (29 of 100 reach
  // the global one on the reference platform); the floor only guards against regressions.
  MESSAGE("alternating search reached the optimum on " << hits << " of " << n);
  CHECK(hits >= 25);
}

TEST_CASE("alternating search is deterministic") {
  const auto inst = oracle::random_beam_instance(77, 4, 32, 3);
  const auto a = alternating_beam_search(inst.space, inst.ctx);
  const auto b = alternating_beam_search(inst.space, inst.ctx);
  CHECK(a.tx_index == b.tx_index);
  CHECK(a.rx_index == b.rx_index);
  CHECK(a.trace == b.trace);
}
