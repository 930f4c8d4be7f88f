// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#include <benchmark/benchmark.h>

#include <random>

#include "duplexforge/analog_sic.hpp"
#include "duplexforge/arrays.hpp"
#include "duplexforge/beam_design.hpp"
#include "duplexforge/channels.hpp"
#include "duplexforge/codebook_design.hpp"
#include "duplexforge/steer.hpp"

using namespace duplexforge;

namespace {

void BM_SteeringVector(benchmark::State& state) {
  const auto g = ArrayGeometry::uniform_planar(8, static_cast<std::size_t>(state.range(0)) / 8);
  const Direction d(23.0, -4.0);
  for (auto _ : state) benchmark::DoNotOptimize(steering_vector(g, d));
}
BENCHMARK(BM_SteeringVector)->Arg(64)->Arg(256);

void BM_LsTapWeights(benchmark::State& state) {
  const auto taps = ideal_tap_matrix({static_cast<std::size_t>(state.range(0)), 1.0}, 1.0, 64);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  CVector y(64);
  for (auto& v : y) v = cplx(g(rng), g(rng));
  for (auto _ : state) benchmark::DoNotOptimize(ls_tap_weights(y, taps));
}
BENCHMARK(BM_LsTapWeights)->Arg(4)->Arg(8);

LinkContext link(const ArrayGeometry& g) {
  LinkContext ctx;
  ctx.h_tx = los_user_channel(g, Direction(20.0, 0.0), 0.0);
  ctx.h_rx = los_user_channel(g, Direction(-35.0, 0.0), 0.0);
  ctx.si = rayleigh_si_channel(g.size(), g.size(), 2);
  ctx.h_cl = cross_link_channel(-10.0, 3);
  ctx.powers = {0.0, 0.0, -10.0, -10.0};
  return ctx;
}

void BM_ExhaustiveBeamSearch(benchmark::State& state) {
  const auto g = ArrayGeometry::uniform_linear(4);
  const auto ctx = link(g);
  const auto dirs = azimuth_sweep(-60.0, 60.0, 64);
  const BeamSearchSpace space{conjugate_codebook(g, dirs, std::nullopt),
                              conjugate_codebook(g, dirs, std::nullopt)};
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_beam_search(space, ctx));
}
BENCHMARK(BM_ExhaustiveBeamSearch)->Unit(benchmark::kMillisecond);

void BM_DesignCodebooks16(benchmark::State& state) {
  const auto g = ArrayGeometry::uniform_linear(16);
  const auto H = spherical_wave_si_channel(g, g, ArrayPose::side_by_side(10.0), 1.0);
  const CoverageSpec cov{g, azimuth_sweep(-60.0, 60.0, 8)};
  for (auto _ : state) benchmark::DoNotOptimize(design_codebooks(H, cov, cov));
}
BENCHMARK(BM_DesignCodebooks16)->Unit(benchmark::kMillisecond);

void BM_SteerSelect(benchmark::State& state) {
  const NeighborhoodSpec spec{2.0, 2.0, 1.0, 1.0};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    SimulatedMeasurer m(flat_inr_surface(20.0), 10.0, ++seed);
    benchmark::DoNotOptimize(
        steer_select(Direction(0.0, 0.0), Direction(10.0, 0.0), spec, 0.0, m));
  }
}
BENCHMARK(BM_SteerSelect);

}  // namespace

BENCHMARK_MAIN();
