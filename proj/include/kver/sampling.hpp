#pragma once

// Counter-based sampling. Every random number is a pure function of
// (seed, stream, counter), so plans and argument draws reproduce exactly
// across platforms, thread counts and runs.

#include <cstdint>
#include <functional>
#include <vector>

#include "kver/chart.hpp"

namespace kver {

namespace rng {

std::uint64_t mix(std::uint64_t seed, std::uint64_t counter);
double uniform(std::uint64_t seed, std::uint64_t counter);                    // [0,1)
double uniform_in(std::uint64_t seed, std::uint64_t counter, double lo, double hi);
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream_id);

}  // namespace rng

// Accepted sample points plus the sub-seed used for per-point argument draws.
struct SamplePlan {
  std::vector<VecD> points;
  std::uint64_t arg_seed = 0;
};

// Draws points uniformly from `region` shrunk by `margin`, keeping those that
// pass `accept` (null = accept all), until n points are collected. Throws
// BadParameters when the acceptance rate collapses.
SamplePlan build_plan(const Box& region, int n, std::uint64_t seed, double margin,
                      const std::function<bool(const VecD&)>& accept = {});

// Per-sample argument vectors with components in [-1, 1]. `slot` selects one
// of several independent vectors attached to the same sample.
VecD raw_vector(std::uint64_t arg_seed, std::uint64_t sample, int slot, int dim);

}  // namespace kver
