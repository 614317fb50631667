#include "kver/sampling.hpp"

#include "kver/errors.hpp"

namespace kver {

namespace rng {

// splitmix64 finalizer over seed + counter * golden ratio increment.
std::uint64_t mix(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(mix(seed, counter) >> 11) * 0x1.0p-53;
}

double uniform_in(std::uint64_t seed, std::uint64_t counter, double lo, double hi) {
  return lo + (hi - lo) * uniform(seed, counter);
}

std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream_id) {
  return mix(seed ^ 0xD6E8FEB86659FD93ULL, stream_id);
}

}  // namespace rng

SamplePlan build_plan(const Box& region, int n, std::uint64_t seed, double margin,
                      const std::function<bool(const VecD&)>& accept) {
  SamplePlan plan;
  plan.arg_seed = rng::derive_stream(seed, 2);
  const std::uint64_t point_seed = rng::derive_stream(seed, 1);

  plan.points.reserve(static_cast<std::size_t>(n));
  std::uint64_t counter = 0;
  std::uint64_t rejected = 0;
  while (static_cast<int>(plan.points.size()) < n) {
    VecD p;
    p.n = region.n;
    for (int i = 0; i < region.n; ++i)
      p[i] = rng::uniform_in(point_seed, counter++, region.lo[i] + margin, region.hi[i] - margin);
    if (!accept || accept(p)) {
      plan.points.push_back(p);
    } else if (++rejected > 1000ULL * static_cast<std::uint64_t>(n) + 100000ULL) {
      throw BadParameters("sample plan: acceptance predicate rejects nearly everything");
    }
  }
  return plan;
}

VecD raw_vector(std::uint64_t arg_seed, std::uint64_t sample, int slot, int dim) {
  VecD v;
  v.n = dim;
  const std::uint64_t base = sample * 64 + static_cast<std::uint64_t>(slot) * 8;
  for (int j = 0; j < dim; ++j)
    v[j] = rng::uniform_in(arg_seed, base + static_cast<std::uint64_t>(j), -1.0, 1.0);
  return v;
}

}  // namespace kver
