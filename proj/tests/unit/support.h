#pragma once

// Shared helpers for the test suites: admissible random configs and small
// scenario builders.

#include <cstdint>
#include <numeric>
#include <vector>

#include "redox/layout.h"
#include "redox/rng.h"
#include "redox/sim.h"

namespace redox::testsupport {

// Random config satisfying every divisibility constraint, F <= files_max.
inline SimConfig random_config(SplitMix64& rng, uint64_t files_max = 100'000) {
  SimConfig config;
  const uint64_t k = 2 + rng.next_below(255);   // K in [2, 256]
  const uint64_t g = 2 + rng.next_below(15);    // G in [2, 16]
  const uint64_t n = 1 + rng.next_below(5);     // N in [1, 5]
  const uint64_t p = 1 + rng.next_below(8);     // P in [1, 8]
  const uint64_t max_m = files_max / (k * g * n);
  const uint64_t m = 1 + rng.next_below(max_m);  // per-node VCs
  config.layout.files = k * g * n * m;
  config.layout.chunk_size = k;
  config.layout.virtual_chunks = n * m;
  config.layout.nodes = n;
  config.layout.prefetch_window = p;
  config.layout.layout_seed = rng.next();
  config.seed = rng.next();
  config.prefetch = rng.next_below(2) == 0;
  switch (rng.next_below(3)) {
    case 0: config.refill = RefillPolicy::greedy; break;
    case 1: config.refill = RefillPolicy::greedy_first; break;
    default: config.refill = RefillPolicy::random; break;
  }
  config.scheduler = rng.next_below(4) == 0 ? Scheduler::jitter : Scheduler::round_robin;
  switch (rng.next_below(3)) {
    case 0:
      config.sizes.kind = SizeDistribution::Kind::fixed;
      config.sizes.fixed_bytes = 1 + rng.next_below(4096);
      break;
    case 1:
      config.sizes.kind = SizeDistribution::Kind::uniform;
      config.sizes.min_bytes = 1 + rng.next_below(1000);
      config.sizes.max_bytes = config.sizes.min_bytes + rng.next_below(4096);
      break;
    default:
      config.sizes.kind = SizeDistribution::Kind::lognormal;
      config.sizes.log_mean = 6.0;
      config.sizes.log_sigma = 0.8;
      break;
  }
  switch (rng.next_below(3)) {
    case 0: config.layout.remote_vc_budget = 0; break;
    case 1: config.layout.remote_vc_budget = k * 4096 * 2; break;
    default: config.layout.remote_vc_budget = 1'500'000'000; break;
  }
  return config;
}

inline Layout unit_sized_layout(uint64_t files, uint64_t k, uint64_t m, uint64_t n,
                                uint64_t p = 1) {
  LayoutConfig cfg;
  cfg.files = files;
  cfg.chunk_size = k;
  cfg.virtual_chunks = m;
  cfg.nodes = n;
  cfg.prefetch_window = p;
  return build_layout(cfg, std::vector<uint64_t>(files, 1000));
}

// Appends the missing file ids (ascending) to turn a prefix into a full
// permutation.
inline std::vector<uint64_t> complete_order(std::vector<uint64_t> prefix, uint64_t files) {
  std::vector<bool> seen(files, false);
  for (uint64_t fid : prefix) seen[fid] = true;
  for (uint64_t fid = 0; fid < files; ++fid)
    if (!seen[fid]) prefix.push_back(fid);
  return prefix;
}

}  // namespace redox::testsupport
