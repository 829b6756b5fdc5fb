#include "redox/randomness.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "redox/error.h"
#include "redox/rng.h"
#include "redox/stats.h"
#include "redox/storage.h"

namespace redox {

namespace {

double log10_factorial(uint64_t n) {
  return std::lgamma(static_cast<double>(n) + 1.0) / std::log(10.0);
}

// (GK)! / (G!)^K as Prod_{i=1..K} C(i*G, G); exact for GK <= 20.
uint64_t exact_multinomial(uint64_t g, uint64_t k) {
  auto binomial = [](uint64_t n, uint64_t r) {
    unsigned __int128 acc = 1;
    for (uint64_t i = 1; i <= r; ++i) acc = acc * (n - r + i) / i;
    return static_cast<uint64_t>(acc);
  };
  unsigned __int128 acc = 1;
  for (uint64_t i = 1; i <= k; ++i) acc *= binomial(i * g, g);
  return static_cast<uint64_t>(acc);
}

Layout single_vc_layout(uint64_t per_vc_files, uint64_t chunk_size) {
  LayoutConfig cfg;
  cfg.files = per_vc_files;
  cfg.chunk_size = chunk_size;
  cfg.virtual_chunks = 1;
  cfg.nodes = 1;
  cfg.prefetch_window = 1;
  return build_layout(cfg, std::vector<uint64_t>(per_vc_files, 1));
}

}  // namespace

nlohmann::json RandomnessBound::to_json() const {
  nlohmann::json j;
  j["files"] = files;
  j["virtual_chunks"] = virtual_chunks;
  j["chunk_size"] = chunk_size;
  j["pcs_size"] = pcs_size;
  j["per_vc_files"] = per_vc_files;
  j["log10_full"] = log10_full;
  j["log10_divisor"] = log10_divisor;
  j["log10_lower_bound"] = log10_lower_bound;
  j["exact_available"] = exact_available;
  if (exact_available) j["exact_lower_bound"] = exact_lower_bound;
  return j;
}

RandomnessBound compute_bound(uint64_t files, uint64_t virtual_chunks, uint64_t chunk_size) {
  if (files == 0 || virtual_chunks == 0 || chunk_size == 0)
    throw ConfigError("compute_bound: F, M, K must be positive");
  if (files % virtual_chunks != 0)
    throw ConfigError("compute_bound: F must be divisible by M");
  const uint64_t per_vc = files / virtual_chunks;
  if (per_vc % chunk_size != 0)
    throw ConfigError("compute_bound: F/M must be divisible by K");

  RandomnessBound b;
  b.files = files;
  b.virtual_chunks = virtual_chunks;
  b.chunk_size = chunk_size;
  b.per_vc_files = per_vc;
  b.pcs_size = per_vc / chunk_size;
  b.log10_full = log10_factorial(per_vc);
  b.log10_divisor = static_cast<double>(chunk_size) * log10_factorial(b.pcs_size);
  b.log10_lower_bound = b.log10_full - b.log10_divisor;
  if (per_vc <= 20) {
    b.exact_available = true;
    b.exact_lower_bound = exact_multinomial(b.pcs_size, chunk_size);
  }
  return b;
}

uint64_t enumerate_reachable(uint64_t per_vc_files, uint64_t chunk_size) {
  if (per_vc_files == 0 || chunk_size == 0 || per_vc_files % chunk_size != 0)
    throw ConfigError("enumerate_reachable: need K | F/M, both positive");
  double perms = 1;
  for (uint64_t i = 2; i <= per_vc_files; ++i) perms *= static_cast<double>(i);
  if (perms > 1e6)
    throw ConfigError("enumerate_reachable: (F/M)! exceeds the 10^6 enumeration guard");

  const Layout layout = single_vc_layout(per_vc_files, chunk_size);
  SyntheticStore store(layout, CostModel{});

  ClusterOptions opts;
  opts.refill = RefillPolicy::greedy_first;  // fixed tie-break: reachable set is well defined
  opts.prefetch = false;

  std::vector<uint64_t> order(per_vc_files);
  std::iota(order.begin(), order.end(), 0);
  std::unordered_set<uint64_t> outputs;
  do {
    Cluster cluster(layout, store, opts);
    const EpochTrace trace = make_epoch_trace(layout, order, 0);
    cluster.begin_epoch(trace);
    cluster.run_epoch();
    std::vector<DeliveryRecord> log;
    cluster.end_epoch(&log);
    // Pack the delivered sequence into a key; ids fit in 4 bits (F/M <= 9).
    uint64_t key = 0;
    for (const auto& rec : log) key = (key << 4) | rec.returned;
    outputs.insert(key);
  } while (std::next_permutation(order.begin(), order.end()));
  return outputs.size();
}

nlohmann::json UniformityReport::to_json() const {
  nlohmann::json j;
  j["trials"] = trials;
  j["alpha"] = alpha;
  j["p_first_load_order"] = p_first_load_order;
  j["order_bins"] = order_bins;
  j["flagged_order"] = flagged_order;
  j["p_first_delivery"] = p_first_delivery;
  j["delivery_bins"] = delivery_bins;
  j["flagged_delivery"] = flagged_delivery;
  return j;
}

UniformityReport position_uniformity(uint64_t chunk_size, uint64_t pcs_size,
                                     uint64_t trials, double alpha, uint64_t seed,
                                     RefillPolicy policy) {
  if (trials < 1000) throw ConfigError("position_uniformity: need at least 10^3 trials");
  if (pcs_size == 0 || pcs_size > 6)
    throw ConfigError("position_uniformity: G must be in [1, 6] (G! order bins)");
  const uint64_t per_vc = chunk_size * pcs_size;
  const Layout layout = single_vc_layout(per_vc, chunk_size);
  SyntheticStore store(layout, CostModel{});

  uint64_t order_bins = 1;
  for (uint64_t i = 2; i <= pcs_size; ++i) order_bins *= i;

  std::vector<uint64_t> order_counts(order_bins, 0);
  std::vector<uint64_t> delivery_counts(per_vc, 0);

  for (uint64_t t = 0; t < trials; ++t) {
    ClusterOptions opts;
    opts.refill = policy;
    opts.prefetch = false;
    opts.tiebreak_seed = derive_seed(seed, 2 * t);
    Cluster cluster(layout, store, opts);

    std::vector<uint64_t> first_load_order;
    cluster.on_refill = [&](const RefillEvent& event) {
      if (std::find(first_load_order.begin(), first_load_order.end(), event.chosen_pc) ==
          first_load_order.end())
        first_load_order.push_back(event.chosen_pc);
    };

    const EpochTrace trace = generate_epoch_trace(layout, derive_seed(seed, 2 * t + 1));
    cluster.begin_epoch(trace);
    cluster.run_epoch();
    std::vector<DeliveryRecord> log;
    cluster.end_epoch(&log);

    // Lehmer index of the first-load permutation.
    uint64_t lehmer = 0;
    for (size_t i = 0; i < first_load_order.size(); ++i) {
      uint64_t smaller = 0;
      for (size_t j = i + 1; j < first_load_order.size(); ++j)
        if (first_load_order[j] < first_load_order[i]) ++smaller;
      uint64_t radix = 1;
      for (size_t j = i + 1; j < first_load_order.size(); ++j) radix *= first_load_order.size() - j;
      lehmer += smaller * radix;
    }
    ++order_counts[lehmer];
    ++delivery_counts[log.front().returned];
  }

  UniformityReport report;
  report.trials = trials;
  report.alpha = alpha;
  report.order_bins = order_bins;
  report.delivery_bins = per_vc;
  report.p_first_load_order = order_bins > 1 ? uniformity_pvalue(order_counts) : 1.0;
  report.flagged_order = report.p_first_load_order < alpha;
  report.p_first_delivery = uniformity_pvalue(delivery_counts);
  report.flagged_delivery = report.p_first_delivery < alpha;
  return report;
}

}  // namespace redox
