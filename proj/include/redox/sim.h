#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "redox/cluster.h"
#include "redox/cost.h"
#include "redox/layout.h"
#include "redox/metrics.h"

namespace redox {

struct SizeDistribution {
  enum class Kind { fixed, uniform, lognormal };
  Kind kind = Kind::fixed;
  uint64_t fixed_bytes = 100'000;
  uint64_t min_bytes = 0, max_bytes = 0;  // uniform, inclusive
  double log_mean = 0, log_sigma = 0;     // lognormal of bytes
};

std::vector<uint64_t> generate_sizes(const SizeDistribution& dist, uint64_t count,
                                     uint64_t seed);

struct SimConfig {
  LayoutConfig layout;
  uint64_t epochs = 1;
  uint64_t seed = 42;
  bool prefetch = true;
  RefillPolicy refill = RefillPolicy::greedy;
  bool batching = true;  // off = per-file random reads, the non-chunked baseline
  Scheduler scheduler = Scheduler::round_robin;
  SizeDistribution sizes;
  CostModel cost;

  void validate() const;
  uint64_t epoch_seed(uint64_t epoch) const;
  uint64_t sizes_seed() const;
  uint64_t tiebreak_seed() const;
  uint64_t jitter_seed() const;
};

struct SimResult {
  std::vector<MetricsReport> epochs;
  MetricsReport totals;
  // One log per epoch, sorted by sn.
  std::vector<std::vector<DeliveryRecord>> deliveries;
};

// Runs the configured number of epochs over freshly generated traces.
// Invariant violations are rethrown with the reproducing seed attached.
SimResult run_simulation(const SimConfig& config);

// Runs exactly one epoch over an explicit trace (scripted scenarios, paired
// ablation runs).
SimResult run_simulation_with_trace(const SimConfig& config, const EpochTrace& trace);

struct AblationRow {
  std::string variant;
  MetricsReport totals;
};

// {full, random-selection, no-prefetch, no-optimization} on identical traces.
std::vector<AblationRow> run_ablation(const SimConfig& config);
std::string ablation_csv(const std::vector<AblationRow>& rows);

struct SweepRow {
  uint64_t chunk_size = 0;
  uint64_t virtual_chunks = 0;
  MetricsReport totals;
};

// Chunk-size sensitivity at fixed total memory: M scales as F/(K*G).
std::vector<SweepRow> run_chunk_sweep(const SimConfig& config,
                                      const std::vector<uint64_t>& chunk_sizes);
std::string sweep_csv(const std::vector<SweepRow>& rows);

struct VerifyReport {
  bool ok = true;
  uint64_t files = 0;
  uint64_t records = 0;
  std::vector<std::string> errors;  // duplicates/omissions with offending sns

  nlohmann::json to_json() const;
};

// The union of delivery logs must be a permutation of all file ids, with
// each sn appearing exactly once.
VerifyReport verify_exactly_once(uint64_t files, const std::vector<DeliveryRecord>& log);

// verify_exactly_once plus the redirection constraint against a layout.
VerifyReport verify_delivery(const Layout& layout, const std::vector<DeliveryRecord>& log);

// Epoch traces: permutation + balanced round-robin requesters.
VerifyReport verify_trace(const Layout& layout, const EpochTrace& trace);

}  // namespace redox
