#include <doctest.h>

#include "redox/config.h"
#include "redox/error.h"
#include "redox/sim.h"
#include "support.h"

using namespace redox;

namespace {

SimConfig small_config() {
  SimConfig config;
  config.layout.files = 4096;
  config.layout.chunk_size = 16;
  config.layout.virtual_chunks = 32;  // G = 8
  config.layout.nodes = 2;
  config.layout.prefetch_window = 4;
  config.layout.layout_seed = 9;
  config.seed = 5;
  config.sizes.kind = SizeDistribution::Kind::uniform;
  config.sizes.min_bytes = 1000;
  config.sizes.max_bytes = 5000;
  return config;
}

}  // namespace

TEST_CASE("identical config and seeds give bit-identical reports") {
  const SimConfig config = small_config();
  const SimResult a = run_simulation(config);
  const SimResult b = run_simulation(config);
  CHECK(a.totals.to_json().dump() == b.totals.to_json().dump());
  CHECK(a.deliveries == b.deliveries);

  SimConfig reseeded = config;
  reseeded.seed = 6;
  const SimResult c = run_simulation(reseeded);
  CHECK(a.totals.to_json().dump() != c.totals.to_json().dump());
}

TEST_CASE("N=1 with G=1: perfect batching, zero waste, one load per chunk") {
  SimConfig config;
  config.layout.files = 512;
  config.layout.chunk_size = 8;
  config.layout.virtual_chunks = 64;
  config.layout.nodes = 1;
  const SimResult r = run_simulation(config);
  CHECK(r.totals.files_wasted == 0);
  CHECK(r.totals.remote_on_demand_requests == 0);
  for (uint64_t loads : r.totals.per_pc_load_counts) CHECK(loads == 1);
}

TEST_CASE("network byte conservation: payloads plus framing, exactly") {
  const SimConfig config = small_config();
  const SimResult r = run_simulation(config);
  const MetricsReport& m = r.totals;
  const uint64_t p = config.layout.prefetch_window;
  const uint64_t on_demand = m.remote_on_demand_requests;
  const uint64_t payload_count = on_demand + m.remote_prefetched_files;
  const uint64_t framing = on_demand * (wire::request_encoded_size() + 4 + 1 + 2 + (p + 7) / 8) +
                           payload_count * 16;
  CHECK(m.network_bytes == framing + m.network_payload_bytes);
}

TEST_CASE("multi-epoch runs deliver every file every epoch") {
  SimConfig config = small_config();
  config.layout.files = 1024;
  config.layout.virtual_chunks = 16;  // G = 4
  config.epochs = 3;
  const SimResult r = run_simulation(config);
  REQUIRE(r.epochs.size() == 3);
  for (const auto& epoch : r.epochs) {
    CHECK(epoch.delivered == 1024);
    CHECK(epoch.undelivered == 0);
    CHECK(epoch.files_read_from_disk == epoch.files_filled + epoch.files_wasted);
  }
  CHECK(r.totals.delivered == 3 * 1024);
  // Different epoch seeds give different traces.
  CHECK(r.deliveries[0] != r.deliveries[1]);
}

TEST_CASE("jitter scheduler preserves every invariant") {
  SimConfig config = small_config();
  config.scheduler = Scheduler::jitter;
  for (uint64_t seed : {1ull, 2ull, 3ull}) {
    config.seed = seed;
    const SimResult r = run_simulation(config);
    const auto sizes = generate_sizes(config.sizes, config.layout.files, config.sizes_seed());
    const Layout layout = build_layout(config.layout, sizes);
    CHECK(verify_delivery(layout, r.deliveries.front()).ok);
    CHECK(r.totals.files_read_from_disk ==
          r.totals.files_filled + r.totals.files_wasted);
  }
}

TEST_CASE("non-batched baseline: per-file reads, zero waste, full remote traffic") {
  SimConfig config = small_config();
  config.batching = false;
  const SimResult r = run_simulation(config);
  CHECK(r.totals.files_wasted == 0);
  CHECK(r.totals.files_read_from_disk == config.layout.files);
  CHECK(r.totals.memory_misses == config.layout.files);
  // Every cross-home entry goes over the wire.
  uint64_t cross = 0;
  const auto sizes = generate_sizes(config.sizes, config.layout.files, config.sizes_seed());
  const Layout layout = build_layout(config.layout, sizes);
  const EpochTrace trace = generate_epoch_trace(layout, config.epoch_seed(0));
  for (uint64_t sn = 0; sn < trace.size(); ++sn)
    if (layout.home_of_file(trace.order[sn]) != trace.requester[sn]) ++cross;
  CHECK(r.totals.remote_on_demand_requests == cross);

  // Batched protocol beats it end to end at these sizes.
  SimConfig batched = config;
  batched.batching = true;
  CHECK(run_simulation(batched).totals.simulated_epoch_time <
        r.totals.simulated_epoch_time);
}

TEST_CASE("ablation: four variants over identical traces") {
  SimConfig config = small_config();
  const auto rows = run_ablation(config);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].variant == "full");
  CHECK(rows[1].variant == "random-selection");
  CHECK(rows[2].variant == "no-prefetching");
  CHECK(rows[3].variant == "no-optimization");

  // Without prefetching, remote traffic is the cross-home entry count, so
  // the two non-prefetch variants agree exactly.
  CHECK(rows[2].totals.remote_on_demand_requests ==
        rows[3].totals.remote_on_demand_requests);
  // The full protocol wins the epoch-time comparison on this trace.
  for (size_t i = 1; i < rows.size(); ++i)
    CHECK(rows[0].totals.simulated_epoch_time <= rows[i].totals.simulated_epoch_time);

  const std::string csv = ablation_csv(rows);
  CHECK(csv.find("variant,simulated_epoch_time") == 0);
  CHECK(csv.find("no-optimization") != std::string::npos);
}

TEST_CASE("chunk sweep rescales M to keep total memory fixed") {
  SimConfig config = small_config();
  config.layout.nodes = 1;
  const auto rows = run_chunk_sweep(config, {2, 4, 8, 16});
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows)
    CHECK(row.chunk_size * row.virtual_chunks * config.layout.pcs_size() ==
          config.layout.files);
  CHECK_THROWS_AS(run_chunk_sweep(config, {3}), ConfigError);  // 4096 % (3*8) != 0
}

TEST_CASE("verify_exactly_once flags duplicates and omissions with their sns") {
  const SimConfig config = small_config();
  const SimResult r = run_simulation(config);
  auto log = r.deliveries.front();
  CHECK(verify_exactly_once(config.layout.files, log).ok);

  auto dup = log;
  dup[7].returned = dup[3].returned;  // duplicate delivery
  const VerifyReport flagged = verify_exactly_once(config.layout.files, dup);
  CHECK_FALSE(flagged.ok);
  bool mentions_both = false;
  for (const auto& e : flagged.errors)
    if (e.find("sn " + std::to_string(dup[3].sn)) != std::string::npos &&
        e.find("sn " + std::to_string(dup[7].sn)) != std::string::npos)
      mentions_both = true;
  CHECK(mentions_both);

  auto missing = log;
  missing.pop_back();
  CHECK_FALSE(verify_exactly_once(config.layout.files, missing).ok);
}

TEST_CASE("protocol assertions throw with a source location") {
  const SimConfig config = small_config();
  const auto sizes = generate_sizes(config.sizes, config.layout.files, config.sizes_seed());
  const Layout layout = build_layout(config.layout, sizes);
  const EpochTrace trace = generate_epoch_trace(layout, config.epoch_seed(0));
  SyntheticStore store(layout, config.cost);
  Cluster cluster(layout, store, ClusterOptions{});
  cluster.begin_epoch(trace);
  cluster.step(0);
  cluster.step(1);
  try {
    cluster.step(0);  // node 0's entries must advance in trace order
    CHECK(false);
  } catch (const InvariantViolation& ex) {
    const std::string what = ex.what();
    CHECK(what.find("trace order") != std::string::npos);
    CHECK(what.find("cluster.cpp") != std::string::npos);
  }
}
