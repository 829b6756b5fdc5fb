#pragma once

#include <cstdint>

#include "redox/error.h"

namespace redox {

// Flat I/O cost model. Defaults encode a Samsung 980 Pro class NVMe drive
// (7 GB/s sequential, ~4.1 GB/s effective random) and a 0.38 GB/s cluster
// interconnect.
struct CostModel {
  double seq_bandwidth = 7e9;        // bytes/s, batched chunk reads
  double rand_read_bandwidth = 4.1e9;  // bytes/s, effective single-file random reads
  double per_io_latency = 100e-6;    // seconds per disk I/O
  double net_bandwidth = 0.38e9;     // bytes/s
  double net_latency = 200e-6;       // seconds per message

  void validate() const {
    if (!(rand_read_bandwidth > 0))
      throw ConfigError("cost model: rand_read_bandwidth must be > 0");
    if (!(seq_bandwidth >= rand_read_bandwidth))
      throw ConfigError("cost model: seq_bandwidth must be >= rand_read_bandwidth");
    if (!(net_bandwidth > 0)) throw ConfigError("cost model: net_bandwidth must be > 0");
    if (per_io_latency < 0 || net_latency < 0)
      throw ConfigError("cost model: latencies must be >= 0");
  }

  // Whole-chunk batched read.
  double chunk_read_seconds(uint64_t bytes) const {
    return per_io_latency + static_cast<double>(bytes) / seq_bandwidth;
  }

  // One standalone random file read (the non-batched baseline).
  double random_read_seconds(uint64_t bytes) const {
    return per_io_latency + static_cast<double>(bytes) / rand_read_bandwidth;
  }

  // One message over the interconnect.
  double transfer_seconds(uint64_t bytes) const {
    return net_latency + static_cast<double>(bytes) / net_bandwidth;
  }
};

}  // namespace redox
