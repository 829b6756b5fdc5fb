#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

namespace redox {

// One epoch's accounting. files_read_from_disk == files_filled + files_wasted
// holds exactly; fill_rate_histogram[u] counts refills that inserted u files.
struct MetricsReport {
  uint64_t epoch = 0;
  uint64_t files = 0;
  uint64_t delivered = 0;
  uint64_t undelivered = 0;

  uint64_t memory_misses = 0;
  uint64_t remote_on_demand_requests = 0;
  uint64_t remote_prefetch_hits = 0;    // remote reads served from a local slot
  uint64_t remote_prefetched_files = 0; // payloads piggybacked on responses

  uint64_t files_read_from_disk = 0;
  uint64_t files_filled = 0;
  uint64_t files_wasted = 0;
  std::vector<uint64_t> fill_rate_histogram;  // K+1 buckets

  uint64_t network_bytes = 0;          // every request/response, framing included
  uint64_t network_payload_bytes = 0;  // payload bytes inside responses

  double simulated_epoch_time = 0;  // max over nodes of disk + attributed net time
  std::vector<double> node_disk_seconds;
  std::vector<double> node_net_seconds;

  std::vector<uint64_t> per_pc_load_counts;

  uint64_t peak_local_vc_bytes = 0;
  uint64_t peak_remote_vc_bytes = 0;

  nlohmann::json to_json() const;
};

// Element-wise sum across epochs (times are summed; peaks are maxed).
MetricsReport sum_reports(const std::vector<MetricsReport>& reports);

}  // namespace redox
