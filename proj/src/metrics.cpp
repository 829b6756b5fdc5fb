#include "redox/metrics.h"

#include <algorithm>

#include "redox/error.h"

namespace redox {

nlohmann::json MetricsReport::to_json() const {
  nlohmann::json j;
  j["epoch"] = epoch;
  j["files"] = files;
  j["delivered"] = delivered;
  j["undelivered"] = undelivered;
  j["memory_misses"] = memory_misses;
  j["remote_on_demand_requests"] = remote_on_demand_requests;
  j["remote_prefetch_hits"] = remote_prefetch_hits;
  j["remote_prefetched_files"] = remote_prefetched_files;
  j["files_read_from_disk"] = files_read_from_disk;
  j["files_filled"] = files_filled;
  j["files_wasted"] = files_wasted;
  j["fill_rate_histogram"] = fill_rate_histogram;
  j["network_bytes"] = network_bytes;
  j["network_payload_bytes"] = network_payload_bytes;
  j["simulated_epoch_time"] = simulated_epoch_time;
  j["node_disk_seconds"] = node_disk_seconds;
  j["node_net_seconds"] = node_net_seconds;
  j["per_pc_load_counts"] = per_pc_load_counts;
  j["peak_local_vc_bytes"] = peak_local_vc_bytes;
  j["peak_remote_vc_bytes"] = peak_remote_vc_bytes;
  return j;
}

MetricsReport sum_reports(const std::vector<MetricsReport>& reports) {
  if (reports.empty()) throw ConfigError("sum_reports: no epochs");
  MetricsReport total = reports.front();
  total.epoch = 0;
  for (size_t i = 1; i < reports.size(); ++i) {
    const auto& r = reports[i];
    total.delivered += r.delivered;
    total.undelivered += r.undelivered;
    total.memory_misses += r.memory_misses;
    total.remote_on_demand_requests += r.remote_on_demand_requests;
    total.remote_prefetch_hits += r.remote_prefetch_hits;
    total.remote_prefetched_files += r.remote_prefetched_files;
    total.files_read_from_disk += r.files_read_from_disk;
    total.files_filled += r.files_filled;
    total.files_wasted += r.files_wasted;
    for (size_t b = 0; b < total.fill_rate_histogram.size(); ++b)
      total.fill_rate_histogram[b] += r.fill_rate_histogram[b];
    total.network_bytes += r.network_bytes;
    total.network_payload_bytes += r.network_payload_bytes;
    total.simulated_epoch_time += r.simulated_epoch_time;
    for (size_t n = 0; n < total.node_disk_seconds.size(); ++n) {
      total.node_disk_seconds[n] += r.node_disk_seconds[n];
      total.node_net_seconds[n] += r.node_net_seconds[n];
    }
    for (size_t p = 0; p < total.per_pc_load_counts.size(); ++p)
      total.per_pc_load_counts[p] += r.per_pc_load_counts[p];
    total.peak_local_vc_bytes = std::max(total.peak_local_vc_bytes, r.peak_local_vc_bytes);
    total.peak_remote_vc_bytes = std::max(total.peak_remote_vc_bytes, r.peak_remote_vc_bytes);
  }
  return total;
}

}  // namespace redox
