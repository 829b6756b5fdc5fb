#include "redox/sim.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "redox/error.h"
#include "redox/rng.h"
#include "redox/storage.h"
#include "redox/wire.h"

namespace redox {

namespace {
constexpr uint64_t kSizesTag = 0x01;
constexpr uint64_t kEpochTag = 0x100;
constexpr uint64_t kTiebreakTag = 0x02;
constexpr uint64_t kJitterTag = 0x03;
}  // namespace

std::vector<uint64_t> generate_sizes(const SizeDistribution& dist, uint64_t count,
                                     uint64_t seed) {
  std::vector<uint64_t> sizes(count);
  SplitMix64 rng(seed);
  switch (dist.kind) {
    case SizeDistribution::Kind::fixed:
      if (dist.fixed_bytes == 0) throw ConfigError("size distribution: fixed bytes must be > 0");
      std::fill(sizes.begin(), sizes.end(), dist.fixed_bytes);
      break;
    case SizeDistribution::Kind::uniform: {
      if (dist.min_bytes == 0 || dist.max_bytes < dist.min_bytes)
        throw ConfigError("size distribution: need 0 < min <= max");
      const uint64_t span = dist.max_bytes - dist.min_bytes + 1;
      for (auto& s : sizes) s = dist.min_bytes + rng.next_below(span);
      break;
    }
    case SizeDistribution::Kind::lognormal: {
      if (dist.log_sigma < 0) throw ConfigError("size distribution: log_sigma must be >= 0");
      for (auto& s : sizes) {
        // Box-Muller on the deterministic stream.
        const double u1 = std::max(rng.next_double(), 1e-300);
        const double u2 = rng.next_double();
        const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
        const double v = std::exp(dist.log_mean + dist.log_sigma * z);
        s = std::max<uint64_t>(1, static_cast<uint64_t>(std::llround(v)));
      }
      break;
    }
  }
  return sizes;
}

void SimConfig::validate() const {
  layout.validate();
  cost.validate();
  if (epochs == 0) throw ConfigError("sim config: epochs must be >= 1");
}

uint64_t SimConfig::epoch_seed(uint64_t epoch) const {
  return derive_seed(seed, kEpochTag + epoch);
}
uint64_t SimConfig::sizes_seed() const { return derive_seed(layout.layout_seed, kSizesTag); }
uint64_t SimConfig::tiebreak_seed() const { return derive_seed(seed, kTiebreakTag); }
uint64_t SimConfig::jitter_seed() const { return derive_seed(seed, kJitterTag); }

namespace {

// Non-chunked baseline: every request is a standalone random read of its own
// file at its home node, shipped individually when remote.
MetricsReport run_unbatched_epoch(const Layout& layout, const CostModel& cost,
                                  const EpochTrace& trace, uint64_t epoch_index,
                                  std::vector<DeliveryRecord>* deliveries_out) {
  MetricsReport m;
  m.epoch = epoch_index;
  m.files = layout.files();
  m.fill_rate_histogram.assign(layout.chunk_size() + 1, 0);
  m.per_pc_load_counts.assign(layout.config().physical_chunks(), 0);
  std::vector<double> disk(layout.config().nodes, 0), net(layout.config().nodes, 0);
  std::vector<DeliveryRecord> log;
  log.reserve(trace.size());
  for (uint64_t sn = 0; sn < trace.size(); ++sn) {
    const uint64_t fid = trace.order[sn];
    const uint32_t requester = trace.requester[sn];
    const uint32_t home = layout.home_of_file(fid);
    const uint64_t bytes = layout.size_of(fid);
    disk[home] += cost.random_read_seconds(bytes);
    ++m.memory_misses;
    m.files_read_from_disk += 1;
    m.files_filled += 1;
    ++m.per_pc_load_counts[layout.pc_of(fid)];
    if (home != requester) {
      ++m.remote_on_demand_requests;
      const uint64_t req = wire::request_encoded_size();
      const uint64_t resp = wire::response_encoded_size(1, std::vector<uint64_t>{bytes});
      net[requester] += cost.transfer_seconds(req) + cost.transfer_seconds(resp);
      m.network_bytes += req + resp;
      m.network_payload_bytes += bytes;
    }
    log.push_back(DeliveryRecord{sn, fid, fid});
  }
  m.delivered = log.size();
  m.node_disk_seconds = disk;
  m.node_net_seconds = net;
  for (uint64_t n = 0; n < disk.size(); ++n)
    m.simulated_epoch_time = std::max(m.simulated_epoch_time, disk[n] + net[n]);
  if (deliveries_out) *deliveries_out = std::move(log);
  return m;
}

SimResult run_epochs(const SimConfig& config, const EpochTrace* injected) {
  config.validate();
  const auto sizes = generate_sizes(config.sizes, config.layout.files, config.sizes_seed());
  const Layout layout = build_layout(config.layout, sizes);
  SyntheticStore store(layout, config.cost);

  ClusterOptions opts;
  opts.refill = config.refill;
  opts.prefetch = config.prefetch;
  opts.scheduler = config.scheduler;
  opts.tiebreak_seed = config.tiebreak_seed();
  opts.jitter_seed = config.jitter_seed();
  Cluster cluster(layout, store, opts);

  SimResult result;
  const uint64_t epochs = injected ? 1 : config.epochs;
  for (uint64_t e = 0; e < epochs; ++e) {
    const EpochTrace trace =
        injected ? *injected : generate_epoch_trace(layout, config.epoch_seed(e));
    std::vector<DeliveryRecord> log;
    MetricsReport report;
    if (!config.batching) {
      report = run_unbatched_epoch(layout, config.cost, trace, e, &log);
    } else {
      try {
        cluster.begin_epoch(trace, e);
        cluster.run_epoch();
        report = cluster.end_epoch(&log);
      } catch (const InvariantViolation& ex) {
        throw InvariantViolation(std::string(ex.what()) + " [reproduce with seed=" +
                                 std::to_string(config.seed) + " epoch=" + std::to_string(e) +
                                 " epoch_seed=" + std::to_string(trace.epoch_seed) + "]");
      }
    }
    result.epochs.push_back(report);
    result.deliveries.push_back(std::move(log));
  }
  result.totals = sum_reports(result.epochs);
  return result;
}

}  // namespace

SimResult run_simulation(const SimConfig& config) { return run_epochs(config, nullptr); }

SimResult run_simulation_with_trace(const SimConfig& config, const EpochTrace& trace) {
  return run_epochs(config, &trace);
}

std::vector<AblationRow> run_ablation(const SimConfig& config) {
  config.validate();
  struct Variant {
    const char* name;
    bool prefetch;
    RefillPolicy refill;
  };
  const Variant variants[] = {
      {"full", true, RefillPolicy::greedy},
      {"random-selection", true, RefillPolicy::random},
      {"no-prefetching", false, RefillPolicy::greedy},
      {"no-optimization", false, RefillPolicy::random},
  };

  std::vector<AblationRow> rows;
  for (const Variant& v : variants) {
    SimConfig variant_config = config;
    variant_config.prefetch = v.prefetch;
    variant_config.refill = v.refill;
    // Same seed everywhere: all variants see identical traces and sizes.
    const SimResult r = run_simulation(variant_config);
    rows.push_back(AblationRow{v.name, r.totals});
  }
  return rows;
}

std::string ablation_csv(const std::vector<AblationRow>& rows) {
  std::ostringstream out;
  out << "variant,simulated_epoch_time,memory_misses,remote_on_demand_requests,"
         "files_read_from_disk,files_wasted,network_bytes\n";
  for (const auto& row : rows) {
    const auto& m = row.totals;
    out << row.variant << ',' << m.simulated_epoch_time << ',' << m.memory_misses << ','
        << m.remote_on_demand_requests << ',' << m.files_read_from_disk << ','
        << m.files_wasted << ',' << m.network_bytes << '\n';
  }
  return out.str();
}

std::vector<SweepRow> run_chunk_sweep(const SimConfig& config,
                                      const std::vector<uint64_t>& chunk_sizes) {
  config.validate();
  const uint64_t g = config.layout.pcs_size();
  std::vector<SweepRow> rows;
  for (uint64_t k : chunk_sizes) {
    SimConfig swept = config;
    swept.layout.chunk_size = k;
    if (config.layout.files % (k * g) != 0)
      throw ConfigError("chunk sweep: F=" + std::to_string(config.layout.files) +
                        " is not divisible by K*G with K=" + std::to_string(k));
    swept.layout.virtual_chunks = config.layout.files / (k * g);
    if (swept.layout.virtual_chunks % swept.layout.nodes != 0)
      throw ConfigError("chunk sweep: M=" + std::to_string(swept.layout.virtual_chunks) +
                        " not divisible by N at K=" + std::to_string(k));
    const SimResult r = run_simulation(swept);
    rows.push_back(SweepRow{k, swept.layout.virtual_chunks, r.totals});
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "chunk_size,virtual_chunks,simulated_epoch_time,files_read_from_disk,"
         "files_wasted,memory_misses,remote_on_demand_requests\n";
  for (const auto& row : rows) {
    const auto& m = row.totals;
    out << row.chunk_size << ',' << row.virtual_chunks << ',' << m.simulated_epoch_time
        << ',' << m.files_read_from_disk << ',' << m.files_wasted << ','
        << m.memory_misses << ',' << m.remote_on_demand_requests << '\n';
  }
  return out.str();
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json j;
  j["ok"] = ok;
  j["files"] = files;
  j["records"] = records;
  j["errors"] = errors;
  return j;
}

VerifyReport verify_exactly_once(uint64_t files, const std::vector<DeliveryRecord>& log) {
  VerifyReport report;
  report.files = files;
  report.records = log.size();
  std::vector<uint64_t> sn_seen_at(files, UINT64_MAX);
  std::vector<uint64_t> returned_at(files, UINT64_MAX);
  auto flag = [&](std::string msg) {
    report.ok = false;
    if (report.errors.size() < 64) report.errors.push_back(std::move(msg));
  };
  for (size_t i = 0; i < log.size(); ++i) {
    const auto& rec = log[i];
    if (rec.sn >= files) {
      flag("sn " + std::to_string(rec.sn) + " out of range");
      continue;
    }
    if (sn_seen_at[rec.sn] != UINT64_MAX)
      flag("sn " + std::to_string(rec.sn) + " delivered twice");
    sn_seen_at[rec.sn] = i;
    if (rec.returned >= files) {
      flag("returned file " + std::to_string(rec.returned) + " out of range at sn " +
           std::to_string(rec.sn));
      continue;
    }
    if (returned_at[rec.returned] != UINT64_MAX)
      flag("file " + std::to_string(rec.returned) + " returned twice, at sn " +
           std::to_string(log[returned_at[rec.returned]].sn) + " and sn " +
           std::to_string(rec.sn));
    else
      returned_at[rec.returned] = i;
  }
  for (uint64_t f = 0; f < files; ++f)
    if (returned_at[f] == UINT64_MAX) flag("file " + std::to_string(f) + " never returned");
  for (uint64_t sn = 0; sn < files; ++sn)
    if (sn_seen_at[sn] == UINT64_MAX) flag("sn " + std::to_string(sn) + " missing");
  return report;
}

VerifyReport verify_delivery(const Layout& layout, const std::vector<DeliveryRecord>& log) {
  VerifyReport report = verify_exactly_once(layout.files(), log);
  for (const auto& rec : log) {
    if (rec.requested >= layout.files() || rec.returned >= layout.files()) continue;
    const FileSlot want = layout.slot_of(rec.requested);
    const FileSlot got = layout.slot_of(rec.returned);
    if (want.vc != got.vc || want.offset != got.offset || want.home != got.home) {
      report.ok = false;
      if (report.errors.size() < 64)
        report.errors.push_back("redirection violated at sn " + std::to_string(rec.sn) +
                                ": requested " + std::to_string(rec.requested) +
                                ", returned " + std::to_string(rec.returned));
    }
  }
  return report;
}

VerifyReport verify_trace(const Layout& layout, const EpochTrace& trace) {
  VerifyReport report;
  report.files = layout.files();
  report.records = trace.size();
  std::vector<bool> seen(layout.files(), false);
  auto flag = [&](std::string msg) {
    report.ok = false;
    if (report.errors.size() < 64) report.errors.push_back(std::move(msg));
  };
  if (trace.size() != layout.files()) flag("trace length differs from file count");
  const uint64_t n = layout.config().nodes;
  for (uint64_t sn = 0; sn < trace.size(); ++sn) {
    const uint64_t fid = trace.order[sn];
    if (fid >= layout.files()) {
      flag("file id " + std::to_string(fid) + " out of range at sn " + std::to_string(sn));
      continue;
    }
    if (seen[fid]) flag("file " + std::to_string(fid) + " appears twice");
    seen[fid] = true;
    if (trace.requester[sn] != sn % n)
      flag("requester at sn " + std::to_string(sn) + " is not round-robin");
  }
  return report;
}

}  // namespace redox
