#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "redox/layout.h"
#include "redox/metrics.h"
#include "redox/rng.h"
#include "redox/storage.h"
#include "redox/wire.h"

namespace redox {

enum class RefillPolicy {
  greedy,        // max usefulRefill, seeded-random tie-break
  greedy_first,  // max usefulRefill, first maximum in PCS order
  random,        // seeded-uniform among feasible candidates
};

enum class Scheduler {
  round_robin,  // global sn order
  jitter,       // seeded random node interleave, per-node order preserved
};

struct DeliveryRecord {
  uint64_t sn = 0;
  uint64_t requested = 0;
  uint64_t returned = 0;

  bool operator==(const DeliveryRecord&) const = default;
};

// Per-node valid bits + resident file ids for all M virtual chunks. The
// node's own VCs hold locally filled chunks; the rest act as the reserved
// frames for prefetched remote payloads.
class VcMemory {
public:
  VcMemory(uint64_t vcs, uint64_t k);
  bool valid(uint64_t vc, uint32_t offset) const;
  uint64_t resident(uint64_t vc, uint32_t offset) const;
  void fill(uint64_t vc, uint32_t offset, uint64_t file_id);
  uint64_t take(uint64_t vc, uint32_t offset);  // clears valid, returns resident
  const uint64_t* valid_row(uint64_t vc) const { return valid_.data() + vc * wpc_; }
  uint64_t words_per_chunk() const { return wpc_; }
  void clear();

private:
  uint64_t k_, wpc_;
  std::vector<uint64_t> valid_;
  std::vector<uint64_t> resident_;
};

// Per-physical-chunk consumed bitmaps; monotone within an epoch.
class ConsumedLedger {
public:
  ConsumedLedger(uint64_t pcs, uint64_t k);
  bool get(uint64_t pc, uint32_t offset) const;
  void set(uint64_t pc, uint32_t offset);
  const uint64_t* row(uint64_t pc) const { return words_.data() + pc * wpc_; }
  uint64_t count_set() const;
  void clear();

private:
  uint64_t k_, wpc_;
  std::vector<uint64_t> words_;
};

// Sliding (VC, offset) record for one (owner, requester) pair. `pairs[j]`
// is set iff the j-th window entry's payload was sent and may still be
// undelivered at the requester; `sent` mirrors the previous response's map.
struct PrefetchWindow {
  int64_t last_index = -1;
  std::vector<std::pair<int64_t, int64_t>> pairs;
  std::vector<uint8_t> sent;
};

void slide_window(PrefetchWindow& window, uint64_t shift);

// In-process message twin of wire::ResponseMsg: payload handles instead of
// bytes. encoded_bytes() matches the wire framing exactly.
struct ResponseHandles {
  uint16_t window = 0;
  std::vector<uint8_t> map;  // (window+7)/8 bytes, LSB-first bits
  std::vector<PayloadHandle> payloads;

  bool bit(uint64_t j) const { return wire::map_bit(map, j); }
  uint64_t payload_bytes() const;
  uint64_t encoded_bytes() const;
};

struct StepResult {
  uint64_t sn = 0;
  uint64_t requested = 0;
  uint64_t returned = 0;
  bool remote = false;
  bool messaged = false;  // false for local reads and prefetch hits
  ResponseHandles response;
};

struct RefillEvent {
  uint32_t node = 0;
  uint64_t vc = 0;
  uint64_t chosen_pc = 0;
  uint64_t filled = 0;
  std::vector<std::pair<uint64_t, uint64_t>> candidate_scores;  // (pc, usefulRefill)
};

struct ClusterOptions {
  RefillPolicy refill = RefillPolicy::greedy;
  bool prefetch = true;
  Scheduler scheduler = Scheduler::round_robin;
  uint64_t tiebreak_seed = 0;
  uint64_t jitter_seed = 0;
};

// Deterministic multi-node protocol engine. All nodes run in one thread;
// each node's requests are processed serially in its trace order, remote
// exchanges complete synchronously within a step.
class Cluster {
public:
  Cluster(const Layout& layout, ChunkStore& store, ClusterOptions options);

  void begin_epoch(EpochTrace trace, uint64_t epoch_index = 0);
  StepResult step(uint64_t sn);
  void run_epoch();  // all remaining entries in scheduler order

  // Archives the delivery log, reports, and clears per-epoch state.
  // `undelivered` in the report counts files never returned to training.
  MetricsReport end_epoch(std::vector<DeliveryRecord>* deliveries_out = nullptr);

  // --- protocol operations (single-step access for tests and analyzers) ---
  PayloadHandle read_local_file(uint32_t node, uint64_t file_id);
  uint64_t find_replace_pc(uint32_t node, uint64_t file_id);
  ResponseHandles read_remote_file(uint32_t owner, uint64_t file_id, uint32_t requester);
  ResponseHandles read_and_prefetch_remote(uint32_t owner, uint64_t file_id,
                                           uint32_t requester, uint64_t declared_budget);
  PayloadHandle fill_in_data(uint32_t requester, uint64_t file_id,
                             const ResponseHandles& response);
  uint64_t declare_budget(uint32_t node) const { return budget_remaining_[node]; }

  // --- inspection ---
  const Layout& layout() const { return *layout_; }
  bool slot_valid(uint32_t node, uint64_t vc, uint32_t offset) const;
  uint64_t slot_resident(uint32_t node, uint64_t vc, uint32_t offset) const;
  bool consumed(uint64_t file_id) const;
  const PrefetchWindow& window(uint32_t owner, uint32_t requester) const;
  const std::vector<DeliveryRecord>& deliveries() const { return deliveries_; }
  uint64_t delivered_count() const { return deliveries_.size(); }

  // --- observers ---
  std::function<void(const RefillEvent&)> on_refill;
  std::function<void(uint32_t owner, uint32_t requester, uint64_t shift,
                     const ResponseHandles&)> on_response;

  // --- test scaffolding: force protocol states that take many steps to
  // reach organically ---
  void debug_set_consumed(uint64_t file_id);
  void debug_fill_slot(uint32_t node, uint64_t vc, uint32_t offset, uint64_t file_id);

private:
  struct NodeCost {
    double disk_seconds = 0;
    double net_seconds = 0;
  };

  void deliver(uint32_t node, uint64_t sn, uint64_t requested, PayloadHandle payload);
  void account_local_fill(uint32_t node, uint64_t bytes, bool fill);
  void account_remote_fill(uint32_t node, uint64_t bytes, bool fill);
  ResponseHandles serve_request(uint32_t owner, const wire::RequestMsg& request);
  // Feasible refill candidates with their usefulRefill scores.
  std::vector<std::pair<uint64_t, uint64_t>> refill_candidates(uint32_t node,
                                                               const FileSlot& slot) const;

  const Layout* layout_;
  ChunkStore* store_;
  ClusterOptions opts_;

  std::optional<EpochTrace> trace_;
  uint64_t epoch_index_ = 0;

  std::vector<VcMemory> vc_memory_;  // one per node
  ConsumedLedger consumed_;
  std::vector<PrefetchWindow> windows_;  // owner*N + requester
  std::vector<uint64_t> budget_remaining_;
  std::vector<SplitMix64> node_rng_;

  // per-(requester, home) filtered subsequences of the current trace
  std::vector<std::vector<uint64_t>> rh_seq_;  // requester*N + home -> file ids
  std::vector<uint64_t> rh_index_;             // file -> index in its subsequence

  std::vector<DeliveryRecord> deliveries_;
  std::vector<NodeCost> cost_;
  MetricsReport metrics_;
  std::vector<uint64_t> local_vc_bytes_;   // current per-node local VC memory
  std::vector<uint64_t> node_next_pos_;    // per-node cursor into its trace entries
};

}  // namespace redox
