#include "redox/cluster.h"

#include <algorithm>
#include <bit>
#include <string>

#include "redox/error.h"

namespace redox {

namespace {
constexpr uint64_t kEmpty = UINT64_MAX;

inline uint64_t words_for(uint64_t k) { return (k + 63) / 64; }

inline uint64_t tail_mask(uint64_t k, uint64_t word) {
  const uint64_t full = words_for(k) - 1;
  if (word < full || k % 64 == 0) return ~0ULL;
  return (1ULL << (k % 64)) - 1;
}
}  // namespace

VcMemory::VcMemory(uint64_t vcs, uint64_t k)
    : k_(k), wpc_(words_for(k)), valid_(vcs * wpc_, 0), resident_(vcs * k, kEmpty) {}

bool VcMemory::valid(uint64_t vc, uint32_t offset) const {
  return (valid_[vc * wpc_ + offset / 64] >> (offset % 64)) & 1;
}

uint64_t VcMemory::resident(uint64_t vc, uint32_t offset) const {
  return resident_[vc * k_ + offset];
}

void VcMemory::fill(uint64_t vc, uint32_t offset, uint64_t file_id) {
  REDOX_CHECK(!valid(vc, offset), "fill into an occupied VC slot");
  valid_[vc * wpc_ + offset / 64] |= 1ULL << (offset % 64);
  resident_[vc * k_ + offset] = file_id;
}

uint64_t VcMemory::take(uint64_t vc, uint32_t offset) {
  REDOX_CHECK(valid(vc, offset), "take from an invalid VC slot");
  valid_[vc * wpc_ + offset / 64] &= ~(1ULL << (offset % 64));
  const uint64_t fid = resident_[vc * k_ + offset];
  resident_[vc * k_ + offset] = kEmpty;
  return fid;
}

void VcMemory::clear() {
  std::fill(valid_.begin(), valid_.end(), 0);
  std::fill(resident_.begin(), resident_.end(), kEmpty);
}

ConsumedLedger::ConsumedLedger(uint64_t pcs, uint64_t k)
    : k_(k), wpc_(words_for(k)), words_(pcs * wpc_, 0) {}

bool ConsumedLedger::get(uint64_t pc, uint32_t offset) const {
  return (words_[pc * wpc_ + offset / 64] >> (offset % 64)) & 1;
}

void ConsumedLedger::set(uint64_t pc, uint32_t offset) {
  words_[pc * wpc_ + offset / 64] |= 1ULL << (offset % 64);
}

uint64_t ConsumedLedger::count_set() const {
  uint64_t n = 0;
  for (uint64_t w : words_) n += std::popcount(w);
  return n;
}

void ConsumedLedger::clear() { std::fill(words_.begin(), words_.end(), 0); }

void slide_window(PrefetchWindow& window, uint64_t shift) {
  const uint64_t p = window.pairs.size();
  for (uint64_t j = 0; j < p; ++j)
    window.pairs[j] = (j + shift < p) ? window.pairs[j + shift] : std::pair<int64_t, int64_t>{-1, -1};
  std::fill(window.sent.begin(), window.sent.end(), 0);
}

uint64_t ResponseHandles::payload_bytes() const {
  uint64_t n = 0;
  for (const auto& p : payloads) n += p.bytes;
  return n;
}

uint64_t ResponseHandles::encoded_bytes() const {
  std::vector<uint64_t> sizes;
  sizes.reserve(payloads.size());
  for (const auto& p : payloads) sizes.push_back(p.bytes);
  return wire::response_encoded_size(window, sizes);
}

Cluster::Cluster(const Layout& layout, ChunkStore& store, ClusterOptions options)
    : layout_(&layout),
      store_(&store),
      opts_(options),
      consumed_(layout.config().physical_chunks(), layout.chunk_size()) {
  const uint64_t n = layout_->config().nodes;
  vc_memory_.assign(n, VcMemory(layout_->config().virtual_chunks, layout_->chunk_size()));
  windows_.resize(n * n);
  for (auto& w : windows_) {
    w.pairs.assign(layout_->config().prefetch_window, {-1, -1});
    w.sent.assign(layout_->config().prefetch_window, 0);
  }
  budget_remaining_.assign(n, layout_->config().remote_vc_budget);
  for (uint64_t i = 0; i < n; ++i)
    node_rng_.emplace_back(derive_seed(opts_.tiebreak_seed, i));
  cost_.assign(n, NodeCost{});
  local_vc_bytes_.assign(n, 0);
  rh_seq_.resize(n * n);
  rh_index_.assign(layout_->files(), kEmpty);
  node_next_pos_.assign(n, 0);
}

void Cluster::begin_epoch(EpochTrace trace, uint64_t epoch_index) {
  REDOX_CHECK(!trace_.has_value(), "previous epoch was not ended");
  if (trace.size() != layout_->files())
    throw ConfigError("trace size does not match layout file count");
  trace_ = std::move(trace);
  epoch_index_ = epoch_index;
  const EpochTrace& t = *trace_;

  const uint64_t n = layout_->config().nodes;
  for (auto& seq : rh_seq_) seq.clear();
  for (uint64_t sn = 0; sn < t.size(); ++sn) {
    const uint64_t fid = t.order[sn];
    const uint32_t requester = t.requester[sn];
    const uint32_t home = layout_->home_of_file(fid);
    if (home != requester) {
      auto& seq = rh_seq_[requester * n + home];
      rh_index_[fid] = seq.size();
      seq.push_back(fid);
    } else {
      rh_index_[fid] = kEmpty;
    }
  }

  metrics_ = MetricsReport{};
  metrics_.epoch = epoch_index;
  metrics_.files = layout_->files();
  metrics_.fill_rate_histogram.assign(layout_->chunk_size() + 1, 0);
  metrics_.per_pc_load_counts.assign(layout_->config().physical_chunks(), 0);
}

PayloadHandle Cluster::read_local_file(uint32_t node, uint64_t file_id) {
  const FileSlot slot = layout_->slot_of(file_id);
  REDOX_CHECK(slot.home == node, "read_local_file on a non-home node");

  if (vc_memory_[node].valid(slot.vc, slot.offset)) {
    // Hit: self-invalidate and return whatever file redirection left here.
    const uint64_t resident = vc_memory_[node].take(slot.vc, slot.offset);
    consumed_.set(layout_->pc_of(resident), layout_->offset_of(resident));
    account_local_fill(node, layout_->size_of(resident), false);
    return PayloadHandle{resident, layout_->size_of(resident)};
  }

  // Miss: batch-read one physical chunk and fill every slot it can.
  ++metrics_.memory_misses;
  const uint64_t rpc = find_replace_pc(node, file_id);
  REDOX_CHECK(layout_->vc_of_pc(rpc) == slot.vc, "refill chunk maps to a different VC");
  std::vector<std::pair<uint64_t, uint64_t>> scores_before;
  if (on_refill) scores_before = refill_candidates(node, slot);
  const ChunkReadResult read = store_->read_chunk(rpc);
  cost_[node].disk_seconds += read.seconds;
  metrics_.files_read_from_disk += layout_->chunk_size();
  ++metrics_.per_pc_load_counts[rpc];

  uint64_t filled = 0;
  uint64_t filled_bytes = 0;
  for (uint32_t i = 0; i < layout_->chunk_size(); ++i) {
    const uint64_t g = layout_->file_of(rpc, i);
    REDOX_CHECK(read.files[i].file_id == g, "chunk read returned unexpected file");
    if (!consumed_.get(rpc, i) && !vc_memory_[node].valid(slot.vc, i)) {
      vc_memory_[node].fill(slot.vc, i, g);
      consumed_.set(rpc, i);
      ++filled;
      filled_bytes += read.files[i].bytes;
    }
    // Files read but not filled stay unconsumed; they may be read again.
  }
  ++metrics_.fill_rate_histogram[filled];
  metrics_.files_filled += filled;
  metrics_.files_wasted += layout_->chunk_size() - filled;
  account_local_fill(node, filled_bytes, true);

  if (on_refill)
    on_refill(RefillEvent{node, slot.vc, rpc, filled, std::move(scores_before)});

  REDOX_CHECK(vc_memory_[node].valid(slot.vc, slot.offset) &&
                  vc_memory_[node].resident(slot.vc, slot.offset) ==
                      layout_->file_of(rpc, slot.offset),
              "refill did not populate the requested slot");
  const uint64_t g = vc_memory_[node].take(slot.vc, slot.offset);
  account_local_fill(node, layout_->size_of(g), false);
  return PayloadHandle{g, layout_->size_of(g)};
}

std::vector<std::pair<uint64_t, uint64_t>> Cluster::refill_candidates(
    uint32_t node, const FileSlot& slot) const {
  const uint64_t k = layout_->chunk_size();
  const uint64_t wpc = words_for(k);
  const uint64_t* valid_row = vc_memory_[node].valid_row(slot.vc);
  std::vector<std::pair<uint64_t, uint64_t>> out;
  for (uint64_t pc : layout_->pcs_of_vc(slot.vc)) {
    if (consumed_.get(pc, slot.offset)) continue;  // must still hold the target slot's file
    uint64_t score = 0;
    const uint64_t* cw = consumed_.row(pc);
    for (uint64_t w = 0; w < wpc; ++w)
      score += std::popcount(~valid_row[w] & ~cw[w] & tail_mask(k, w));
    out.emplace_back(pc, score);
  }
  return out;
}

uint64_t Cluster::find_replace_pc(uint32_t node, uint64_t file_id) {
  const FileSlot slot = layout_->slot_of(file_id);
  REDOX_CHECK(slot.home == node, "find_replace_pc on a non-home node");
  REDOX_CHECK(!vc_memory_[node].valid(slot.vc, slot.offset),
              "find_replace_pc requires an invalid target slot");

  const auto candidates = refill_candidates(node, slot);
  REDOX_CHECK(!candidates.empty(),
              "no feasible refill chunk for slot (vc=" + std::to_string(slot.vc) +
                  ", o=" + std::to_string(slot.offset) + ")");

  if (opts_.refill == RefillPolicy::random)
    return candidates[node_rng_[node].next_below(candidates.size())].first;

  uint64_t best = 0;
  for (const auto& [pc, score] : candidates) best = std::max(best, score);
  if (opts_.refill == RefillPolicy::greedy_first) {
    for (const auto& [pc, score] : candidates)
      if (score == best) return pc;
  }
  std::vector<uint64_t> winners;
  for (const auto& [pc, score] : candidates)
    if (score == best) winners.push_back(pc);
  return winners[node_rng_[node].next_below(winners.size())];
}

ResponseHandles Cluster::read_remote_file(uint32_t owner, uint64_t file_id,
                                          uint32_t requester) {
  const FileSlot slot = layout_->slot_of(file_id);
  REDOX_CHECK(slot.home == owner, "read_remote_file must execute on the home node");
  REDOX_CHECK(requester != owner, "read_remote_file from the home node itself");
  ResponseHandles resp;
  resp.window = 1;
  resp.map.assign(1, 0);
  wire::set_map_bit(resp.map, 0);
  resp.payloads.push_back(read_local_file(owner, file_id));
  return resp;
}

ResponseHandles Cluster::read_and_prefetch_remote(uint32_t owner, uint64_t file_id,
                                                  uint32_t requester,
                                                  uint64_t declared_budget) {
  REDOX_CHECK(trace_.has_value(), "prefetch requires the epoch trace");
  const FileSlot slot = layout_->slot_of(file_id);
  REDOX_CHECK(slot.home == owner, "read_and_prefetch_remote must execute on the home node");
  REDOX_CHECK(requester != owner, "read_and_prefetch_remote from the home node itself");

  const uint64_t n = layout_->config().nodes;
  const uint64_t p = layout_->config().prefetch_window;
  PrefetchWindow& window = windows_[owner * n + requester];
  const std::vector<uint64_t>& seq = rh_seq_[requester * n + owner];
  const uint64_t idx = rh_index_[file_id];
  REDOX_CHECK(idx != kEmpty && seq[idx] == file_id, "on-demand file not in requester's trace");

  // Overlapping windows: shift surviving (VC, O) pairs so files sent earlier
  // and still undelivered at the requester keep blocking conflicts.
  uint64_t shift = p;
  if (window.last_index >= 0) {
    REDOX_CHECK(static_cast<int64_t>(idx) > window.last_index,
                "on-demand requests must advance through the trace");
    shift = idx - static_cast<uint64_t>(window.last_index);
    if (shift < p)
      REDOX_CHECK(!window.sent[shift],
                  "on-demand entry was already sent in the previous window");
  }
  slide_window(window, shift);
  window.last_index = static_cast<int64_t>(idx);

  ResponseHandles resp;
  resp.window = static_cast<uint16_t>(p);
  resp.map.assign((p + 7) / 8, 0);
  uint64_t budget_view = declared_budget;

  for (uint64_t j = 0; j < p && idx + j < seq.size(); ++j) {
    const uint64_t cur = seq[idx + j];
    const FileSlot cs = layout_->slot_of(cur);
    bool conflict = false;
    for (const auto& pair : window.pairs)
      conflict |= pair.first == static_cast<int64_t>(cs.vc) &&
                  pair.second == static_cast<int64_t>(cs.offset);

    if (j == 0) {
      REDOX_CHECK(!conflict, "on-demand request conflicts with a surviving window entry");
    } else {
      if (conflict) continue;
      // Opportunistic: never touch disk for a prefetch candidate.
      if (!vc_memory_[owner].valid(cs.vc, cs.offset)) continue;
      const uint64_t bytes =
          layout_->size_of(vc_memory_[owner].resident(cs.vc, cs.offset));
      if (budget_view < bytes) continue;  // skipped files leave no pair behind
      budget_view -= bytes;
    }

    const PayloadHandle payload = read_local_file(owner, cur);
    window.pairs[j] = {static_cast<int64_t>(cs.vc), static_cast<int64_t>(cs.offset)};
    window.sent[j] = 1;
    wire::set_map_bit(resp.map, j);
    resp.payloads.push_back(payload);
  }

  if (on_response) on_response(owner, requester, shift, resp);
  return resp;
}

PayloadHandle Cluster::fill_in_data(uint32_t requester, uint64_t file_id,
                                    const ResponseHandles& response) {
  REDOX_CHECK(response.map.size() == (static_cast<uint64_t>(response.window) + 7) / 8,
              "response map length does not match its window size");
  REDOX_CHECK(response.window >= 1 && response.bit(0),
              "response must carry the on-demand payload first");
  const uint32_t home = layout_->home_of_file(file_id);
  const uint64_t n = layout_->config().nodes;
  const std::vector<uint64_t>& seq = rh_seq_[requester * n + home];
  const uint64_t idx = rh_index_[file_id];

  size_t next_payload = 1;
  for (uint64_t j = 1; j < response.window; ++j) {
    if (!response.bit(j)) continue;
    REDOX_CHECK(next_payload < response.payloads.size(),
                "response map sets more bits than payloads carried");
    REDOX_CHECK(idx + j < seq.size(), "response map bit beyond the requester's trace");
    const PayloadHandle payload = response.payloads[next_payload++];
    const uint64_t target = seq[idx + j];
    const FileSlot ts = layout_->slot_of(target);
    const FileSlot ps = layout_->slot_of(payload.file_id);
    REDOX_CHECK(ps.vc == ts.vc && ps.offset == ts.offset && ps.home == ts.home,
                "prefetched payload does not redirect to its window slot");
    REDOX_CHECK(!vc_memory_[requester].valid(ts.vc, ts.offset),
                "prefetched payload targets an occupied slot");
    REDOX_CHECK(budget_remaining_[requester] >= payload.bytes,
                "remote-VC budget underflow on prefetch insert");
    vc_memory_[requester].fill(ts.vc, ts.offset, payload.file_id);
    budget_remaining_[requester] -= payload.bytes;
    account_remote_fill(requester, payload.bytes, true);
    ++metrics_.remote_prefetched_files;
  }
  REDOX_CHECK(next_payload == response.payloads.size(),
              "response carried more payloads than map bits");
  return response.payloads[0];
}

ResponseHandles Cluster::serve_request(uint32_t owner, const wire::RequestMsg& request) {
  if (request.type == wire::MsgType::read_prefetch)
    return read_and_prefetch_remote(owner, request.file_id,
                                    static_cast<uint32_t>(request.requester),
                                    request.remaining_budget);
  return read_remote_file(owner, request.file_id, static_cast<uint32_t>(request.requester));
}

StepResult Cluster::step(uint64_t sn) {
  REDOX_CHECK(trace_.has_value(), "no epoch in progress");
  REDOX_CHECK(sn < trace_->size(), "sn out of range");
  const uint32_t requester = trace_->requester[sn];
  const uint64_t n = layout_->config().nodes;
  REDOX_CHECK(sn / n == node_next_pos_[requester],
              "a node's entries must be processed in trace order");
  ++node_next_pos_[requester];

  const uint64_t fid = trace_->order[sn];
  const FileSlot slot = layout_->slot_of(fid);
  StepResult result;
  result.sn = sn;
  result.requested = fid;

  PayloadHandle payload;
  if (slot.home == requester) {
    payload = read_local_file(requester, fid);
  } else if (vc_memory_[requester].valid(slot.vc, slot.offset)) {
    // Previously prefetched: serve from memory with no network traffic.
    const uint64_t g = vc_memory_[requester].take(slot.vc, slot.offset);
    payload = PayloadHandle{g, layout_->size_of(g)};
    budget_remaining_[requester] += payload.bytes;
    account_remote_fill(requester, payload.bytes, false);
    ++metrics_.remote_prefetch_hits;
    result.remote = true;
  } else {
    ++metrics_.remote_on_demand_requests;
    const wire::RequestMsg request{
        opts_.prefetch ? wire::MsgType::read_prefetch : wire::MsgType::read, fid,
        requester, budget_remaining_[requester]};
    const uint64_t request_bytes = wire::request_encoded_size();

    ResponseHandles response = serve_request(slot.home, request);

    const uint64_t response_bytes = response.encoded_bytes();
    const CostModel& cost = store_->cost_model();
    cost_[requester].net_seconds +=
        cost.transfer_seconds(request_bytes) + cost.transfer_seconds(response_bytes);
    metrics_.network_bytes += request_bytes + response_bytes;
    metrics_.network_payload_bytes += response.payload_bytes();

    payload = fill_in_data(requester, fid, response);
    REDOX_CHECK(!vc_memory_[requester].valid(slot.vc, slot.offset),
                "on-demand slot must stay invalid after fill_in_data");
    result.remote = true;
    result.messaged = true;
    result.response = std::move(response);
  }

  deliver(requester, sn, fid, payload);
  result.returned = payload.file_id;
  return result;
}

void Cluster::run_epoch() {
  REDOX_CHECK(trace_.has_value(), "no epoch in progress");
  const uint64_t n = layout_->config().nodes;
  const uint64_t per_node = trace_->size() / n;

  if (opts_.scheduler == Scheduler::round_robin) {
    for (uint64_t sn = 0; sn < trace_->size(); ++sn) {
      if (sn / n < node_next_pos_[trace_->requester[sn]]) continue;  // already stepped
      step(sn);
    }
    return;
  }

  SplitMix64 jitter(derive_seed(opts_.jitter_seed, epoch_index_));
  std::vector<uint32_t> pending;
  for (;;) {
    pending.clear();
    for (uint32_t node = 0; node < n; ++node)
      if (node_next_pos_[node] < per_node) pending.push_back(node);
    if (pending.empty()) break;
    const uint32_t node = pending[jitter.next_below(pending.size())];
    step(node + node_next_pos_[node] * n);
  }
}

MetricsReport Cluster::end_epoch(std::vector<DeliveryRecord>* deliveries_out) {
  REDOX_CHECK(trace_.has_value(), "no epoch in progress");
  metrics_.delivered = deliveries_.size();
  metrics_.undelivered = layout_->files() - deliveries_.size();

  metrics_.node_disk_seconds.clear();
  metrics_.node_net_seconds.clear();
  double epoch_time = 0;
  for (const auto& c : cost_) {
    metrics_.node_disk_seconds.push_back(c.disk_seconds);
    metrics_.node_net_seconds.push_back(c.net_seconds);
    epoch_time = std::max(epoch_time, c.disk_seconds + c.net_seconds);
  }
  metrics_.simulated_epoch_time = epoch_time;

  std::sort(deliveries_.begin(), deliveries_.end(),
            [](const DeliveryRecord& a, const DeliveryRecord& b) { return a.sn < b.sn; });
  if (deliveries_out) *deliveries_out = std::move(deliveries_);

  const MetricsReport report = metrics_;

  // Epoch reset: consumed flags, VC slots, windows, budgets.
  trace_.reset();
  deliveries_.clear();
  consumed_.clear();
  for (auto& mem : vc_memory_) mem.clear();
  for (auto& w : windows_) {
    w.last_index = -1;
    std::fill(w.pairs.begin(), w.pairs.end(), std::pair<int64_t, int64_t>{-1, -1});
    std::fill(w.sent.begin(), w.sent.end(), 0);
  }
  std::fill(budget_remaining_.begin(), budget_remaining_.end(),
            layout_->config().remote_vc_budget);
  std::fill(local_vc_bytes_.begin(), local_vc_bytes_.end(), 0);
  std::fill(node_next_pos_.begin(), node_next_pos_.end(), 0);
  cost_.assign(layout_->config().nodes, NodeCost{});
  return report;
}

void Cluster::deliver(uint32_t node, uint64_t sn, uint64_t requested,
                      PayloadHandle payload) {
  (void)node;
  const FileSlot want = layout_->slot_of(requested);
  const FileSlot got = layout_->slot_of(payload.file_id);
  REDOX_CHECK(want.vc == got.vc && want.offset == got.offset && want.home == got.home,
              "redirection constraint violated: returned file does not share "
              "(vc, offset, home) with the request");
  deliveries_.push_back(DeliveryRecord{sn, requested, payload.file_id});
}

void Cluster::account_local_fill(uint32_t node, uint64_t bytes, bool fill) {
  if (fill) {
    local_vc_bytes_[node] += bytes;
    metrics_.peak_local_vc_bytes = std::max(metrics_.peak_local_vc_bytes, local_vc_bytes_[node]);
  } else {
    REDOX_CHECK(local_vc_bytes_[node] >= bytes, "local VC memory accounting underflow");
    local_vc_bytes_[node] -= bytes;
  }
}

void Cluster::account_remote_fill(uint32_t node, uint64_t bytes, bool fill) {
  (void)bytes;
  (void)fill;
  const uint64_t used = layout_->config().remote_vc_budget - budget_remaining_[node];
  metrics_.peak_remote_vc_bytes = std::max(metrics_.peak_remote_vc_bytes, used);
}

bool Cluster::slot_valid(uint32_t node, uint64_t vc, uint32_t offset) const {
  return vc_memory_[node].valid(vc, offset);
}

uint64_t Cluster::slot_resident(uint32_t node, uint64_t vc, uint32_t offset) const {
  return vc_memory_[node].resident(vc, offset);
}

bool Cluster::consumed(uint64_t file_id) const {
  return consumed_.get(layout_->pc_of(file_id), layout_->offset_of(file_id));
}

const PrefetchWindow& Cluster::window(uint32_t owner, uint32_t requester) const {
  return windows_[owner * layout_->config().nodes + requester];
}

void Cluster::debug_set_consumed(uint64_t file_id) {
  consumed_.set(layout_->pc_of(file_id), layout_->offset_of(file_id));
}

void Cluster::debug_fill_slot(uint32_t node, uint64_t vc, uint32_t offset,
                              uint64_t file_id) {
  vc_memory_[node].fill(vc, offset, file_id);
}

}  // namespace redox
