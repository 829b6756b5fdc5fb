#include "redox/layout.h"

#include <numeric>
#include <string>

#include "redox/error.h"
#include "redox/rng.h"

namespace redox {

void LayoutConfig::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("layout config: " + what); };
  if (chunk_size < 1) fail("K must be >= 1");
  if (virtual_chunks < 1) fail("M must be >= 1");
  if (nodes < 1) fail("N must be >= 1");
  if (prefetch_window < 1) fail("P must be >= 1");
  if (files < 1) fail("F must be >= 1");
  if (virtual_chunks % nodes != 0)
    fail("M mod N != 0 (virtual chunks must partition evenly across nodes); M=" +
         std::to_string(virtual_chunks) + " N=" + std::to_string(nodes));
  if (files % (chunk_size * virtual_chunks) != 0)
    fail("F mod (K*M) != 0 (every virtual chunk needs an identical PCS size); F=" +
         std::to_string(files) + " K=" + std::to_string(chunk_size) +
         " M=" + std::to_string(virtual_chunks));
  if (files % nodes != 0)
    fail("F mod N != 0 (files must partition evenly across homes); F=" +
         std::to_string(files) + " N=" + std::to_string(nodes));
}

Layout::Layout(LayoutConfig cfg, std::vector<uint64_t> file_sizes)
    : cfg_(cfg), file_sizes_(std::move(file_sizes)) {
  cfg_.validate();
  if (file_sizes_.size() != cfg_.files)
    throw ConfigError("layout: got " + std::to_string(file_sizes_.size()) +
                      " file sizes, expected F=" + std::to_string(cfg_.files));
  for (uint64_t i = 0; i < file_sizes_.size(); ++i)
    if (file_sizes_[i] == 0)
      throw ConfigError("layout: file " + std::to_string(i) + " has zero size");

  const uint64_t g = cfg_.pcs_size();
  const uint64_t num_pcs = cfg_.physical_chunks();
  const uint64_t vcs_per_node = cfg_.vcs_per_node();
  const uint64_t pcs_per_node = cfg_.pcs_per_node();

  pc_to_vc_.resize(num_pcs);
  vc_to_pcs_.assign(cfg_.virtual_chunks * g, 0);
  for (uint64_t pc = 0; pc < num_pcs; ++pc) {
    const uint64_t node = pc / pcs_per_node;
    const uint64_t local = pc % pcs_per_node;
    const uint64_t vc = node * vcs_per_node + local / g;
    pc_to_vc_[pc] = vc;
    vc_to_pcs_[vc * g + local % g] = pc;
  }

  // Mapping tables must be mutually inverse and home-consistent.
  for (uint64_t vc = 0; vc < cfg_.virtual_chunks; ++vc)
    for (uint64_t i = 0; i < g; ++i) {
      const uint64_t pc = vc_to_pcs_[vc * g + i];
      REDOX_CHECK(pc_to_vc_[pc] == vc, "PC<->VC tables are not mutually inverse");
      REDOX_CHECK(home_of_pc(pc) == home_of_vc(vc), "PC home differs from its VC home");
    }
}

FileSlot Layout::slot_of(uint64_t file_id) const {
  if (file_id >= cfg_.files)
    throw ConfigError("file id " + std::to_string(file_id) + " out of range [0, " +
                      std::to_string(cfg_.files) + ")");
  const uint64_t pc = pc_of(file_id);
  return FileSlot{vc_of_pc(pc), offset_of(file_id), home_of_pc(pc)};
}

std::span<const uint64_t> Layout::pcs_of_vc(uint64_t vc) const {
  const uint64_t g = cfg_.pcs_size();
  return std::span<const uint64_t>(vc_to_pcs_.data() + vc * g, g);
}

uint64_t Layout::chunk_bytes(uint64_t pc) const {
  uint64_t total = 0;
  for (uint64_t o = 0; o < cfg_.chunk_size; ++o) total += file_sizes_[file_of(pc, static_cast<uint32_t>(o))];
  return total;
}

Layout build_layout(const LayoutConfig& cfg, std::vector<uint64_t> file_sizes) {
  return Layout(cfg, std::move(file_sizes));
}

EpochTrace generate_epoch_trace(const Layout& layout, uint64_t epoch_seed) {
  std::vector<uint64_t> order(layout.files());
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 rng(epoch_seed);
  shuffle(order, rng);
  return make_epoch_trace(layout, std::move(order), epoch_seed);
}

EpochTrace make_epoch_trace(const Layout& layout, std::vector<uint64_t> order,
                            uint64_t label_seed) {
  const uint64_t f = layout.files();
  if (order.size() != f)
    throw ConfigError("trace: got " + std::to_string(order.size()) +
                      " entries, expected F=" + std::to_string(f));
  EpochTrace trace;
  trace.epoch_seed = label_seed;
  trace.sn_of_file.assign(f, UINT64_MAX);
  trace.requester.resize(f);
  const uint32_t n = static_cast<uint32_t>(layout.config().nodes);
  for (uint64_t sn = 0; sn < f; ++sn) {
    const uint64_t fid = order[sn];
    if (fid >= f || trace.sn_of_file[fid] != UINT64_MAX)
      throw ConfigError("trace: order is not a permutation of file ids");
    trace.sn_of_file[fid] = sn;
    trace.requester[sn] = static_cast<uint32_t>(sn % n);
  }
  trace.order = std::move(order);
  return trace;
}

}  // namespace redox
