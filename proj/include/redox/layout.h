#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace redox {

// Static sizing parameters. Divisibility constraints keep every chunk,
// physical-chunk set and per-node partition exactly uniform.
struct LayoutConfig {
  uint64_t files = 0;            // F: total files across all nodes
  uint64_t chunk_size = 64;      // K: files per physical/virtual chunk
  uint64_t virtual_chunks = 0;   // M: virtual chunks across all nodes
  uint64_t nodes = 1;            // N: training nodes
  uint64_t prefetch_window = 1;  // P: prefetch window size
  uint64_t layout_seed = 0;
  uint64_t remote_vc_budget = 1'500'000'000;  // bytes per node for remote VC payloads

  // Throws ConfigError naming the failed constraint.
  void validate() const;

  uint64_t pcs_size() const { return files / (chunk_size * virtual_chunks); }  // G
  uint64_t physical_chunks() const { return files / chunk_size; }
  uint64_t files_per_node() const { return files / nodes; }
  uint64_t vcs_per_node() const { return virtual_chunks / nodes; }
  uint64_t pcs_per_node() const { return physical_chunks() / nodes; }
};

struct FileSlot {
  uint64_t vc;
  uint32_t offset;
  uint32_t home;
};

// Immutable file -> chunk -> virtual chunk -> node mapping.
//
// Files are stored consecutively: file f lives in physical chunk f/K at
// offset f%K. Node n owns files [n*F/N, (n+1)*F/N); within a node,
// consecutive blocks of G local physical chunks map to one local virtual
// chunk, so VC n*(M/N)+j is backed by the node's j-th block of G chunks.
class Layout {
public:
  Layout(LayoutConfig cfg, std::vector<uint64_t> file_sizes);

  const LayoutConfig& config() const { return cfg_; }
  uint64_t files() const { return cfg_.files; }
  uint64_t chunk_size() const { return cfg_.chunk_size; }
  uint64_t pcs_size() const { return cfg_.pcs_size(); }

  uint64_t pc_of(uint64_t file_id) const { return file_id / cfg_.chunk_size; }
  uint32_t offset_of(uint64_t file_id) const {
    return static_cast<uint32_t>(file_id % cfg_.chunk_size);
  }
  uint64_t file_of(uint64_t pc, uint32_t offset) const {
    return pc * cfg_.chunk_size + offset;
  }

  uint64_t vc_of_pc(uint64_t pc) const { return pc_to_vc_[pc]; }
  uint32_t home_of_pc(uint64_t pc) const {
    return static_cast<uint32_t>(pc / cfg_.pcs_per_node());
  }
  uint32_t home_of_file(uint64_t file_id) const { return home_of_pc(pc_of(file_id)); }
  uint32_t home_of_vc(uint64_t vc) const {
    return static_cast<uint32_t>(vc / cfg_.vcs_per_node());
  }

  // Range-checked; throws ConfigError on out-of-range ids.
  FileSlot slot_of(uint64_t file_id) const;

  // The physical chunk set of a virtual chunk, in fixed PCS order.
  std::span<const uint64_t> pcs_of_vc(uint64_t vc) const;

  uint64_t size_of(uint64_t file_id) const { return file_sizes_[file_id]; }
  const std::vector<uint64_t>& file_sizes() const { return file_sizes_; }
  uint64_t chunk_bytes(uint64_t pc) const;

private:
  LayoutConfig cfg_;
  std::vector<uint64_t> file_sizes_;
  std::vector<uint64_t> pc_to_vc_;   // one entry per physical chunk
  std::vector<uint64_t> vc_to_pcs_;  // M * G, row-major PCS table
};

// Builds the mapping tables and validates the config and file sizes.
Layout build_layout(const LayoutConfig& cfg, std::vector<uint64_t> file_sizes);

// One epoch's global random access order with round-robin requesters.
struct EpochTrace {
  uint64_t epoch_seed = 0;
  std::vector<uint64_t> order;       // sn -> file id (a permutation)
  std::vector<uint32_t> requester;   // sn -> requesting node (sn mod N)
  std::vector<uint64_t> sn_of_file;  // inverse of `order`

  uint64_t size() const { return order.size(); }
};

// Uniform random permutation of all file ids under epoch_seed.
EpochTrace generate_epoch_trace(const Layout& layout, uint64_t epoch_seed);

// Wraps an explicit order (harness scripts, cross-checking). Validates that
// `order` is a permutation of all file ids.
EpochTrace make_epoch_trace(const Layout& layout, std::vector<uint64_t> order,
                            uint64_t label_seed);

}  // namespace redox
