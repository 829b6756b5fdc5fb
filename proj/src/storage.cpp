#include "redox/storage.h"

#include "redox/container.h"
#include "redox/error.h"

namespace redox {

SyntheticStore::SyntheticStore(const Layout& layout, CostModel cost)
    : layout_(&layout), cost_(cost) {
  cost_.validate();
}

ChunkReadResult SyntheticStore::read_chunk(uint64_t pc) {
  if (pc >= layout_->config().physical_chunks())
    throw IoError("read_chunk: physical chunk " + std::to_string(pc) + " out of range");
  ChunkReadResult result;
  const uint64_t k = layout_->chunk_size();
  result.files.reserve(k);
  for (uint64_t o = 0; o < k; ++o) {
    const uint64_t fid = layout_->file_of(pc, static_cast<uint32_t>(o));
    result.files.push_back(PayloadHandle{fid, layout_->size_of(fid)});
    result.bytes += layout_->size_of(fid);
  }
  result.seconds = cost_.chunk_read_seconds(result.bytes);
  ++reads_;
  return result;
}

PackedDirStore::PackedDirStore(const Layout& layout, std::string dir, CostModel cost)
    : layout_(&layout), dir_(std::move(dir)), cost_(cost) {
  cost_.validate();
  // Validate every container's table against the layout up front; a bad pack
  // should fail at open time, not mid-epoch.
  for (uint64_t pc = 0; pc < layout_->config().physical_chunks(); ++pc) {
    const auto chunk = parse_chunk_bytes(read_file_bytes(dir_ + "/" + chunk_file_name(pc)));
    if (chunk.entries.size() != layout_->chunk_size())
      throw IoError("packed chunk " + std::to_string(pc) + " has wrong file count");
    for (uint64_t o = 0; o < chunk.entries.size(); ++o) {
      const uint64_t fid = layout_->file_of(pc, static_cast<uint32_t>(o));
      if (chunk.entries[o].file_id != fid)
        throw IoError("packed chunk " + std::to_string(pc) +
                      " file table disagrees with layout at slot " + std::to_string(o));
      if (chunk.entries[o].length != layout_->size_of(fid))
        throw IoError("packed chunk " + std::to_string(pc) + " payload length for file " +
                      std::to_string(fid) + " disagrees with layout");
    }
  }
}

ChunkReadResult PackedDirStore::read_chunk(uint64_t pc) {
  const auto chunk = parse_chunk_bytes(read_file_bytes(dir_ + "/" + chunk_file_name(pc)));
  ChunkReadResult result;
  result.files.reserve(chunk.entries.size());
  for (const auto& e : chunk.entries) {
    result.files.push_back(PayloadHandle{e.file_id, e.length});
    result.bytes += e.length;
  }
  result.seconds = cost_.chunk_read_seconds(result.bytes);
  ++reads_;
  return result;
}

}  // namespace redox
