#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "redox/cost.h"
#include "redox/layout.h"

namespace redox {

struct PayloadHandle {
  uint64_t file_id = UINT64_MAX;
  uint64_t bytes = 0;
};

struct ChunkReadResult {
  std::vector<PayloadHandle> files;  // all K files, in chunk order
  double seconds = 0;
  uint64_t bytes = 0;
};

// Chunk-granularity storage: whole-chunk reads are the only interface, which
// keeps every disk access batched and sequential by construction.
class ChunkStore {
public:
  virtual ~ChunkStore() = default;
  virtual ChunkReadResult read_chunk(uint64_t pc) = 0;
  virtual const CostModel& cost_model() const = 0;
  virtual uint64_t reads_performed() const = 0;
};

// Size-only backend; payload bytes are never materialized.
class SyntheticStore : public ChunkStore {
public:
  SyntheticStore(const Layout& layout, CostModel cost);
  ChunkReadResult read_chunk(uint64_t pc) override;
  const CostModel& cost_model() const override { return cost_; }
  uint64_t reads_performed() const override { return reads_; }

private:
  const Layout* layout_;
  CostModel cost_;
  uint64_t reads_ = 0;
};

// Reads packed containers produced by pack_chunks. Tables are validated
// against the layout when the store is opened.
class PackedDirStore : public ChunkStore {
public:
  PackedDirStore(const Layout& layout, std::string dir, CostModel cost);
  ChunkReadResult read_chunk(uint64_t pc) override;
  const CostModel& cost_model() const override { return cost_; }
  uint64_t reads_performed() const override { return reads_; }

private:
  const Layout* layout_;
  std::string dir_;
  CostModel cost_;
  uint64_t reads_ = 0;
};

}  // namespace redox
