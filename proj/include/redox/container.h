#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "redox/layout.h"

namespace redox {

// Supplies payload bytes for file ids during packing and verification.
class PayloadSource {
public:
  virtual ~PayloadSource() = default;
  virtual uint64_t size(uint64_t file_id) const = 0;
  virtual std::vector<uint8_t> bytes(uint64_t file_id) const = 0;
};

// Deterministic pseudo-random payloads derived from (seed, file_id); lets
// desk-scale runs work without any corpus on disk.
class SyntheticPayloads : public PayloadSource {
public:
  SyntheticPayloads(uint64_t seed, std::vector<uint64_t> sizes)
      : seed_(seed), sizes_(std::move(sizes)) {}
  uint64_t size(uint64_t file_id) const override;
  std::vector<uint8_t> bytes(uint64_t file_id) const override;

private:
  uint64_t seed_;
  std::vector<uint64_t> sizes_;
};

// Reads payloads from a directory of files named by decimal file id.
class DirectoryPayloads : public PayloadSource {
public:
  explicit DirectoryPayloads(std::string dir) : dir_(std::move(dir)) {}
  uint64_t size(uint64_t file_id) const override;
  std::vector<uint8_t> bytes(uint64_t file_id) const override;

private:
  std::string path_of(uint64_t file_id) const;
  std::string dir_;
};

// Packed-chunk container layout:
//   magic "RDOX" | u32 version(1) | u32 K | K x (u64 file_id, u64 offset,
//   u64 length) | concatenated payloads
// All integers little-endian. Offsets are absolute from the start of the
// container; offset[0] equals the header size (12 + 24*K).
struct ChunkTableEntry {
  uint64_t file_id = 0;
  uint64_t offset = 0;
  uint64_t length = 0;
};

struct ParsedChunk {
  uint32_t version = 0;
  std::vector<ChunkTableEntry> entries;
  std::vector<uint8_t> raw;  // full container bytes

  std::span<const uint8_t> payload(uint64_t index) const {
    const auto& e = entries[index];
    return std::span<const uint8_t>(raw.data() + e.offset, e.length);
  }
};

inline uint64_t chunk_header_bytes(uint64_t k) { return 12 + 24 * k; }

// Serializes one physical chunk's files, in chunk order.
std::vector<uint8_t> pack_chunk_bytes(std::span<const uint64_t> file_ids,
                                      const PayloadSource& source);

// Parses and validates a container; throws IoError on corruption.
ParsedChunk parse_chunk_bytes(std::vector<uint8_t> bytes);

// Packs every physical chunk of the layout into <out_dir>/chunk-<pc>.rdox.
// Verifies source sizes against the layout first.
void pack_chunks(const Layout& layout, const PayloadSource& source,
                 const std::string& out_dir);

std::string chunk_file_name(uint64_t pc);

std::vector<uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, std::span<const uint8_t> bytes);

}  // namespace redox
