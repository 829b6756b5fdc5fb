#include "redox/container.h"

#include <cstring>
#include <filesystem>
#include <fstream>

#include "redox/error.h"
#include "redox/rng.h"

namespace redox {

namespace {

constexpr char kMagic[4] = {'R', 'D', 'O', 'X'};
constexpr uint32_t kVersion = 1;

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint32_t get_u32(const uint8_t* p) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(p[i]) << (8 * i);
  return v;
}

uint64_t get_u64(const uint8_t* p) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
  return v;
}

}  // namespace

uint64_t SyntheticPayloads::size(uint64_t file_id) const {
  if (file_id >= sizes_.size())
    throw ConfigError("synthetic payloads: file id out of range");
  return sizes_[file_id];
}

std::vector<uint8_t> SyntheticPayloads::bytes(uint64_t file_id) const {
  const uint64_t n = size(file_id);
  std::vector<uint8_t> out(n);
  SplitMix64 rng(derive_seed(seed_, file_id));
  uint64_t i = 0;
  while (i + 8 <= n) {
    const uint64_t w = rng.next();
    std::memcpy(out.data() + i, &w, 8);
    i += 8;
  }
  if (i < n) {
    const uint64_t w = rng.next();
    std::memcpy(out.data() + i, &w, n - i);
  }
  return out;
}

std::string DirectoryPayloads::path_of(uint64_t file_id) const {
  return dir_ + "/" + std::to_string(file_id);
}

uint64_t DirectoryPayloads::size(uint64_t file_id) const {
  std::error_code ec;
  const auto n = std::filesystem::file_size(path_of(file_id), ec);
  if (ec) throw IoError("cannot stat payload file " + path_of(file_id) + ": " + ec.message());
  return n;
}

std::vector<uint8_t> DirectoryPayloads::bytes(uint64_t file_id) const {
  return read_file_bytes(path_of(file_id));
}

std::vector<uint8_t> pack_chunk_bytes(std::span<const uint64_t> file_ids,
                                      const PayloadSource& source) {
  const uint64_t k = file_ids.size();
  std::vector<uint8_t> out;
  out.reserve(chunk_header_bytes(k));
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<uint32_t>(k));
  uint64_t offset = chunk_header_bytes(k);
  for (uint64_t fid : file_ids) {
    const uint64_t len = source.size(fid);
    put_u64(out, fid);
    put_u64(out, offset);
    put_u64(out, len);
    offset += len;
  }
  for (uint64_t fid : file_ids) {
    const auto payload = source.bytes(fid);
    if (payload.size() != source.size(fid))
      throw IoError("payload size changed while packing file " + std::to_string(fid));
    out.insert(out.end(), payload.begin(), payload.end());
  }
  return out;
}

ParsedChunk parse_chunk_bytes(std::vector<uint8_t> bytes) {
  if (bytes.size() < 12) throw IoError("chunk container: truncated header");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0)
    throw IoError("chunk container: bad magic");
  ParsedChunk chunk;
  chunk.version = get_u32(bytes.data() + 4);
  if (chunk.version != kVersion)
    throw IoError("chunk container: unsupported version " + std::to_string(chunk.version));
  const uint32_t k = get_u32(bytes.data() + 8);
  const uint64_t header = chunk_header_bytes(k);
  if (bytes.size() < header) throw IoError("chunk container: truncated table");
  chunk.entries.resize(k);
  uint64_t expected_offset = header;
  for (uint32_t i = 0; i < k; ++i) {
    const uint8_t* p = bytes.data() + 12 + 24 * static_cast<uint64_t>(i);
    chunk.entries[i] = ChunkTableEntry{get_u64(p), get_u64(p + 8), get_u64(p + 16)};
    if (chunk.entries[i].offset != expected_offset)
      throw IoError("chunk container: table offsets are not contiguous/increasing");
    expected_offset += chunk.entries[i].length;
  }
  if (bytes.size() != expected_offset)
    throw IoError("chunk container: size mismatch (expected " +
                  std::to_string(expected_offset) + " bytes, got " +
                  std::to_string(bytes.size()) + ")");
  chunk.raw = std::move(bytes);
  return chunk;
}

std::string chunk_file_name(uint64_t pc) { return "chunk-" + std::to_string(pc) + ".rdox"; }

void pack_chunks(const Layout& layout, const PayloadSource& source,
                 const std::string& out_dir) {
  for (uint64_t fid = 0; fid < layout.files(); ++fid)
    if (source.size(fid) != layout.size_of(fid))
      throw IoError("payload size for file " + std::to_string(fid) +
                    " disagrees with layout (" + std::to_string(source.size(fid)) +
                    " vs " + std::to_string(layout.size_of(fid)) + ")");
  std::filesystem::create_directories(out_dir);
  const uint64_t k = layout.chunk_size();
  std::vector<uint64_t> ids(k);
  for (uint64_t pc = 0; pc < layout.config().physical_chunks(); ++pc) {
    for (uint64_t o = 0; o < k; ++o) ids[o] = layout.file_of(pc, static_cast<uint32_t>(o));
    const auto bytes = pack_chunk_bytes(ids, source);
    write_file_bytes(out_dir + "/" + chunk_file_name(pc), bytes);
  }
}

std::vector<uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for " + path);
  return bytes;
}

void write_file_bytes(const std::string& path, std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace redox
