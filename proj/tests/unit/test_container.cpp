#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "redox/container.h"
#include "redox/error.h"
#include "redox/rng.h"
#include "redox/storage.h"
#include "support.h"

using namespace redox;

namespace {

class MapSource : public PayloadSource {
public:
  explicit MapSource(std::vector<std::vector<uint8_t>> blobs) : blobs_(std::move(blobs)) {}
  uint64_t size(uint64_t fid) const override { return blobs_.at(fid).size(); }
  std::vector<uint8_t> bytes(uint64_t fid) const override { return blobs_.at(fid); }

private:
  std::vector<std::vector<uint8_t>> blobs_;
};

std::filesystem::path temp_dir(const char* tag) {
  auto dir = std::filesystem::temp_directory_path() /
             (std::string("redox-test-") + tag + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("single-file container has the exact expected bytes") {
  MapSource source({{}, {}, {}, {}, {}, {}, {}, {0xAA, 0xBB, 0xCC}});
  const std::vector<uint64_t> ids{7};
  const auto bytes = pack_chunk_bytes(ids, source);
  const std::vector<uint8_t> expected = {
      'R', 'D', 'O', 'X',          // magic
      0x01, 0x00, 0x00, 0x00,      // version 1
      0x01, 0x00, 0x00, 0x00,      // K = 1
      0x07, 0, 0, 0, 0, 0, 0, 0,   // file id 7
      0x24, 0, 0, 0, 0, 0, 0, 0,   // offset 36 == header size
      0x03, 0, 0, 0, 0, 0, 0, 0,   // length 3
      0xAA, 0xBB, 0xCC,
  };
  CHECK(bytes == expected);

  const ParsedChunk parsed = parse_chunk_bytes(bytes);
  CHECK(parsed.entries.size() == 1);
  CHECK(parsed.entries[0].file_id == 7);
  CHECK(parsed.entries[0].offset == chunk_header_bytes(1));
  const auto payload = parsed.payload(0);
  CHECK(std::vector<uint8_t>(payload.begin(), payload.end()) ==
        std::vector<uint8_t>{0xAA, 0xBB, 0xCC});
}

TEST_CASE("pack/parse round trip over random size distributions") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const uint64_t k = 1 + rng.next_below(16);
    std::vector<uint64_t> sizes(k * 2);
    for (auto& s : sizes) s = 1 + rng.next_below(3000);
    SyntheticPayloads source(rng.next(), sizes);
    std::vector<uint64_t> ids(k);
    for (uint64_t i = 0; i < k; ++i) ids[i] = i + k;  // second chunk's files
    const auto packed = pack_chunk_bytes(ids, source);
    const ParsedChunk parsed = parse_chunk_bytes(packed);
    REQUIRE(parsed.entries.size() == k);
    for (uint64_t i = 0; i < k; ++i) {
      CHECK(parsed.entries[i].file_id == ids[i]);
      const auto payload = parsed.payload(i);
      CHECK(std::vector<uint8_t>(payload.begin(), payload.end()) == source.bytes(ids[i]));
    }
  }
}

TEST_CASE("corrupt containers are rejected") {
  MapSource source({{1, 2, 3, 4}});
  auto good = pack_chunk_bytes(std::vector<uint64_t>{0}, source);

  auto bad_magic = good;
  bad_magic[0] = 'X';
  CHECK_THROWS_WITH_AS(parse_chunk_bytes(bad_magic), doctest::Contains("magic"), IoError);

  auto truncated = good;
  truncated.resize(10);
  CHECK_THROWS_AS(parse_chunk_bytes(truncated), IoError);

  auto short_payload = good;
  short_payload.pop_back();
  CHECK_THROWS_WITH_AS(parse_chunk_bytes(short_payload), doctest::Contains("size mismatch"),
                       IoError);

  auto bad_offset = good;
  bad_offset[12 + 8] = 0x99;  // table offset field
  CHECK_THROWS_WITH_AS(parse_chunk_bytes(bad_offset), doctest::Contains("offsets"), IoError);

  auto bad_version = good;
  bad_version[4] = 9;
  CHECK_THROWS_WITH_AS(parse_chunk_bytes(bad_version), doctest::Contains("version"), IoError);
}

TEST_CASE("pack_chunks + PackedDirStore round trip against the layout") {
  const Layout layout = testsupport::unit_sized_layout(12, 3, 2, 1);
  SyntheticPayloads source(5, layout.file_sizes());
  const auto dir = temp_dir("pack");
  pack_chunks(layout, source, dir.string());
  CHECK(std::filesystem::exists(dir / "chunk-0.rdox"));
  CHECK(std::filesystem::exists(dir / "chunk-3.rdox"));

  PackedDirStore store(layout, dir.string(), CostModel{});
  const ChunkReadResult read = store.read_chunk(2);
  REQUIRE(read.files.size() == 3);
  CHECK(read.files[0].file_id == 6);
  CHECK(read.bytes == 3000);
  CHECK(store.reads_performed() == 1);

  // A source whose sizes disagree with the layout is rejected.
  SyntheticPayloads wrong(5, std::vector<uint64_t>(12, 999));
  CHECK_THROWS_AS(pack_chunks(layout, wrong, dir.string()), IoError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("synthetic payloads are deterministic in (seed, id)") {
  SyntheticPayloads a(42, {10, 20});
  SyntheticPayloads b(42, {10, 20});
  SyntheticPayloads c(43, {10, 20});
  CHECK(a.bytes(1) == b.bytes(1));
  CHECK(a.bytes(1) != c.bytes(1));
  CHECK(a.bytes(0).size() == 10);
}
