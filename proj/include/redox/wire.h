#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace redox {
namespace wire {

// All integers little-endian. Map bits are LSB-first within each byte:
// window slot j lives in byte j/8, bit j%8.
constexpr uint32_t kMagic = 0x52445851;

enum class MsgType : uint8_t {
  read = 1,           // on-demand remote read
  read_prefetch = 2,  // on-demand remote read + opportunistic prefetch
  response = 3,
  error = 4,
};

struct RequestMsg {
  MsgType type = MsgType::read;
  uint64_t file_id = 0;
  uint64_t requester = 0;
  uint64_t remaining_budget = 0;  // requester's free remote-VC bytes
};

struct ResponsePayload {
  uint64_t file_id = 0;
  std::vector<uint8_t> bytes;
};

struct ResponseMsg {
  uint16_t window = 0;        // P
  std::vector<uint8_t> map;   // P bits; payloads align to set bits in order
  std::vector<ResponsePayload> payloads;
};

struct ErrorMsg {
  uint32_t code = 0;
  std::string message;
};

constexpr uint64_t request_encoded_size() { return 4 + 1 + 8 + 8 + 8; }
uint64_t response_encoded_size(uint16_t window, std::span<const uint64_t> payload_sizes);
uint64_t error_encoded_size(const ErrorMsg& msg);

inline bool map_bit(std::span<const uint8_t> map, uint64_t j) {
  return (map[j / 8] >> (j % 8)) & 1;
}
inline void set_map_bit(std::span<uint8_t> map, uint64_t j) {
  map[j / 8] |= static_cast<uint8_t>(1u << (j % 8));
}

std::vector<uint8_t> encode_request(const RequestMsg& msg);
RequestMsg decode_request(std::span<const uint8_t> bytes);

std::vector<uint8_t> encode_response(const ResponseMsg& msg);
ResponseMsg decode_response(std::span<const uint8_t> bytes);

std::vector<uint8_t> encode_error(const ErrorMsg& msg);
ErrorMsg decode_error(std::span<const uint8_t> bytes);

}  // namespace wire
}  // namespace redox
