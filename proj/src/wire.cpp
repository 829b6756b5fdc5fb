#include "redox/wire.h"

#include <cstring>

#include "redox/error.h"

namespace redox {
namespace wire {

namespace {

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

class Reader {
public:
  explicit Reader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  uint8_t u8() { return take(1)[0]; }
  uint16_t u16() {
    auto p = take(2);
    return static_cast<uint16_t>(p[0] | (p[1] << 8));
  }
  uint32_t u32() {
    auto p = take(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(p[i]) << (8 * i);
    return v;
  }
  uint64_t u64() {
    auto p = take(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
    return v;
  }
  std::span<const uint8_t> take(uint64_t n) {
    if (pos_ + n > bytes_.size()) throw IoError("wire: truncated message");
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  bool done() const { return pos_ == bytes_.size(); }

private:
  std::span<const uint8_t> bytes_;
  uint64_t pos_ = 0;
};

void expect_magic(Reader& r) {
  if (r.u32() != kMagic) throw IoError("wire: bad magic");
}

}  // namespace

uint64_t response_encoded_size(uint16_t window, std::span<const uint64_t> payload_sizes) {
  uint64_t n = 4 + 1 + 2 + (static_cast<uint64_t>(window) + 7) / 8;
  for (uint64_t s : payload_sizes) n += 16 + s;
  return n;
}

uint64_t error_encoded_size(const ErrorMsg& msg) { return 4 + 1 + 4 + 2 + msg.message.size(); }

std::vector<uint8_t> encode_request(const RequestMsg& msg) {
  if (msg.type != MsgType::read && msg.type != MsgType::read_prefetch)
    throw IoError("wire: not a request type");
  std::vector<uint8_t> out;
  out.reserve(request_encoded_size());
  put_u32(out, kMagic);
  out.push_back(static_cast<uint8_t>(msg.type));
  put_u64(out, msg.file_id);
  put_u64(out, msg.requester);
  put_u64(out, msg.remaining_budget);
  return out;
}

RequestMsg decode_request(std::span<const uint8_t> bytes) {
  Reader r(bytes);
  expect_magic(r);
  RequestMsg msg;
  const uint8_t type = r.u8();
  if (type != 1 && type != 2) throw IoError("wire: unexpected request type");
  msg.type = static_cast<MsgType>(type);
  msg.file_id = r.u64();
  msg.requester = r.u64();
  msg.remaining_budget = r.u64();
  if (!r.done()) throw IoError("wire: trailing bytes after request");
  return msg;
}

std::vector<uint8_t> encode_response(const ResponseMsg& msg) {
  const uint64_t map_bytes = (static_cast<uint64_t>(msg.window) + 7) / 8;
  if (msg.map.size() != map_bytes) throw IoError("wire: response map size mismatch");
  uint64_t set_bits = 0;
  for (uint64_t j = 0; j < msg.window; ++j)
    if (map_bit(msg.map, j)) ++set_bits;
  if (set_bits != msg.payloads.size())
    throw IoError("wire: response payload count does not match map popcount");
  std::vector<uint8_t> out;
  put_u32(out, kMagic);
  out.push_back(static_cast<uint8_t>(MsgType::response));
  put_u16(out, msg.window);
  out.insert(out.end(), msg.map.begin(), msg.map.end());
  for (const auto& p : msg.payloads) {
    put_u64(out, p.file_id);
    put_u64(out, p.bytes.size());
    out.insert(out.end(), p.bytes.begin(), p.bytes.end());
  }
  return out;
}

ResponseMsg decode_response(std::span<const uint8_t> bytes) {
  Reader r(bytes);
  expect_magic(r);
  if (r.u8() != static_cast<uint8_t>(MsgType::response))
    throw IoError("wire: unexpected response type");
  ResponseMsg msg;
  msg.window = r.u16();
  const uint64_t map_bytes = (static_cast<uint64_t>(msg.window) + 7) / 8;
  auto map = r.take(map_bytes);
  msg.map.assign(map.begin(), map.end());
  for (uint64_t j = 0; j < msg.window; ++j) {
    if (!map_bit(msg.map, j)) continue;
    ResponsePayload p;
    p.file_id = r.u64();
    const uint64_t len = r.u64();
    auto body = r.take(len);
    p.bytes.assign(body.begin(), body.end());
    msg.payloads.push_back(std::move(p));
  }
  if (!r.done()) throw IoError("wire: trailing bytes after response");
  return msg;
}

std::vector<uint8_t> encode_error(const ErrorMsg& msg) {
  if (msg.message.size() > UINT16_MAX) throw IoError("wire: error message too long");
  std::vector<uint8_t> out;
  put_u32(out, kMagic);
  out.push_back(static_cast<uint8_t>(MsgType::error));
  put_u32(out, msg.code);
  put_u16(out, static_cast<uint16_t>(msg.message.size()));
  out.insert(out.end(), msg.message.begin(), msg.message.end());
  return out;
}

ErrorMsg decode_error(std::span<const uint8_t> bytes) {
  Reader r(bytes);
  expect_magic(r);
  if (r.u8() != static_cast<uint8_t>(MsgType::error))
    throw IoError("wire: unexpected error type");
  ErrorMsg msg;
  msg.code = r.u32();
  const uint16_t len = r.u16();
  auto body = r.take(len);
  msg.message.assign(body.begin(), body.end());
  if (!r.done()) throw IoError("wire: trailing bytes after error");
  return msg;
}

}  // namespace wire
}  // namespace redox
