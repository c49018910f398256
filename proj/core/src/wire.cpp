#include "o2di/wire.hpp"

#include <limits>

#include "o2di/errors.hpp"

namespace o2di::wire {

const char* message_type_name(MessageType type) {
  switch (type) {
    case MessageType::challenge1: return "CHALLENGE1";
    case MessageType::challenge2: return "CHALLENGE2";
    case MessageType::challenge3: return "CHALLENGE3";
    case MessageType::challenge4: return "CHALLENGE4";
    case MessageType::proof: return "PROOF";
    case MessageType::trapdoor: return "TRAPDOOR";
    case MessageType::corrupt_set: return "CORRUPT-SET";
    case MessageType::repair: return "REPAIR";
    case MessageType::fetch: return "FETCH";
    case MessageType::replica: return "REPLICA";
    case MessageType::cache: return "CACHE";
    case MessageType::ack: return "ACK";
    case MessageType::error: return "ERROR";
  }
  return "UNKNOWN";
}

Bytes encode_frame(const Frame& frame) {
  if (frame.payload.size() > std::numeric_limits<std::uint32_t>::max()) throw Error("frame payload too large");
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(frame.payload.size()));
  w.u8(static_cast<std::uint8_t>(frame.type));
  w.raw(frame.payload);
  return std::move(w).take();
}

Frame decode_frame(BytesView bytes) {
  ByteReader r(bytes);
  const std::uint32_t len = r.u32();
  const std::uint8_t type = r.u8();
  if (type < 1 || type > static_cast<std::uint8_t>(MessageType::error)) {
    throw DecodeError("unknown message type " + std::to_string(type));
  }
  Frame f;
  f.type = static_cast<MessageType>(type);
  auto body = r.raw(len);
  f.payload.assign(body.begin(), body.end());
  r.expect_done();
  return f;
}

std::size_t challenge_body_size(const Group& group, std::size_t challenged) {
  return 2 * group.g1_size() + challenged * (8 + group.scalar_size());
}

Bytes encode_challenge_body(const Challenge& chal) {
  ByteWriter w;
  w.raw(chal.c1.encode());
  w.raw(chal.c2.encode());
  for (const auto& c : chal.coefficients) {
    w.u64(c.index);
    w.raw(c.value.encode());
  }
  return std::move(w).take();
}

Challenge decode_challenge_body(const Group& group, std::size_t blocks, BytesView bytes) {
  const std::size_t head = 2 * group.g1_size();
  const std::size_t pair = 8 + group.scalar_size();
  if (bytes.size() < head + pair || (bytes.size() - head) % pair != 0) {
    throw DecodeError("challenge body has invalid length");
  }
  ByteReader r(bytes);
  Challenge chal;
  chal.c1 = group.decode_g1(r.raw(group.g1_size()));
  chal.c2 = group.decode_g1(r.raw(group.g1_size()));
  std::uint64_t prev = 0;
  while (!r.done()) {
    Coefficient c;
    c.index = r.u64();
    if (c.index <= prev || c.index > blocks) throw DecodeError("challenge block numbers must be ascending and in range");
    prev = c.index;
    c.value = group.decode_scalar(r.raw(group.scalar_size()));
    chal.coefficients.push_back(std::move(c));
  }
  return chal;
}

Bytes encode_proof(const Proof& proof) {
  ByteWriter w;
  w.raw(proof.p1.encode());
  w.raw(proof.p2.encode());
  return std::move(w).take();
}

Proof decode_proof(const Group& group, BytesView bytes) {
  if (bytes.size() != 2 * group.g2_size()) throw DecodeError("proof must be exactly two target-group elements");
  return Proof{group.decode_g2(bytes.first(group.g2_size())), group.decode_g2(bytes.subspan(group.g2_size()))};
}

void write_scalars(ByteWriter& w, std::span<const Scalar> values) {
  for (const auto& v : values) w.raw(v.encode());
}

std::vector<Scalar> read_scalars(const Group& group, ByteReader& r, std::size_t count) {
  std::vector<Scalar> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(group.decode_scalar(r.raw(group.scalar_size())));
  return out;
}

namespace {

void check_type(MessageType type, std::initializer_list<MessageType> allowed) {
  for (auto a : allowed) {
    if (a == type) return;
  }
  throw Error(std::string("message type not allowed here: ") + message_type_name(type));
}

void write_ids(ByteWriter& w, std::span<const Bytes> ids) {
  if (ids.size() > 0xFFFF) throw Error("too many replica ids in one message");
  w.u16(static_cast<std::uint16_t>(ids.size()));
  for (const auto& id : ids) w.var16(id);
}

std::vector<Bytes> read_ids(ByteReader& r) {
  const std::uint16_t n = r.u16();
  std::vector<Bytes> ids;
  ids.reserve(n);
  for (std::uint16_t i = 0; i < n; ++i) {
    auto id = r.var16();
    ids.emplace_back(id.begin(), id.end());
  }
  return ids;
}

BytesView rest(ByteReader& r) { return r.raw(r.remaining()); }

}  // namespace

Frame make_single_challenge(MessageType type, const SingleChallenge& msg) {
  check_type(type, {MessageType::challenge1, MessageType::challenge3});
  ByteWriter w;
  w.var16(msg.replica_id);
  w.raw(encode_challenge_body(msg.challenge));
  return Frame{type, std::move(w).take()};
}

SingleChallenge parse_single_challenge(const Group& group, std::size_t blocks, BytesView payload) {
  ByteReader r(payload);
  SingleChallenge msg;
  auto id = r.var16();
  msg.replica_id.assign(id.begin(), id.end());
  msg.challenge = decode_challenge_body(group, blocks, rest(r));
  return msg;
}

Frame make_multi_challenge(MessageType type, const MultiChallenge& msg) {
  check_type(type, {MessageType::challenge2, MessageType::challenge4});
  ByteWriter w;
  w.raw(msg.prf_key.encode());
  write_ids(w, msg.replica_ids);
  w.raw(encode_challenge_body(msg.challenge));
  return Frame{type, std::move(w).take()};
}

MultiChallenge parse_multi_challenge(const Group& group, std::size_t blocks, BytesView payload) {
  ByteReader r(payload);
  MultiChallenge msg;
  msg.prf_key = group.decode_scalar(r.raw(group.scalar_size()));
  msg.replica_ids = read_ids(r);
  if (msg.replica_ids.empty()) throw DecodeError("multi-file challenge names no replicas");
  msg.challenge = decode_challenge_body(group, blocks, rest(r));
  return msg;
}

Frame make_trapdoor(const TrapdoorRequest& msg) {
  if (msg.trap.size() != msg.replica_ids.size()) throw Error("trapdoor and replica list differ in length");
  ByteWriter w;
  write_ids(w, msg.replica_ids);
  write_scalars(w, msg.trap);
  w.raw(encode_challenge_body(msg.challenge));
  return Frame{MessageType::trapdoor, std::move(w).take()};
}

TrapdoorRequest parse_trapdoor(const Group& group, std::size_t blocks, BytesView payload) {
  ByteReader r(payload);
  TrapdoorRequest msg;
  msg.replica_ids = read_ids(r);
  msg.trap = read_scalars(group, r, msg.replica_ids.size());
  msg.challenge = decode_challenge_body(group, blocks, rest(r));
  return msg;
}

Frame make_corrupt_set(const CorruptSet& msg) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(msg.positions.size()));
  for (auto p : msg.positions) w.u32(p);
  return Frame{MessageType::corrupt_set, std::move(w).take()};
}

CorruptSet parse_corrupt_set(BytesView payload) {
  ByteReader r(payload);
  CorruptSet msg;
  const std::uint32_t n = r.u32();
  if (r.remaining() != static_cast<std::size_t>(n) * 4) throw DecodeError("corrupt set has invalid length");
  for (std::uint32_t i = 0; i < n; ++i) msg.positions.push_back(r.u32());
  return msg;
}

Frame make_upload(MessageType type, const ReplicaUpload& msg) {
  check_type(type, {MessageType::cache, MessageType::repair});
  if (msg.blocks.size() != msg.tag.size()) throw Error("replica and tag differ in length");
  ByteWriter w;
  w.var16(msg.replica_id);
  w.u32(static_cast<std::uint32_t>(msg.blocks.size()));
  write_scalars(w, msg.blocks);
  write_scalars(w, msg.tag);
  return Frame{type, std::move(w).take()};
}

ReplicaUpload parse_upload(const Group& group, BytesView payload) {
  ByteReader r(payload);
  ReplicaUpload msg;
  auto id = r.var16();
  msg.replica_id.assign(id.begin(), id.end());
  const std::uint32_t l = r.u32();
  if (r.remaining() != 2 * static_cast<std::size_t>(l) * group.scalar_size()) {
    throw DecodeError("upload has invalid length");
  }
  msg.blocks = read_scalars(group, r, l);
  msg.tag = read_scalars(group, r, l);
  return msg;
}

Frame make_fetch(BytesView replica_id) {
  ByteWriter w;
  w.var16(replica_id);
  return Frame{MessageType::fetch, std::move(w).take()};
}

Bytes parse_fetch(BytesView payload) {
  ByteReader r(payload);
  auto id = r.var16();
  r.expect_done();
  return Bytes(id.begin(), id.end());
}

Frame make_replica(std::span<const Scalar> blocks) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(blocks.size()));
  write_scalars(w, blocks);
  return Frame{MessageType::replica, std::move(w).take()};
}

std::vector<Scalar> parse_replica(const Group& group, BytesView payload) {
  ByteReader r(payload);
  const std::uint32_t l = r.u32();
  if (r.remaining() != static_cast<std::size_t>(l) * group.scalar_size()) {
    throw DecodeError("replica has invalid length");
  }
  return read_scalars(group, r, l);
}

Frame make_proof(const Proof& proof) { return Frame{MessageType::proof, encode_proof(proof)}; }

Frame make_ack() { return Frame{MessageType::ack, {}}; }

Frame make_error(const ErrorReply& err) {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(err.code));
  w.var16(as_bytes(err.message.substr(0, 0xFFFF)));
  return Frame{MessageType::error, std::move(w).take()};
}

ErrorReply parse_error(BytesView payload) {
  ByteReader r(payload);
  ErrorReply err;
  const std::uint8_t code = r.u8();
  if (code < 1 || code > static_cast<std::uint8_t>(ErrorCode::internal)) throw DecodeError("unknown error code");
  err.code = static_cast<ErrorCode>(code);
  err.message = to_string(r.var16());
  r.expect_done();
  return err;
}

}  // namespace o2di::wire
