#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "o2di/bytes.hpp"
#include "o2di/scheme.hpp"

namespace o2di::wire {

enum class MessageType : std::uint8_t {
  challenge1 = 1,
  challenge2 = 2,
  challenge3 = 3,
  challenge4 = 4,
  proof = 5,
  trapdoor = 6,
  corrupt_set = 7,
  repair = 8,
  fetch = 9,
  replica = 10,
  cache = 11,
  ack = 12,
  error = 13,
};

const char* message_type_name(MessageType type);

enum class ErrorCode : std::uint8_t {
  unknown_replica = 1,
  inconsistent_challenge = 2,
  malformed = 3,
  duplicate_replica = 4,
  capacity = 5,
  internal = 6,
};

// Frame: u32 payload length (big-endian) || u8 type || payload.
struct Frame {
  MessageType type = MessageType::ack;
  Bytes payload;
};

inline constexpr std::size_t kFrameHeaderSize = 5;

Bytes encode_frame(const Frame& frame);
Frame decode_frame(BytesView bytes);

// c1 || c2 || (u64 block number || v)*; the pair count is implied by length.
Bytes encode_challenge_body(const Challenge& chal);
Challenge decode_challenge_body(const Group& group, std::size_t blocks, BytesView bytes);
std::size_t challenge_body_size(const Group& group, std::size_t challenged);

Bytes encode_proof(const Proof& proof);
Proof decode_proof(const Group& group, BytesView bytes);

struct SingleChallenge {  // CHALLENGE1, CHALLENGE3
  Bytes replica_id;
  Challenge challenge;
};

struct MultiChallenge {   // CHALLENGE2, CHALLENGE4
  Scalar prf_key;
  std::vector<Bytes> replica_ids;
  Challenge challenge;
};

struct TrapdoorRequest {
  std::vector<Bytes> replica_ids;
  Trapdoor trap;
  Challenge challenge;
};

struct CorruptSet {
  std::vector<std::uint32_t> positions;
};

struct ReplicaUpload {    // CACHE, REPAIR
  Bytes replica_id;
  std::vector<Scalar> blocks;
  std::vector<Scalar> tag;
};

struct ErrorReply {
  ErrorCode code = ErrorCode::internal;
  std::string message;
};

Frame make_single_challenge(MessageType type, const SingleChallenge& msg);
SingleChallenge parse_single_challenge(const Group& group, std::size_t blocks, BytesView payload);

Frame make_multi_challenge(MessageType type, const MultiChallenge& msg);
MultiChallenge parse_multi_challenge(const Group& group, std::size_t blocks, BytesView payload);

Frame make_trapdoor(const TrapdoorRequest& msg);
TrapdoorRequest parse_trapdoor(const Group& group, std::size_t blocks, BytesView payload);

Frame make_corrupt_set(const CorruptSet& msg);
CorruptSet parse_corrupt_set(BytesView payload);

Frame make_upload(MessageType type, const ReplicaUpload& msg);
ReplicaUpload parse_upload(const Group& group, BytesView payload);

Frame make_fetch(BytesView replica_id);
Bytes parse_fetch(BytesView payload);

Frame make_replica(std::span<const Scalar> blocks);
std::vector<Scalar> parse_replica(const Group& group, BytesView payload);

Frame make_proof(const Proof& proof);
Frame make_ack();
Frame make_error(const ErrorReply& err);
ErrorReply parse_error(BytesView payload);

void write_scalars(ByteWriter& w, std::span<const Scalar> values);
std::vector<Scalar> read_scalars(const Group& group, ByteReader& r, std::size_t count);

}  // namespace o2di::wire
