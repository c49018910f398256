#include "o2di/blockcodec.hpp"

#include <algorithm>

#include "digest.hpp"
#include "o2di/errors.hpp"

namespace o2di {

std::size_t chunk_width(const Group& group) { return group.scalar_size() - 1; }

std::size_t file_capacity(const Group& group, std::size_t blocks) {
  if (blocks < 2) return 0;
  return (blocks - 1) * chunk_width(group) - 1;
}

DataFile encode_file(const Group& group, BytesView data, std::size_t blocks) {
  if (blocks < 2) throw CapacityError("a block file needs at least 2 blocks (data and length trailer)");
  if (data.size() > file_capacity(group, blocks)) {
    throw CapacityError("input of " + std::to_string(data.size()) + " bytes exceeds capacity " +
                        std::to_string(file_capacity(group, blocks)) + "; split it into several files");
  }
  const std::size_t w = chunk_width(group);
  const std::size_t pad = w - data.size() % w;
  Bytes padded(data.begin(), data.end());
  padded.insert(padded.end(), pad, static_cast<std::uint8_t>(pad));

  DataFile out;
  out.size = data.size();
  auto d = detail::sha3_256({data});
  out.digest.assign(d.begin(), d.end());
  out.blocks.reserve(blocks);
  for (std::size_t off = 0; off < padded.size(); off += w) {
    out.blocks.push_back(group.reduce_bytes(BytesView(padded).subspan(off, w)));
  }
  while (out.blocks.size() < blocks - 1) out.blocks.push_back(group.zero());
  ByteWriter trailer;
  trailer.u64(data.size());
  out.blocks.push_back(group.reduce_bytes(trailer.bytes()));
  return out;
}

Bytes decode_file(const Group& group, std::span<const Scalar> blocks) {
  if (blocks.size() < 2) throw DecodeError("block vector too short");
  const std::size_t w = chunk_width(group);
  const Bytes trailer = blocks.back().encode();
  // The trailer holds an 8-byte length; every higher byte must be zero.
  if (std::any_of(trailer.begin(), trailer.end() - 8, [](std::uint8_t b) { return b != 0; })) {
    throw DecodeError("corrupted length trailer");
  }
  ByteReader lr(BytesView(trailer).last(8));
  const std::uint64_t length = lr.u64();
  if (length > file_capacity(group, blocks.size())) throw DecodeError("length trailer exceeds file capacity");
  const std::size_t chunks = static_cast<std::size_t>(length / w) + 1;

  Bytes padded;
  padded.reserve(chunks * w);
  for (std::size_t c = 0; c < chunks; ++c) {
    const Bytes enc = blocks[c].encode();
    if (enc[0] != 0) throw DecodeError("data block exceeds chunk width");
    padded.insert(padded.end(), enc.begin() + 1, enc.end());
  }
  for (std::size_t c = chunks; c + 1 < blocks.size(); ++c) {
    if (!blocks[c].is_zero()) throw DecodeError("nonzero fill block after padding");
  }
  const std::size_t pad = w - static_cast<std::size_t>(length % w);
  if (padded.size() != length + pad) throw DecodeError("padding length mismatch");
  for (std::size_t i = static_cast<std::size_t>(length); i < padded.size(); ++i) {
    if (padded[i] != pad) throw DecodeError("corrupted padding");
  }
  padded.resize(static_cast<std::size_t>(length));
  return padded;
}

Bytes decode_file(const Group& group, const DataFile& file) {
  Bytes out = decode_file(group, file.blocks);
  if (out.size() != file.size) throw DecodeError("decoded length differs from the recorded size");
  auto d = detail::sha3_256({out});
  if (!file.digest.empty() && !std::equal(d.begin(), d.end(), file.digest.begin(), file.digest.end())) {
    throw DecodeError("decoded content does not match the recorded digest");
  }
  return out;
}

std::vector<Replica> make_replicas(const DataFile& file, std::size_t count, Rng& rng) {
  if (count == 0) throw std::invalid_argument("at least one replica is required");
  std::vector<Replica> out;
  out.reserve(count);
  const std::string prefix = to_hex(BytesView(file.digest).first(std::min<std::size_t>(8, file.digest.size())));
  for (std::size_t j = 0; j < count; ++j) {
    std::string id = prefix + "-j" + std::to_string(j + 1) + "-" + to_hex(rng.bytes(8));
    out.push_back(Replica{to_bytes(id), file});
  }
  return out;
}

Bytes encode_block_file(const Group& group, std::span<const Scalar> blocks) {
  ByteWriter w;
  w.raw(as_bytes(kBlockMagic)).u8(kFormatVersion).u32(static_cast<std::uint32_t>(blocks.size()));
  w.u16(static_cast<std::uint16_t>(group.scalar_size()));
  for (const auto& b : blocks) w.raw(b.encode());
  return std::move(w).take();
}

std::vector<Scalar> decode_block_file(const Group& group, BytesView in) {
  ByteReader r(in);
  if (to_string(r.raw(kBlockMagic.size())) != kBlockMagic) throw DecodeError("not a block file");
  if (r.u8() != kFormatVersion) throw DecodeError("unsupported block file version");
  const std::uint32_t count = r.u32();
  if (r.u16() != group.scalar_size()) throw DecodeError("block file scalar width does not match the group");
  if (r.remaining() != static_cast<std::size_t>(count) * group.scalar_size()) {
    throw DecodeError("block file length does not match its header");
  }
  std::vector<Scalar> blocks;
  blocks.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) blocks.push_back(group.decode_scalar(r.raw(group.scalar_size())));
  return blocks;
}

}  // namespace o2di
