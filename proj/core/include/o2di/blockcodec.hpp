#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "o2di/bytes.hpp"
#include "o2di/group.hpp"
#include "o2di/random.hpp"

namespace o2di {

// A byte file laid out as l scalars. Data is cut into chunks of
// (l_Zq - 1) bytes read big-endian, so every block is below q. The last data
// chunk carries PKCS#7-style padding (a full padding chunk when the data is
// chunk-aligned), block l holds the 8-byte plaintext length, and the blocks
// in between are zero.
struct DataFile {
  std::vector<Scalar> blocks;
  Bytes digest;  // SHA3-256 of the original bytes
  std::uint64_t size = 0;
};

struct Replica {
  Bytes id;
  DataFile file;
};

std::size_t chunk_width(const Group& group);
// Largest plaintext that fits in l blocks.
std::size_t file_capacity(const Group& group, std::size_t blocks);

// Throws CapacityError when the input exceeds file_capacity.
DataFile encode_file(const Group& group, BytesView data, std::size_t blocks);
// Throws DecodeError on any inconsistency in padding, trailer, or fill.
Bytes decode_file(const Group& group, std::span<const Scalar> blocks);
// Also checks the recorded size and digest.
Bytes decode_file(const Group& group, const DataFile& file);

// Replica ids: "<digest prefix>-j<server>-<nonce>", ASCII and filename-safe.
std::vector<Replica> make_replicas(const DataFile& file, std::size_t count, Rng& rng);

// On-disk block file: "O2DI-BLK", version, l (u32), scalar width (u16),
// then l fixed-width scalars.
inline constexpr std::string_view kBlockMagic = "O2DI-BLK";
inline constexpr std::uint8_t kFormatVersion = 1;

Bytes encode_block_file(const Group& group, std::span<const Scalar> blocks);
std::vector<Scalar> decode_block_file(const Group& group, BytesView in);

}  // namespace o2di
