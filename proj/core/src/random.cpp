#include "o2di/random.hpp"

#include <openssl/rand.h>

#include <algorithm>
#include <cstring>

#include "digest.hpp"
#include "o2di/errors.hpp"

namespace o2di {

Rng Rng::system() { return Rng(); }

Rng Rng::seeded(std::uint64_t seed) {
  ByteWriter w;
  w.raw(as_bytes("O2DI-RNG")).u64(seed);
  return seeded(w.bytes());
}

Rng Rng::seeded(BytesView seed) {
  Rng r;
  r.deterministic_ = true;
  r.key_.assign(seed.begin(), seed.end());
  return r;
}

void Rng::refill() {
  std::uint8_t ctr[8];
  for (int i = 0; i < 8; ++i) ctr[i] = static_cast<std::uint8_t>(counter_ >> (56 - 8 * i));
  ++counter_;
  auto d = detail::sha3_512({key_, BytesView(ctr, 8)});
  std::memcpy(block_, d.data(), d.size());
  used_ = 0;
}

void Rng::fill(std::span<std::uint8_t> out) {
  if (!deterministic_) {
    if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) throw Error("RAND_bytes failed");
    return;
  }
  std::size_t off = 0;
  while (off < out.size()) {
    if (used_ == sizeof(block_)) refill();
    std::size_t n = std::min(out.size() - off, sizeof(block_) - used_);
    std::memcpy(out.data() + off, block_ + used_, n);
    used_ += n;
    off += n;
  }
}

Bytes Rng::bytes(std::size_t n) {
  Bytes b(n);
  fill(b);
  return b;
}

std::uint64_t Rng::next_u64() {
  std::uint8_t b[8];
  fill(b);
  std::uint64_t v = 0;
  for (auto c : b) v = (v << 8) | c;
  return v;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw Error("Rng::below: zero bound");
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  for (;;) {
    std::uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

Rng Rng::fork() {
  if (!deterministic_) return Rng::system();
  return Rng::seeded(bytes(32));
}

}  // namespace o2di
