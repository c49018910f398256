#pragma once

#include <cstdint>
#include <memory>
#include <span>

#include "o2di/bytes.hpp"

namespace o2di {

// Randomness source. `system()` draws from the OS CSPRNG; `seeded()` is a
// SHA3-512 counter-mode generator for reproducible runs and tests.
class Rng {
 public:
  static Rng system();
  static Rng seeded(std::uint64_t seed);
  static Rng seeded(BytesView seed);

  void fill(std::span<std::uint8_t> out);
  Bytes bytes(std::size_t n);
  std::uint64_t next_u64();
  // Uniform in [0, bound); bound must be nonzero.
  std::uint64_t below(std::uint64_t bound);
  bool deterministic() const { return deterministic_; }

  // Derives an independent deterministic child stream (for fan-out).
  Rng fork();

 private:
  Rng() = default;
  void refill();

  bool deterministic_ = false;
  Bytes key_;
  std::uint64_t counter_ = 0;
  std::uint8_t block_[64] = {};
  std::size_t used_ = 64;
};

}  // namespace o2di
