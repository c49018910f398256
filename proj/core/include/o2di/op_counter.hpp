#pragma once

#include <cstdint>

namespace o2di {

// Tallies of the group-suite operations performed while an OpCounter is alive
// on the current thread. Internal arithmetic (cofactor clearing, subgroup
// checks, pairing internals) is not counted; only calls through the public
// element API are.
struct OpCounts {
  std::uint64_t scalar_mul = 0;
  std::uint64_t scalar_add = 0;  // additions, subtractions, negations
  std::uint64_t hash_to_scalar = 0;
  std::uint64_t prf = 0;
  std::uint64_t hash_to_g1 = 0;
  std::uint64_t g1_mul = 0;
  std::uint64_t g1_exp = 0;
  std::uint64_t g2_mul = 0;
  std::uint64_t g2_exp = 0;
  std::uint64_t pairing = 0;

  std::uint64_t exponentiations() const { return g1_exp + g2_exp; }
  bool operator==(const OpCounts&) const = default;
};

// Scoped, per-thread counter. Counters nest: every live counter on the
// thread sees the operations performed during its own lifetime.
class OpCounter {
 public:
  OpCounter();
  ~OpCounter();
  OpCounter(const OpCounter&) = delete;
  OpCounter& operator=(const OpCounter&) = delete;

  const OpCounts& counts() const { return counts_; }

 private:
  friend void count_op(std::uint64_t OpCounts::*field, std::uint64_t n);
  OpCounts counts_;
  OpCounter* outer_;
};

void count_op(std::uint64_t OpCounts::*field, std::uint64_t n = 1);

}  // namespace o2di
