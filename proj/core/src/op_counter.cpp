#include "o2di/op_counter.hpp"

namespace o2di {

namespace {
thread_local OpCounter* innermost = nullptr;
}

OpCounter::OpCounter() : outer_(innermost) { innermost = this; }

OpCounter::~OpCounter() { innermost = outer_; }

void count_op(std::uint64_t OpCounts::*field, std::uint64_t n) {
  for (OpCounter* c = innermost; c != nullptr; c = c->outer_) c->counts_.*field += n;
}

}  // namespace o2di
