#include "o2di/hash.hpp"

#include "digest.hpp"
#include "o2di/op_counter.hpp"

namespace o2di {

namespace {

Scalar digest_to_scalar(const Group& group, std::string_view tag, BytesView key, BytesView input) {
  const std::uint8_t tag_len = static_cast<std::uint8_t>(tag.size());
  auto d = detail::sha3_256({BytesView(&tag_len, 1), as_bytes(tag), key, input});
  return group.reduce_bytes(d);
}

}  // namespace

G1Element hash_to_g1_tagged(const Group& group, std::string_view tag, BytesView input) {
  count_op(&OpCounts::hash_to_g1);
  return group.map_to_g1(tag, input);
}

Scalar hash_to_scalar_tagged(const Group& group, std::string_view tag, BytesView input) {
  count_op(&OpCounts::hash_to_scalar);
  return digest_to_scalar(group, tag, {}, input);
}

G1Element hash_to_g1(const Group& group, BytesView input) { return hash_to_g1_tagged(group, kTagH, input); }

Scalar hash_to_scalar(const Group& group, BytesView input) {
  return hash_to_scalar_tagged(group, kTagHPrime, input);
}

Scalar prf_eval(const Group& group, const Scalar& key, BytesView input) {
  count_op(&OpCounts::prf);
  return digest_to_scalar(group, kTagPrf, key.encode(), input);
}

}  // namespace o2di
