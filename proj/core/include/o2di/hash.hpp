#pragma once

#include <string_view>

#include "o2di/bytes.hpp"
#include "o2di/group.hpp"

namespace o2di {

// Domain-separation tags for the three oracles.
inline constexpr std::string_view kTagH = "O2DI-H";
inline constexpr std::string_view kTagHPrime = "O2DI-Hp";
inline constexpr std::string_view kTagPrf = "O2DI-F";

// H: {0,1}* -> G1.
G1Element hash_to_g1(const Group& group, BytesView input);
// H': {0,1}* -> Z_q, SHA3-256(tag || input) mod q.
Scalar hash_to_scalar(const Group& group, BytesView input);
// F_k(x) = SHA3-256(tag || encode(k) || x) mod q.
Scalar prf_eval(const Group& group, const Scalar& key, BytesView input);

// Same constructions under a caller-chosen tag (used by the IBS layer).
G1Element hash_to_g1_tagged(const Group& group, std::string_view tag, BytesView input);
Scalar hash_to_scalar_tagged(const Group& group, std::string_view tag, BytesView input);

}  // namespace o2di
