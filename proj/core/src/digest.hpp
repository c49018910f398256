#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

#include "o2di/bytes.hpp"

namespace o2di::detail {

using Digest256 = std::array<std::uint8_t, 32>;
using Digest512 = std::array<std::uint8_t, 64>;

Digest256 sha3_256(std::initializer_list<BytesView> parts);
Digest512 sha3_512(std::initializer_list<BytesView> parts);

}  // namespace o2di::detail
