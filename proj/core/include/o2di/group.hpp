#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>

#include "o2di/bytes.hpp"
#include "o2di/random.hpp"

namespace o2di {

namespace detail {
class TypeACurve;

struct Point {
  mpz_class x, y;
  bool infinity = true;
};

// a + b*i with i^2 = -1.
struct Fp2 {
  mpz_class a, b;
};
}  // namespace detail

class Group;

// Element of Z_q. Default-constructed scalars are unbound and only usable as
// assignment targets.
class Scalar {
 public:
  Scalar() = default;

  const mpz_class& value() const { return v_; }
  bool is_zero() const { return v_ == 0; }
  bool bound() const { return curve_ != nullptr; }

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar inverse() const;

  bool operator==(const Scalar& o) const { return v_ == o.v_; }

  // Fixed-width big-endian, ceil(|q|/8) bytes.
  Bytes encode() const;

 private:
  friend class Group;
  friend class G1Element;
  friend class G2Element;
  Scalar(const detail::TypeACurve* c, mpz_class v) : curve_(c), v_(std::move(v)) {}

  const detail::TypeACurve* curve_ = nullptr;
  mpz_class v_;
};

// Element of the source group G1 (written multiplicatively).
class G1Element {
 public:
  G1Element() = default;

  G1Element operator*(const G1Element& o) const;
  G1Element pow(const Scalar& e) const;
  G1Element inverse() const;
  bool is_identity() const { return p_.infinity; }
  bool operator==(const G1Element& o) const;

  // Compressed: tag byte (0x00 identity, 0x02/0x03 y parity) then x.
  Bytes encode() const;
  const detail::Point& point() const { return p_; }

 private:
  friend class Group;
  G1Element(const detail::TypeACurve* c, detail::Point p) : curve_(c), p_(std::move(p)) {}

  const detail::TypeACurve* curve_ = nullptr;
  detail::Point p_;
};

// Element of the pairing target group G2, the order-q subgroup of F_p2^*.
class G2Element {
 public:
  G2Element() = default;

  G2Element operator*(const G2Element& o) const;
  G2Element pow(const Scalar& e) const;
  G2Element inverse() const;
  bool is_identity() const;
  bool operator==(const G2Element& o) const;

  // a || b, each a fixed-width big-endian field element.
  Bytes encode() const;
  const detail::Fp2& value() const { return v_; }

 private:
  friend class Group;
  G2Element(const detail::TypeACurve* c, detail::Fp2 v) : curve_(c), v_(std::move(v)) {}

  const detail::TypeACurve* curve_ = nullptr;
  detail::Fp2 v_;
};

// Group description: prime order q, generator g of G1 and the symmetric
// pairing e: G1 x G1 -> G2. Cheap to copy; all copies share one immutable
// parameter set.
class Group {
 public:
  int security_bits() const;
  const mpz_class& order() const;
  std::size_t order_bits() const;
  // Encoded sizes l_Zq, l_G1, l_G2.
  std::size_t scalar_size() const;
  std::size_t g1_size() const;
  std::size_t g2_size() const;

  G1Element generator() const;
  G1Element g1_identity() const;
  G2Element g2_identity() const;

  Scalar zero() const { return scalar(0); }
  Scalar one() const { return scalar(1); }
  Scalar scalar(std::uint64_t v) const;
  Scalar scalar(const mpz_class& v) const;
  Scalar random_scalar(Rng& rng) const;
  Scalar random_nonzero_scalar(Rng& rng) const;
  // Interprets the bytes big-endian and reduces mod q.
  Scalar reduce_bytes(BytesView in) const;

  G2Element pair(const G1Element& a, const G1Element& b) const;

  // Strict decoders: reject wrong lengths, out-of-range values, and group
  // elements outside the order-q subgroup.
  Scalar decode_scalar(BytesView in) const;
  G1Element decode_g1(BytesView in) const;
  G2Element decode_g2(BytesView in) const;

  // Raw map into G1 under an explicit domain tag (not counted).
  G1Element map_to_g1(std::string_view tag, BytesView msg) const;

  bool operator==(const Group& o) const { return curve_ == o.curve_; }
  const detail::TypeACurve& curve() const { return *curve_; }

 private:
  friend Group generate_group(int security_bits);
  explicit Group(const detail::TypeACurve* c) : curve_(c) {}
  const detail::TypeACurve* curve_;
};

// Returns the group for a supported security level (80 bits: |q| = 160).
Group generate_group(int security_bits);

}  // namespace o2di
