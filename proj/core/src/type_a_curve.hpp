#pragma once

#include <gmpxx.h>

#include <optional>

#include "o2di/bytes.hpp"
#include "o2di/group.hpp"

namespace o2di::detail {

// Supersingular curve y^2 = x^3 + x over F_p, p = 3 mod 4, with an order-r
// subgroup G1 and embedding degree 2. The symmetric pairing is the reduced
// Tate pairing composed with the distortion map (x, y) -> (-x, i*y), landing
// in the order-r subgroup of F_p2^* = F_p[i]/(i^2 + 1).
class TypeACurve {
 public:
  TypeACurve(int security_bits, const char* field_prime, const char* group_order);

  int security_bits() const { return security_bits_; }
  const mpz_class& p() const { return p_; }
  const mpz_class& r() const { return r_; }
  const mpz_class& cofactor() const { return h_; }
  std::size_t field_bytes() const { return field_bytes_; }
  std::size_t scalar_bytes() const { return scalar_bytes_; }
  std::size_t point_bytes() const { return field_bytes_ + 1; }
  std::size_t fp2_bytes() const { return 2 * field_bytes_; }
  const Point& generator() const { return generator_; }

  bool on_curve(const Point& P) const;
  Point add(const Point& P, const Point& Q) const;
  Point negate(const Point& P) const;
  Point mul(const Point& P, const mpz_class& k) const;
  bool in_subgroup(const Point& P) const;

  Fp2 fp2_one() const { return Fp2{1, 0}; }
  Fp2 fp2_mul(const Fp2& x, const Fp2& y) const;
  Fp2 fp2_sqr(const Fp2& x) const;
  Fp2 fp2_conj(const Fp2& x) const;
  Fp2 fp2_inv(const Fp2& x) const;
  Fp2 fp2_pow(const Fp2& x, const mpz_class& e) const;
  bool in_target_subgroup(const Fp2& x) const;

  Fp2 pairing(const Point& P, const Point& Q) const;

  std::optional<mpz_class> sqrt(const mpz_class& v) const;
  // Deterministic map of (dst, msg) into G1 (try-and-increment, then
  // cofactor clearing). Never returns the identity.
  Point hash_to_point(BytesView dst, BytesView msg) const;

  Bytes encode_point(const Point& P) const;
  Point decode_point(BytesView in) const;
  Bytes encode_fp2(const Fp2& x) const;
  Fp2 decode_fp2(BytesView in) const;

  void export_fixed(const mpz_class& v, std::size_t width, std::uint8_t* out) const;
  mpz_class import_bytes(BytesView in) const;

 private:
  struct Jacobian {
    mpz_class X, Y, Z;  // Z == 0 encodes the point at infinity
  };

  void reduce(mpz_class& v) const;
  Point to_affine(const Jacobian& J) const;
  void jac_double(Jacobian& J) const;
  void jac_add_affine(Jacobian& J, const Point& P) const;
  Fp2 final_exponentiation(const Fp2& f) const;

  int security_bits_;
  mpz_class p_, r_, h_, sqrt_exp_;
  std::size_t field_bytes_, scalar_bytes_;
  Point generator_;
};

const TypeACurve& type_a_curve(int security_bits);

}  // namespace o2di::detail
