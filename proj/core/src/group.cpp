#include "o2di/group.hpp"

#include "o2di/errors.hpp"
#include "o2di/op_counter.hpp"
#include "type_a_curve.hpp"

namespace o2di {

namespace {

const detail::TypeACurve& same_curve(const detail::TypeACurve* a, const detail::TypeACurve* b) {
  if (a == nullptr || a != b) throw Error("operands belong to different or unbound groups");
  return *a;
}

const detail::TypeACurve& require_curve(const detail::TypeACurve* c) {
  if (c == nullptr) throw Error("operation on an unbound element");
  return *c;
}

mpz_class mod_q(const detail::TypeACurve& c, mpz_class v) {
  mpz_mod(v.get_mpz_t(), v.get_mpz_t(), c.r().get_mpz_t());
  return v;
}

}  // namespace

// Scalar

Scalar Scalar::operator+(const Scalar& o) const {
  const auto& c = same_curve(curve_, o.curve_);
  count_op(&OpCounts::scalar_add);
  mpz_class v = v_ + o.v_;
  if (v >= c.r()) v -= c.r();
  return Scalar(curve_, std::move(v));
}

Scalar Scalar::operator-(const Scalar& o) const {
  const auto& c = same_curve(curve_, o.curve_);
  count_op(&OpCounts::scalar_add);
  mpz_class v = v_ - o.v_;
  if (v < 0) v += c.r();
  return Scalar(curve_, std::move(v));
}

Scalar Scalar::operator*(const Scalar& o) const {
  const auto& c = same_curve(curve_, o.curve_);
  count_op(&OpCounts::scalar_mul);
  return Scalar(curve_, mod_q(c, v_ * o.v_));
}

Scalar Scalar::operator-() const {
  const auto& c = require_curve(curve_);
  count_op(&OpCounts::scalar_add);
  return Scalar(curve_, v_ == 0 ? mpz_class(0) : mpz_class(c.r() - v_));
}

Scalar Scalar::inverse() const {
  const auto& c = require_curve(curve_);
  if (v_ == 0) throw Error("inverse of zero scalar");
  mpz_class out;
  mpz_invert(out.get_mpz_t(), v_.get_mpz_t(), c.r().get_mpz_t());
  return Scalar(curve_, std::move(out));
}

Bytes Scalar::encode() const {
  const auto& c = require_curve(curve_);
  Bytes out(c.scalar_bytes());
  c.export_fixed(v_, out.size(), out.data());
  return out;
}

// G1

G1Element G1Element::operator*(const G1Element& o) const {
  const auto& c = same_curve(curve_, o.curve_);
  count_op(&OpCounts::g1_mul);
  return G1Element(curve_, c.add(p_, o.p_));
}

G1Element G1Element::pow(const Scalar& e) const {
  const auto& c = same_curve(curve_, e.curve_);
  count_op(&OpCounts::g1_exp);
  return G1Element(curve_, c.mul(p_, e.v_));
}

G1Element G1Element::inverse() const { return G1Element(curve_, require_curve(curve_).negate(p_)); }

bool G1Element::operator==(const G1Element& o) const {
  if (p_.infinity || o.p_.infinity) return p_.infinity == o.p_.infinity;
  return p_.x == o.p_.x && p_.y == o.p_.y;
}

Bytes G1Element::encode() const { return require_curve(curve_).encode_point(p_); }

// G2

G2Element G2Element::operator*(const G2Element& o) const {
  const auto& c = same_curve(curve_, o.curve_);
  count_op(&OpCounts::g2_mul);
  return G2Element(curve_, c.fp2_mul(v_, o.v_));
}

G2Element G2Element::pow(const Scalar& e) const {
  const auto& c = same_curve(curve_, e.curve_);
  count_op(&OpCounts::g2_exp);
  return G2Element(curve_, c.fp2_pow(v_, e.v_));
}

G2Element G2Element::inverse() const {
  // Elements of the order-q subgroup have norm 1, so the inverse is the conjugate.
  return G2Element(curve_, require_curve(curve_).fp2_conj(v_));
}

bool G2Element::is_identity() const { return v_.a == 1 && v_.b == 0; }

bool G2Element::operator==(const G2Element& o) const { return v_.a == o.v_.a && v_.b == o.v_.b; }

Bytes G2Element::encode() const { return require_curve(curve_).encode_fp2(v_); }

// Group

int Group::security_bits() const { return curve_->security_bits(); }
const mpz_class& Group::order() const { return curve_->r(); }
std::size_t Group::order_bits() const { return mpz_sizeinbase(curve_->r().get_mpz_t(), 2); }
std::size_t Group::scalar_size() const { return curve_->scalar_bytes(); }
std::size_t Group::g1_size() const { return curve_->point_bytes(); }
std::size_t Group::g2_size() const { return curve_->fp2_bytes(); }

G1Element Group::generator() const { return G1Element(curve_, curve_->generator()); }
G1Element Group::g1_identity() const { return G1Element(curve_, detail::Point{}); }
G2Element Group::g2_identity() const { return G2Element(curve_, curve_->fp2_one()); }

Scalar Group::scalar(std::uint64_t v) const {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return Scalar(curve_, mod_q(*curve_, std::move(z)));
}

Scalar Group::scalar(const mpz_class& v) const { return Scalar(curve_, mod_q(*curve_, v)); }

Scalar Group::random_scalar(Rng& rng) const {
  const std::size_t bits = order_bits();
  Bytes buf(scalar_size());
  const unsigned excess = static_cast<unsigned>(buf.size() * 8 - bits);
  for (;;) {
    rng.fill(buf);
    buf[0] &= static_cast<std::uint8_t>(0xff >> excess);
    mpz_class v = curve_->import_bytes(buf);
    if (v < curve_->r()) return Scalar(curve_, std::move(v));
  }
}

Scalar Group::random_nonzero_scalar(Rng& rng) const {
  for (;;) {
    Scalar s = random_scalar(rng);
    if (!s.is_zero()) return s;
  }
}

Scalar Group::reduce_bytes(BytesView in) const { return Scalar(curve_, mod_q(*curve_, curve_->import_bytes(in))); }

G2Element Group::pair(const G1Element& a, const G1Element& b) const {
  same_curve(curve_, a.curve_);
  same_curve(curve_, b.curve_);
  count_op(&OpCounts::pairing);
  return G2Element(curve_, curve_->pairing(a.p_, b.p_));
}

Scalar Group::decode_scalar(BytesView in) const {
  if (in.size() != scalar_size()) throw DecodeError("scalar encoding has wrong length");
  mpz_class v = curve_->import_bytes(in);
  if (v >= curve_->r()) throw DecodeError("scalar out of range");
  return Scalar(curve_, std::move(v));
}

G1Element Group::decode_g1(BytesView in) const { return G1Element(curve_, curve_->decode_point(in)); }

G2Element Group::decode_g2(BytesView in) const { return G2Element(curve_, curve_->decode_fp2(in)); }

G1Element Group::map_to_g1(std::string_view tag, BytesView msg) const {
  return G1Element(curve_, curve_->hash_to_point(as_bytes(tag), msg));
}

Group generate_group(int security_bits) { return Group(&detail::type_a_curve(security_bits)); }

}  // namespace o2di
