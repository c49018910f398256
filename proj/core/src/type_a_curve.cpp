#include "type_a_curve.hpp"

#include <cstring>

#include "digest.hpp"
#include "o2di/errors.hpp"

namespace o2di::detail {

TypeACurve::TypeACurve(int security_bits, const char* field_prime, const char* group_order)
    : security_bits_(security_bits), p_(field_prime, 10), r_(group_order, 10) {
  mpz_class p1 = p_ + 1;
  if (mpz_divisible_p(p1.get_mpz_t(), r_.get_mpz_t()) == 0) throw Error("r does not divide p + 1");
  h_ = p1 / r_;
  sqrt_exp_ = p1 / 4;
  field_bytes_ = (mpz_sizeinbase(p_.get_mpz_t(), 2) + 7) / 8;
  scalar_bytes_ = (mpz_sizeinbase(r_.get_mpz_t(), 2) + 7) / 8;
  generator_ = hash_to_point(as_bytes("O2DI-GEN"), as_bytes("generator"));
}

void TypeACurve::reduce(mpz_class& v) const { mpz_mod(v.get_mpz_t(), v.get_mpz_t(), p_.get_mpz_t()); }

bool TypeACurve::on_curve(const Point& P) const {
  if (P.infinity) return true;
  if (P.x < 0 || P.x >= p_ || P.y < 0 || P.y >= p_) return false;
  mpz_class lhs = P.y * P.y;
  reduce(lhs);
  mpz_class rhs = P.x * P.x;
  reduce(rhs);
  rhs += 1;
  rhs *= P.x;
  reduce(rhs);
  return lhs == rhs;
}

Point TypeACurve::negate(const Point& P) const {
  if (P.infinity || P.y == 0) return P;
  return Point{P.x, p_ - P.y, false};
}

Point TypeACurve::add(const Point& P, const Point& Q) const {
  if (P.infinity) return Q;
  if (Q.infinity) return P;
  mpz_class lambda;
  if (P.x == Q.x) {
    if (P.y != Q.y || P.y == 0) return Point{};
    // tangent: (3x^2 + 1) / 2y
    mpz_class num = 3 * P.x * P.x + 1;
    mpz_class den = 2 * P.y;
    reduce(num);
    mpz_invert(den.get_mpz_t(), den.get_mpz_t(), p_.get_mpz_t());
    lambda = num * den;
  } else {
    mpz_class num = Q.y - P.y;
    mpz_class den = Q.x - P.x;
    reduce(den);
    mpz_invert(den.get_mpz_t(), den.get_mpz_t(), p_.get_mpz_t());
    lambda = num * den;
  }
  reduce(lambda);
  mpz_class x3 = lambda * lambda - P.x - Q.x;
  reduce(x3);
  mpz_class y3 = lambda * (P.x - x3) - P.y;
  reduce(y3);
  return Point{x3, y3, false};
}

Point TypeACurve::to_affine(const Jacobian& J) const {
  if (J.Z == 0) return Point{};
  mpz_class zi;
  mpz_invert(zi.get_mpz_t(), J.Z.get_mpz_t(), p_.get_mpz_t());
  mpz_class zi2 = zi * zi;
  reduce(zi2);
  mpz_class x = J.X * zi2;
  reduce(x);
  mpz_class zi3 = zi2 * zi;
  reduce(zi3);
  mpz_class y = J.Y * zi3;
  reduce(y);
  return Point{x, y, false};
}

// dbl-2007-bl style doubling for a = 1.
void TypeACurve::jac_double(Jacobian& J) const {
  if (J.Z == 0) return;
  if (J.Y == 0) {
    J.Z = 0;
    return;
  }
  mpz_class XX = J.X * J.X;
  reduce(XX);
  mpz_class YY = J.Y * J.Y;
  reduce(YY);
  mpz_class ZZ = J.Z * J.Z;
  reduce(ZZ);
  mpz_class M = ZZ * ZZ;
  M += 3 * XX;
  reduce(M);
  mpz_class S = 4 * J.X * YY;
  reduce(S);
  mpz_class X3 = M * M - 2 * S;
  reduce(X3);
  mpz_class YYYY = YY * YY;
  mpz_class Y3 = M * (S - X3) - 8 * YYYY;
  reduce(Y3);
  mpz_class Z3 = 2 * J.Y * J.Z;
  reduce(Z3);
  J.X = std::move(X3);
  J.Y = std::move(Y3);
  J.Z = std::move(Z3);
}

void TypeACurve::jac_add_affine(Jacobian& J, const Point& P) const {
  if (P.infinity) return;
  if (J.Z == 0) {
    J.X = P.x;
    J.Y = P.y;
    J.Z = 1;
    return;
  }
  mpz_class ZZ = J.Z * J.Z;
  reduce(ZZ);
  mpz_class U2 = P.x * ZZ;
  reduce(U2);
  mpz_class S2 = P.y * J.Z;
  reduce(S2);
  S2 *= ZZ;
  reduce(S2);
  mpz_class H = U2 - J.X;
  reduce(H);
  mpz_class R = S2 - J.Y;
  reduce(R);
  if (H == 0) {
    if (R == 0) {
      jac_double(J);
    } else {
      J.Z = 0;
    }
    return;
  }
  mpz_class HH = H * H;
  reduce(HH);
  mpz_class HHH = H * HH;
  reduce(HHH);
  mpz_class V = J.X * HH;
  reduce(V);
  mpz_class X3 = R * R - HHH - 2 * V;
  reduce(X3);
  mpz_class Y3 = R * (V - X3) - J.Y * HHH;
  reduce(Y3);
  mpz_class Z3 = J.Z * H;
  reduce(Z3);
  J.X = std::move(X3);
  J.Y = std::move(Y3);
  J.Z = std::move(Z3);
}

Point TypeACurve::mul(const Point& P, const mpz_class& k) const {
  if (P.infinity || k == 0) return Point{};
  mpz_class e = k;
  Point base = P;
  if (e < 0) {
    e = -e;
    base = negate(P);
  }
  Jacobian acc{0, 1, 0};
  for (long i = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2)) - 1; i >= 0; --i) {
    jac_double(acc);
    if (mpz_tstbit(e.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) jac_add_affine(acc, base);
  }
  return to_affine(acc);
}

bool TypeACurve::in_subgroup(const Point& P) const { return on_curve(P) && mul(P, r_).infinity; }

Fp2 TypeACurve::fp2_mul(const Fp2& x, const Fp2& y) const {
  mpz_class ac = x.a * y.a;
  mpz_class bd = x.b * y.b;
  mpz_class cross = (x.a + x.b) * (y.a + y.b);
  Fp2 out;
  out.a = ac - bd;
  reduce(out.a);
  out.b = cross - ac - bd;
  reduce(out.b);
  return out;
}

Fp2 TypeACurve::fp2_sqr(const Fp2& x) const {
  Fp2 out;
  out.a = (x.a + x.b) * (x.a - x.b);
  reduce(out.a);
  out.b = 2 * x.a * x.b;
  reduce(out.b);
  return out;
}

Fp2 TypeACurve::fp2_conj(const Fp2& x) const {
  Fp2 out{x.a, x.b == 0 ? mpz_class(0) : mpz_class(p_ - x.b)};
  return out;
}

Fp2 TypeACurve::fp2_inv(const Fp2& x) const {
  mpz_class norm = x.a * x.a + x.b * x.b;
  reduce(norm);
  if (norm == 0) throw Error("inverse of zero in F_p2");
  mpz_invert(norm.get_mpz_t(), norm.get_mpz_t(), p_.get_mpz_t());
  Fp2 out = fp2_conj(x);
  out.a *= norm;
  reduce(out.a);
  out.b *= norm;
  reduce(out.b);
  return out;
}

Fp2 TypeACurve::fp2_pow(const Fp2& x, const mpz_class& e) const {
  if (e < 0) return fp2_pow(fp2_inv(x), -e);
  Fp2 acc = fp2_one();
  for (long i = static_cast<long>(mpz_sizeinbase(e.get_mpz_t(), 2)) - 1; i >= 0; --i) {
    acc = fp2_sqr(acc);
    if (mpz_tstbit(e.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) acc = fp2_mul(acc, x);
  }
  return acc;
}

bool TypeACurve::in_target_subgroup(const Fp2& x) const {
  if (x.a < 0 || x.a >= p_ || x.b < 0 || x.b >= p_) return false;
  Fp2 y = fp2_pow(x, r_);
  return y.a == 1 && y.b == 0;
}

Fp2 TypeACurve::final_exponentiation(const Fp2& f) const {
  // f^((p^2 - 1)/r) = (conj(f) / f)^((p + 1)/r); Frobenius is conjugation.
  Fp2 g = fp2_mul(fp2_conj(f), fp2_inv(f));
  return fp2_pow(g, h_);
}

Fp2 TypeACurve::pairing(const Point& P, const Point& Q) const {
  if (P.infinity || Q.infinity) return fp2_one();
  // Q is evaluated through the distortion map: (-xq, i*yq). Line values are
  // scaled by F_p factors, which the final exponentiation removes.
  const mpz_class& xq = Q.x;
  const mpz_class& yq = Q.y;
  Fp2 f = fp2_one();
  Jacobian T{P.x, P.y, 1};
  Fp2 line;
  const long top = static_cast<long>(mpz_sizeinbase(r_.get_mpz_t(), 2)) - 1;
  for (long i = top - 1; i >= 0; --i) {
    // Tangent at T, then T <- 2T.
    {
      mpz_class XX = T.X * T.X;
      reduce(XX);
      mpz_class YY = T.Y * T.Y;
      reduce(YY);
      mpz_class ZZ = T.Z * T.Z;
      reduce(ZZ);
      mpz_class M = ZZ * ZZ;
      M += 3 * XX;
      reduce(M);
      mpz_class t = xq * ZZ + T.X;
      reduce(t);
      line.a = M * t - 2 * YY;
      reduce(line.a);
      mpz_class Z3 = 2 * T.Y * T.Z;
      reduce(Z3);
      line.b = Z3 * ZZ;
      reduce(line.b);
      line.b *= yq;
      reduce(line.b);

      mpz_class S = 4 * T.X * YY;
      reduce(S);
      mpz_class X3 = M * M - 2 * S;
      reduce(X3);
      mpz_class YYYY = YY * YY;
      mpz_class Y3 = M * (S - X3) - 8 * YYYY;
      reduce(Y3);
      T.X = std::move(X3);
      T.Y = std::move(Y3);
      T.Z = std::move(Z3);
    }
    f = fp2_mul(fp2_sqr(f), line);

    if (mpz_tstbit(r_.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) {
      // Chord through T and P, then T <- T + P.
      mpz_class ZZ = T.Z * T.Z;
      reduce(ZZ);
      mpz_class H = P.x * ZZ - T.X;
      reduce(H);
      mpz_class R = P.y * T.Z;
      reduce(R);
      R *= ZZ;
      R -= T.Y;
      reduce(R);
      if (H == 0) {
        // T = -P: vertical line, value in F_p; T becomes infinity (only
        // reached on the final bit, where (r-1)P + P = O).
        T.Z = 0;
        continue;
      }
      mpz_class Z3 = T.Z * H;
      reduce(Z3);
      mpz_class t = xq + P.x;
      line.a = R * t - P.y * Z3;
      reduce(line.a);
      line.b = Z3 * yq;
      reduce(line.b);
      f = fp2_mul(f, line);

      mpz_class HH = H * H;
      reduce(HH);
      mpz_class HHH = H * HH;
      reduce(HHH);
      mpz_class V = T.X * HH;
      reduce(V);
      mpz_class X3 = R * R - HHH - 2 * V;
      reduce(X3);
      mpz_class Y3 = R * (V - X3) - T.Y * HHH;
      reduce(Y3);
      T.X = std::move(X3);
      T.Y = std::move(Y3);
      T.Z = std::move(Z3);
    }
  }
  return final_exponentiation(f);
}

std::optional<mpz_class> TypeACurve::sqrt(const mpz_class& v) const {
  mpz_class y;
  mpz_powm(y.get_mpz_t(), v.get_mpz_t(), sqrt_exp_.get_mpz_t(), p_.get_mpz_t());
  mpz_class check = y * y;
  reduce(check);
  mpz_class vv = v;
  reduce(vv);
  if (check != vv) return std::nullopt;
  return y;
}

void TypeACurve::export_fixed(const mpz_class& v, std::size_t width, std::uint8_t* out) const {
  std::memset(out, 0, width);
  std::size_t count = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
  if (v == 0) return;
  if (count > width) throw Error("value too wide for fixed-width encoding");
  mpz_export(out + (width - count), &count, 1, 1, 1, 0, v.get_mpz_t());
}

mpz_class TypeACurve::import_bytes(BytesView in) const {
  mpz_class v;
  if (!in.empty()) mpz_import(v.get_mpz_t(), in.size(), 1, 1, 1, 0, in.data());
  return v;
}

Point TypeACurve::hash_to_point(BytesView dst, BytesView msg) const {
  const std::uint8_t dst_len = static_cast<std::uint8_t>(dst.size());
  for (std::uint32_t ctr = 0;; ++ctr) {
    std::uint8_t c[5] = {static_cast<std::uint8_t>(ctr >> 24), static_cast<std::uint8_t>(ctr >> 16),
                         static_cast<std::uint8_t>(ctr >> 8), static_cast<std::uint8_t>(ctr), 1};
    auto d1 = sha3_512({BytesView(&dst_len, 1), dst, BytesView(c, 5), msg});
    c[4] = 2;
    auto d2 = sha3_512({BytesView(&dst_len, 1), dst, BytesView(c, 5), msg});
    std::uint8_t wide[128];
    std::memcpy(wide, d1.data(), 64);
    std::memcpy(wide + 64, d2.data(), 64);
    mpz_class x = import_bytes(BytesView(wide, sizeof(wide)));
    reduce(x);
    mpz_class rhs = x * x;
    reduce(rhs);
    rhs += 1;
    rhs *= x;
    reduce(rhs);
    auto y = sqrt(rhs);
    if (!y) continue;
    if ((mpz_odd_p(y->get_mpz_t()) != 0) != ((d2[63] & 1) != 0)) *y = p_ - *y;
    if (*y == p_) *y = 0;
    Point candidate{x, *y, false};
    Point out = mul(candidate, h_);
    if (!out.infinity) return out;
  }
}

Bytes TypeACurve::encode_point(const Point& P) const {
  Bytes out(point_bytes(), 0);
  if (P.infinity) return out;
  out[0] = static_cast<std::uint8_t>(0x02 | (mpz_odd_p(P.y.get_mpz_t()) ? 1 : 0));
  export_fixed(P.x, field_bytes_, out.data() + 1);
  return out;
}

Point TypeACurve::decode_point(BytesView in) const {
  if (in.size() != point_bytes()) throw DecodeError("G1 encoding has wrong length");
  const std::uint8_t tag = in[0];
  if (tag == 0x00) {
    for (std::size_t i = 1; i < in.size(); ++i) {
      if (in[i] != 0) throw DecodeError("non-canonical encoding of the G1 identity");
    }
    return Point{};
  }
  if (tag != 0x02 && tag != 0x03) throw DecodeError("invalid G1 encoding tag");
  mpz_class x = import_bytes(in.subspan(1));
  if (x >= p_) throw DecodeError("G1 x-coordinate out of range");
  mpz_class rhs = x * x;
  reduce(rhs);
  rhs += 1;
  rhs *= x;
  reduce(rhs);
  auto y = sqrt(rhs);
  if (!y) throw DecodeError("G1 x-coordinate not on the curve");
  const bool want_odd = (tag & 1) != 0;
  if ((mpz_odd_p(y->get_mpz_t()) != 0) != want_odd) {
    if (*y == 0) throw DecodeError("non-canonical G1 sign bit");
    *y = p_ - *y;
  }
  Point P{x, *y, false};
  if (!mul(P, r_).infinity) throw DecodeError("G1 point outside the order-q subgroup");
  return P;
}

Bytes TypeACurve::encode_fp2(const Fp2& x) const {
  Bytes out(fp2_bytes());
  export_fixed(x.a, field_bytes_, out.data());
  export_fixed(x.b, field_bytes_, out.data() + field_bytes_);
  return out;
}

Fp2 TypeACurve::decode_fp2(BytesView in) const {
  if (in.size() != fp2_bytes()) throw DecodeError("G2 encoding has wrong length");
  Fp2 x{import_bytes(in.first(field_bytes_)), import_bytes(in.subspan(field_bytes_))};
  if (x.a >= p_ || x.b >= p_) throw DecodeError("G2 coordinate out of range");
  if (!in_target_subgroup(x)) throw DecodeError("G2 element outside the order-q subgroup");
  return x;
}

const TypeACurve& type_a_curve(int security_bits) {
  if (security_bits == 80) {
    // |p| = 512, |q| = 160 (q = 2^159 + 2^107 + 1), p = 12016...776 * q - 1.
    static const TypeACurve curve(
        80,
        "8780710799663312522437781984754049815806883199414208211028653399266475630880222957078625179422"
        "662221423155858769582317459277713367317481324925129998224791",
        "730750818665451621361119245571504901405976559617");
    return curve;
  }
  throw UnsupportedSecurityLevel("unsupported security level: " + std::to_string(security_bits) +
                                 " bits (supported: 80)");
}

}  // namespace o2di::detail
