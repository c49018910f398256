#include "o2di/ibs.hpp"

#include "o2di/errors.hpp"
#include "o2di/hash.hpp"

namespace o2di::ibs {

namespace {

Scalar challenge(const Group& group, BytesView msg, const G2Element& r) {
  ByteWriter w;
  w.var32(msg).raw(r.encode());
  return hash_to_scalar_tagged(group, kTagChallenge, w.bytes());
}

}  // namespace

std::pair<Params, MasterKey> gen(const Group& group, Rng& rng) {
  Scalar s = group.random_nonzero_scalar(rng);
  return {Params{group.generator().pow(s)}, MasterKey{s}};
}

SecretKey keygen(const Group& group, const Params&, const MasterKey& msk, BytesView id) {
  return SecretKey{hash_to_g1_tagged(group, kTagIdentity, id).pow(msk.secret)};
}

Signature sign(const Group& group, const Params&, const SecretKey& sk, BytesView msg, Rng& rng) {
  const G1Element g = group.generator();
  Scalar k = group.random_nonzero_scalar(rng);
  G2Element r = group.pair(g, g).pow(k);
  Scalar h = challenge(group, msg, r);
  return Signature{sk.key.pow(h) * g.pow(k), h};
}

bool verify(const Group& group, const Params& params, const Signature& sig, BytesView id, BytesView msg) {
  if (!sig.h.bound()) return false;
  const G1Element q_id = hash_to_g1_tagged(group, kTagIdentity, id);
  G2Element r = group.pair(sig.u, group.generator()) * group.pair(q_id, params.master_public).pow(-sig.h);
  return challenge(group, msg, r) == sig.h;
}

Bytes encode(const Signature& sig) {
  ByteWriter w;
  w.var16(sig.u.encode()).var16(sig.h.encode());
  return std::move(w).take();
}

Signature decode(const Group& group, BytesView in) {
  ByteReader r(in);
  Signature sig;
  sig.u = group.decode_g1(r.var16());
  sig.h = group.decode_scalar(r.var16());
  r.expect_done();
  return sig;
}

bool verify_encoded(const Group& group, const Params& params, BytesView sig, BytesView id, BytesView msg) {
  try {
    return verify(group, params, decode(group, sig), id, msg);
  } catch (const DecodeError&) {
    return false;
  }
}

}  // namespace o2di::ibs
