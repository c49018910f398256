#include <gtest/gtest.h>

#include "o2di/errors.hpp"
#include "o2di/ibs.hpp"

using namespace o2di;

namespace {

const Group& grp() {
  static const Group g = generate_group(80);
  return g;
}

struct Keys {
  ibs::Params params;
  ibs::MasterKey msk;
};

Keys fresh(Rng& rng) {
  auto [p, m] = ibs::gen(grp(), rng);
  return Keys{p, m};
}

}  // namespace

TEST(Ibs, HonestRoundTrips) {
  Rng rng = Rng::seeded(100);
  Keys k = fresh(rng);
  int ok = 0;
  for (int t = 0; t < 1000; ++t) {
    Bytes id = to_bytes("id-" + std::to_string(t % 17));
    Bytes msg = rng.bytes(1 + t % 90);
    auto sk = ibs::keygen(grp(), k.params, k.msk, id);
    auto sig = ibs::sign(grp(), k.params, sk, msg, rng);
    if (ibs::verify(grp(), k.params, sig, id, msg)) ++ok;
  }
  EXPECT_EQ(ok, 1000);
}

TEST(Ibs, DistinctMasterKeys) {
  Rng rng = Rng::seeded(101);
  Keys a = fresh(rng);
  Keys b = fresh(rng);
  EXPECT_NE(a.msk.secret.encode(), b.msk.secret.encode());
  EXPECT_NE(a.params.master_public.encode(), b.params.master_public.encode());
}

TEST(Ibs, WrongParamsRejected) {
  Rng rng = Rng::seeded(102);
  Keys a = fresh(rng);
  Keys b = fresh(rng);
  Bytes id = to_bytes("alice");
  Bytes msg = to_bytes("message");
  auto sig = ibs::sign(grp(), a.params, ibs::keygen(grp(), a.params, a.msk, id), msg, rng);
  EXPECT_TRUE(ibs::verify(grp(), a.params, sig, id, msg));
  EXPECT_FALSE(ibs::verify(grp(), b.params, sig, id, msg));
}

TEST(Ibs, WrongIdentityRejected) {
  Rng rng = Rng::seeded(103);
  Keys k = fresh(rng);
  Bytes msg = to_bytes("message");
  auto sig = ibs::sign(grp(), k.params, ibs::keygen(grp(), k.params, k.msk, as_bytes("alice")), msg, rng);
  EXPECT_FALSE(ibs::verify(grp(), k.params, sig, as_bytes("alice2"), msg));
  EXPECT_FALSE(ibs::verify(grp(), k.params, sig, as_bytes(""), msg));
}

TEST(Ibs, WrongMessageRejected) {
  Rng rng = Rng::seeded(104);
  Keys k = fresh(rng);
  Bytes id = to_bytes("alice");
  auto sig = ibs::sign(grp(), k.params, ibs::keygen(grp(), k.params, k.msk, id), as_bytes("m"), rng);
  EXPECT_FALSE(ibs::verify(grp(), k.params, sig, id, as_bytes("m'")));
  EXPECT_FALSE(ibs::verify(grp(), k.params, sig, id, {}));
}

TEST(Ibs, KeygenDeterministicPerIdentity) {
  Rng rng = Rng::seeded(105);
  Keys k = fresh(rng);
  auto a = ibs::keygen(grp(), k.params, k.msk, as_bytes("x"));
  auto b = ibs::keygen(grp(), k.params, k.msk, as_bytes("x"));
  auto c = ibs::keygen(grp(), k.params, k.msk, as_bytes("y"));
  EXPECT_TRUE(a.key == b.key);
  EXPECT_FALSE(a.key == c.key);
}

TEST(Ibs, SignatureEncodingRoundTrip) {
  Rng rng = Rng::seeded(106);
  Keys k = fresh(rng);
  auto sig = ibs::sign(grp(), k.params, ibs::keygen(grp(), k.params, k.msk, as_bytes("id")), as_bytes("m"), rng);
  Bytes enc = ibs::encode(sig);
  EXPECT_EQ(enc.size(), 2 + grp().g1_size() + 2 + grp().scalar_size());
  auto back = ibs::decode(grp(), enc);
  EXPECT_TRUE(back.u == sig.u);
  EXPECT_EQ(back.h, sig.h);
  EXPECT_THROW(ibs::decode(grp(), Bytes(enc.begin(), enc.end() - 1)), DecodeError);
  Bytes longer = enc;
  longer.push_back(0);
  EXPECT_THROW(ibs::decode(grp(), longer), DecodeError);
}

TEST(Ibs, BitFlipFuzzingRejects) {
  Rng rng = Rng::seeded(107);
  Keys k = fresh(rng);
  Bytes id = to_bytes("vendor");
  Bytes msg = to_bytes("lambda-public-value");
  auto sig = ibs::sign(grp(), k.params, ibs::keygen(grp(), k.params, k.msk, id), msg, rng);
  const Bytes enc = ibs::encode(sig);
  ASSERT_TRUE(ibs::verify_encoded(grp(), k.params, enc, id, msg));
  int accepted = 0;
  for (int t = 0; t < 1000; ++t) {
    Bytes bad = enc;
    const std::size_t bit = rng.below(bad.size() * 8);
    bad[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    if (ibs::verify_encoded(grp(), k.params, bad, id, msg)) ++accepted;
  }
  EXPECT_EQ(accepted, 0);
}

TEST(Ibs, ComponentPerturbationRejects) {
  Rng rng = Rng::seeded(108);
  Keys k = fresh(rng);
  Bytes id = to_bytes("vendor");
  Bytes msg = to_bytes("T1");
  auto sig = ibs::sign(grp(), k.params, ibs::keygen(grp(), k.params, k.msk, id), msg, rng);
  for (int t = 0; t < 20; ++t) {
    ibs::Signature u_bad = sig;
    u_bad.u = u_bad.u * grp().generator().pow(grp().random_nonzero_scalar(rng));
    EXPECT_FALSE(ibs::verify(grp(), k.params, u_bad, id, msg));
    ibs::Signature h_bad = sig;
    h_bad.h = h_bad.h + grp().random_nonzero_scalar(rng);
    EXPECT_FALSE(ibs::verify(grp(), k.params, h_bad, id, msg));
  }
}
