#include <gtest/gtest.h>

#include <set>

#include "o2di/errors.hpp"
#include "o2di/group.hpp"
#include "o2di/hash.hpp"
#include "o2di/op_counter.hpp"
#include "support/oracle.hpp"

using namespace o2di;

namespace {

const Group& grp() {
  static const Group g = generate_group(80);
  return g;
}

mpz_class field_prime() {
  // PBC a.param prime, restated here so the test does not read it back from the library.
  return mpz_class(
      "8780710799663312522437781984754049815806883199414208211028653399266475630880222957078625179422662221423155858769582317459277713367317481324925129998224791");
}

Bytes scalar_bytes(const mpz_class& v, std::size_t width) {
  Bytes out(width, 0);
  std::size_t n = 0;
  mpz_export(nullptr, &n, 1, 1, 1, 0, v.get_mpz_t());
  if (v != 0) mpz_export(out.data() + (width - n), nullptr, 1, 1, 1, 0, v.get_mpz_t());
  return out;
}

}  // namespace

TEST(GroupDescription, OrderIs160BitPrime) {
  const Group& g = grp();
  EXPECT_EQ(g.order_bits(), 160u);
  EXPECT_EQ(mpz_sizeinbase(g.order().get_mpz_t(), 2), 160u);
  EXPECT_GT(mpz_probab_prime_p(g.order().get_mpz_t(), 40), 0);
  EXPECT_EQ(mpz_sizeinbase(field_prime().get_mpz_t(), 2), 512u);
  EXPECT_EQ(g.security_bits(), 80);
}

TEST(GroupDescription, GeneratorHasOrderQ) {
  const Group& g = grp();
  EXPECT_FALSE(g.generator().is_identity());
  EXPECT_TRUE(g.generator().pow(g.scalar(g.order() - 1)) == g.generator().inverse());
  EXPECT_TRUE((g.generator().pow(g.scalar(g.order() - 1)) * g.generator()).is_identity());
}

TEST(GroupDescription, UnsupportedLevelRejected) {
  EXPECT_THROW(generate_group(128), UnsupportedSecurityLevel);
  EXPECT_THROW(generate_group(0), UnsupportedSecurityLevel);
}

TEST(GroupDescription, EncodedSizesAreConstant) {
  const Group& g = grp();
  EXPECT_EQ(g.scalar_size(), 20u);
  EXPECT_EQ(g.g1_size(), 65u);
  EXPECT_EQ(g.g2_size(), 128u);
  Rng rng = Rng::seeded(1);
  for (int i = 0; i < 20; ++i) {
    Scalar a = g.random_scalar(rng);
    EXPECT_EQ(a.encode().size(), g.scalar_size());
    EXPECT_EQ(g.generator().pow(a).encode().size(), g.g1_size());
    EXPECT_EQ(g.pair(g.generator(), g.generator()).pow(a).encode().size(), g.g2_size());
  }
  EXPECT_EQ(g.zero().encode().size(), 20u);
  EXPECT_EQ(g.g1_identity().encode().size(), 65u);
  EXPECT_EQ(g.g2_identity().encode().size(), 128u);
}

TEST(Pairing, NonDegenerate) {
  const Group& g = grp();
  G2Element e = g.pair(g.generator(), g.generator());
  EXPECT_FALSE(e.is_identity());
  EXPECT_TRUE(e.pow(g.scalar(g.order() - 1)) == e.inverse());
}

TEST(Pairing, BilinearOnSampledExponents) {
  const Group& g = grp();
  Rng rng = Rng::seeded(2);
  const G2Element base = g.pair(g.generator(), g.generator());
  for (int t = 0; t < 25; ++t) {
    Scalar a = g.random_scalar(rng);
    Scalar b = g.random_scalar(rng);
    G1Element ga = g.generator().pow(a);
    G1Element gb = g.generator().pow(b);
    mpz_class ab = test::modq(a.value() * b.value(), g.order());
    EXPECT_TRUE(g.pair(ga, gb) == base.pow(g.scalar(ab)));
    EXPECT_TRUE(g.pair(gb, ga) == g.pair(ga, gb));
  }
}

TEST(Pairing, IdentityInputsGiveIdentity) {
  const Group& g = grp();
  EXPECT_TRUE(g.pair(g.g1_identity(), g.generator()).is_identity());
  EXPECT_TRUE(g.pair(g.generator(), g.g1_identity()).is_identity());
}

TEST(Pairing, MultiplicativeInEachArgument) {
  const Group& g = grp();
  Rng rng = Rng::seeded(3);
  G1Element p = g.generator().pow(g.random_scalar(rng));
  G1Element q1 = g.generator().pow(g.random_scalar(rng));
  G1Element q2 = g.generator().pow(g.random_scalar(rng));
  EXPECT_TRUE(g.pair(p, q1 * q2) == g.pair(p, q1) * g.pair(p, q2));
  EXPECT_TRUE(g.pair(q1 * q2, p) == g.pair(q1, p) * g.pair(q2, p));
  EXPECT_TRUE(g.pair(p.inverse(), q1) == g.pair(p, q1).inverse());
}

TEST(ScalarField, ArithmeticMatchesGmpOracle) {
  const Group& g = grp();
  const mpz_class& q = g.order();
  Rng rng = Rng::seeded(4);
  for (int t = 0; t < 500; ++t) {
    Scalar a = g.random_scalar(rng);
    Scalar b = g.random_nonzero_scalar(rng);
    EXPECT_EQ((a + b).value(), test::modq(a.value() + b.value(), q));
    EXPECT_EQ((a - b).value(), test::modq(a.value() - b.value(), q));
    EXPECT_EQ((a * b).value(), test::modq(a.value() * b.value(), q));
    EXPECT_EQ((-a).value(), test::modq(-a.value(), q));
    EXPECT_EQ((b * b.inverse()).value(), 1);
    EXPECT_LT(a.value(), q);
    EXPECT_GE(a.value(), 0);
  }
  EXPECT_THROW(g.zero().inverse(), Error);
}

TEST(ScalarField, ReduceBytesIsBigEndianModQ) {
  const Group& g = grp();
  Bytes all_ff(32, 0xFF);
  EXPECT_EQ(g.reduce_bytes(all_ff).value(), test::modq(test::from_be(all_ff), g.order()));
  EXPECT_TRUE(g.reduce_bytes({}).is_zero());
}

TEST(HashToG1, DeterministicAndInSubgroup) {
  const Group& g = grp();
  G1Element a = hash_to_g1(g, as_bytes("ID_av"));
  EXPECT_TRUE(a == hash_to_g1(g, as_bytes("ID_av")));
  EXPECT_FALSE(a == hash_to_g1(g, as_bytes("ID_av2")));
  EXPECT_FALSE(a.is_identity());
  EXPECT_TRUE(a.pow(g.scalar(g.order() - 1)) == a.inverse());
  EXPECT_NO_THROW(g.decode_g1(a.encode()));
  EXPECT_FALSE(hash_to_g1(g, {}).is_identity());
}

TEST(HashToG1, DomainTagsSeparate) {
  const Group& g = grp();
  EXPECT_FALSE(hash_to_g1_tagged(g, "O2DI-H", as_bytes("x")) == hash_to_g1_tagged(g, "O2DI-Hp", as_bytes("x")));
  // Length-prefixed tags: moving a byte between tag and input changes the output.
  EXPECT_FALSE(hash_to_g1_tagged(g, "O2DI-H", as_bytes("px")) == hash_to_g1_tagged(g, "O2DI-Hp", as_bytes("x")));
}

TEST(HashToG1, NoCollisionsOnHundredThousandInputs) {
  const Group& g = grp();
  std::set<Bytes> seen;
  for (std::uint64_t i = 0; i < 100000; ++i) {
    Bytes enc = hash_to_g1(g, test::be(i, 8)).encode();
    ASSERT_TRUE(seen.insert(std::move(enc)).second) << "collision at input " << i;
  }
}

TEST(HashToScalar, MatchesSha3Oracle) {
  const Group& g = grp();
  for (const std::string& s : std::vector<std::string>{"", "a", "hello world", std::string(300, 'z')}) {
    EXPECT_EQ(hash_to_scalar(g, as_bytes(s)).value(), test::hprime_raw(g.order(), as_bytes(s)));
  }
  EXPECT_EQ(hash_to_scalar(g, {}), hash_to_scalar(g, {}));
}

TEST(HashToScalar, OutputsBelowQAndCollisionFree) {
  const Group& g = grp();
  std::set<mpz_class> seen;
  for (std::uint64_t i = 0; i < 100000; ++i) {
    Scalar s = hash_to_scalar(g, test::be(i, 8));
    ASSERT_LT(s.value(), g.order());
    ASSERT_TRUE(seen.insert(s.value()).second);
  }
}

TEST(HashToScalar, ChiSquareUniformity) {
  const Group& g = grp();
  constexpr int kBuckets = 100;
  constexpr int kSamples = 100000;
  std::vector<long> counts(kBuckets, 0);
  for (int i = 0; i < kSamples; ++i) {
    mpz_class v = hash_to_scalar(g, test::be(static_cast<std::uint64_t>(i) ^ 0xA5A5A5A5ULL, 8)).value();
    mpz_class b = v * kBuckets / g.order();
    counts[b.get_ui()]++;
  }
  const double expected = static_cast<double>(kSamples) / kBuckets;
  double chi2 = 0;
  for (long c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // Critical value of chi-square with 99 degrees of freedom at alpha = 0.01.
  EXPECT_LT(chi2, 134.642);
}

TEST(Prf, DeterministicAndMatchesOracle) {
  const Group& g = grp();
  Rng rng = Rng::seeded(5);
  Scalar k = g.random_scalar(rng);
  Bytes in = to_bytes("some input");
  EXPECT_EQ(prf_eval(g, k, in), prf_eval(g, k, in));
  Bytes id = to_bytes("id");
  EXPECT_EQ(prf_eval(g, k, prf_input(id, 7)).value(), test::prf(g.order(), k.value(), id, 7));
}

TEST(Prf, DistinctKeysGiveDistinctOutputs) {
  const Group& g = grp();
  Rng rng = Rng::seeded(6);
  Bytes x = to_bytes("fixed input");
  int collisions = 0;
  for (int t = 0; t < 10000; ++t) {
    Scalar k1 = g.random_scalar(rng);
    Scalar k2 = g.random_scalar(rng);
    if (k1 == k2) continue;
    Scalar a = prf_eval(g, k1, x);
    Scalar b = prf_eval(g, k2, x);
    ASSERT_LT(a.value(), g.order());
    if (a == b) ++collisions;
  }
  EXPECT_EQ(collisions, 0);
}

TEST(Serialization, ScalarRoundTrip) {
  const Group& g = grp();
  Rng rng = Rng::seeded(7);
  for (int t = 0; t < 10000; ++t) {
    Scalar a = g.random_scalar(rng);
    ASSERT_EQ(g.decode_scalar(a.encode()), a);
  }
  EXPECT_EQ(g.decode_scalar(g.scalar(g.order() - 1).encode()).value(), g.order() - 1);
}

TEST(Serialization, G1RoundTrip) {
  const Group& g = grp();
  Rng rng = Rng::seeded(8);
  G1Element step = g.generator().pow(g.random_nonzero_scalar(rng));
  G1Element x = g.generator().pow(g.random_nonzero_scalar(rng));
  for (int t = 0; t < 10000; ++t) {
    ASSERT_TRUE(g.decode_g1(x.encode()) == x);
    x = x * step;
  }
  EXPECT_TRUE(g.decode_g1(g.g1_identity().encode()).is_identity());
}

TEST(Serialization, G2RoundTrip) {
  const Group& g = grp();
  Rng rng = Rng::seeded(9);
  G2Element base = g.pair(g.generator(), g.generator());
  G2Element step = base.pow(g.random_nonzero_scalar(rng));
  G2Element x = base.pow(g.random_nonzero_scalar(rng));
  for (int t = 0; t < 10000; ++t) {
    ASSERT_TRUE(g.decode_g2(x.encode()) == x);
    x = x * step;
  }
  EXPECT_TRUE(g.decode_g2(g.g2_identity().encode()).is_identity());
}

TEST(Serialization, RejectsNonCanonicalScalars) {
  const Group& g = grp();
  EXPECT_THROW(g.decode_scalar(scalar_bytes(g.order(), 20)), DecodeError);
  EXPECT_THROW(g.decode_scalar(Bytes(19, 0)), DecodeError);
  EXPECT_THROW(g.decode_scalar(Bytes(21, 0)), DecodeError);
}

TEST(Serialization, RejectsInvalidG1Encodings) {
  const Group& g = grp();
  const mpz_class p = field_prime();
  Bytes enc = g.generator().encode();
  ASSERT_EQ(enc.size(), 65u);

  Bytes bad_tag = enc;
  bad_tag[0] = 0x04;
  EXPECT_THROW(g.decode_g1(bad_tag), DecodeError);

  Bytes x_is_p = scalar_bytes(p, 64);
  x_is_p.insert(x_is_p.begin(), 0x02);
  EXPECT_THROW(g.decode_g1(x_is_p), DecodeError);

  Bytes ident = g.g1_identity().encode();
  ident[10] = 1;
  EXPECT_THROW(g.decode_g1(ident), DecodeError);
  EXPECT_THROW(g.decode_g1(Bytes(enc.begin(), enc.end() - 1)), DecodeError);

  // Find x with x^3 + x a non-residue (not on the curve) and one that is a
  // residue but whose point lies outside the order-q subgroup.
  bool off_curve_done = false;
  bool off_subgroup_done = false;
  for (unsigned long xi = 2; xi < 200 && !(off_curve_done && off_subgroup_done); ++xi) {
    mpz_class x = xi;
    mpz_class rhs = (x * x * x + x) % p;
    Bytes e = scalar_bytes(x, 64);
    e.insert(e.begin(), 0x02);
    if (mpz_legendre(rhs.get_mpz_t(), p.get_mpz_t()) == -1) {
      EXPECT_THROW(g.decode_g1(e), DecodeError) << "x=" << xi;
      off_curve_done = true;
    } else {
      EXPECT_THROW(g.decode_g1(e), DecodeError) << "x=" << xi;
      off_subgroup_done = true;
    }
  }
  EXPECT_TRUE(off_curve_done && off_subgroup_done);
}

TEST(Serialization, RejectsInvalidG2Encodings) {
  const Group& g = grp();
  const mpz_class p = field_prime();
  Bytes outside = scalar_bytes(2, 64);
  Bytes zero = scalar_bytes(0, 64);
  outside.insert(outside.end(), zero.begin(), zero.end());
  EXPECT_THROW(g.decode_g2(outside), DecodeError);

  Bytes big = scalar_bytes(p, 64);
  big.insert(big.end(), zero.begin(), zero.end());
  EXPECT_THROW(g.decode_g2(big), DecodeError);
  EXPECT_THROW(g.decode_g2(Bytes(127, 0)), DecodeError);
  EXPECT_THROW(g.decode_g2(Bytes(128, 0)), DecodeError);
}

TEST(OpCounter, CountsPublicOperationsAndNests) {
  const Group& g = grp();
  Rng rng = Rng::seeded(10);
  Scalar a = g.random_scalar(rng);
  OpCounter outer;
  {
    OpCounter inner;
    (void)(a * a);
    (void)(a + a);
    (void)g.generator().pow(a);
    (void)(g.generator() * g.generator());
    (void)g.pair(g.generator(), g.generator());
    (void)hash_to_scalar(g, {});
    (void)hash_to_g1(g, {});
    (void)prf_eval(g, a, {});
    OpCounts c = inner.counts();
    EXPECT_EQ(c.scalar_mul, 1u);
    EXPECT_EQ(c.scalar_add, 1u);
    EXPECT_EQ(c.g1_exp, 1u);
    EXPECT_EQ(c.g1_mul, 1u);
    EXPECT_EQ(c.pairing, 1u);
    EXPECT_EQ(c.hash_to_scalar, 1u);
    EXPECT_EQ(c.hash_to_g1, 1u);
    EXPECT_EQ(c.prf, 1u);
  }
  (void)(a * a);
  EXPECT_EQ(outer.counts().scalar_mul, 2u);
  EXPECT_EQ(outer.counts().pairing, 1u);
}
