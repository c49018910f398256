#include <gtest/gtest.h>

#include "o2di/errors.hpp"
#include "o2di/fleet.hpp"
#include "support/oracle.hpp"

using namespace o2di;
using test::Env;

namespace {

struct FleetEnv {
  Env env;
  std::shared_ptr<const ServerContext> ctx;
  std::vector<std::vector<Scalar>> files;
};

FleetEnv make_env(std::size_t l, std::size_t nfiles, Rng& rng) {
  FleetEnv fe{test::make_setup(l, rng), nullptr, {}};
  fe.ctx = std::make_shared<const ServerContext>(ServerContext{fe.env.params, fe.env.otag.pub, fe.env.vendor_id});
  for (std::size_t f = 0; f < nfiles; ++f) fe.files.push_back(test::random_blocks(fe.env.group, l, rng));
  return fe;
}

OnlineTag tag_for(const FleetEnv& fe, BytesView id, const std::vector<Scalar>& m) {
  return online_tag(fe.env.params, id, fe.env.otag, m, fe.env.sk);
}

// Caches every file on `server` under replica_name(server index, f).
void populate(EdgeServer& server, const FleetEnv& fe) {
  for (std::size_t f = 0; f < fe.files.size(); ++f) {
    Bytes id = test::replica_name(server.index(), f);
    server.cache(id, fe.files[f], tag_for(fe, id, fe.files[f]));
  }
}

bool audit1(const FleetEnv& fe, const EdgeServer& server, BytesView id, Rng& rng, bool full = true) {
  auto [chal, k] = challgen1(fe.env.params, fe.env.pk, rng, full ? fe.env.params.blocks : 4);
  Proof p = server.respond_method1(id, chal);
  return check_proof1(fe.env.params, fe.env.otag, chal, k, p, id, fe.env.vendor_id);
}

}  // namespace

TEST(EdgeServer, CacheFetchAndDuplicates) {
  Rng rng = Rng::seeded(400);
  FleetEnv fe = make_env(8, 2, rng);
  EdgeServer srv(0, fe.ctx);
  Bytes id = to_bytes("r0");
  OnlineTag tag = tag_for(fe, id, fe.files[0]);
  srv.cache(id, fe.files[0], tag);
  auto got = srv.fetch(id);
  ASSERT_TRUE(got.has_value());
  EXPECT_EQ(got->blocks, fe.files[0]);
  EXPECT_EQ(got->tag.values, tag.values);
  EXPECT_THROW(srv.cache(id, fe.files[1], tag_for(fe, id, fe.files[1])), DuplicateReplica);
  EXPECT_EQ(srv.fetch(id)->blocks, fe.files[0]);
  std::vector<Scalar> short_file(fe.files[1].begin(), fe.files[1].end() - 1);
  EXPECT_THROW(srv.cache(to_bytes("r1"), short_file, tag), CapacityError);
  EXPECT_FALSE(srv.fetch(to_bytes("nope")).has_value());
}

TEST(EdgeServer, BulkStoreRetrievable) {
  Rng rng = Rng::seeded(401);
  FleetEnv fe = make_env(4, 0, rng);
  EdgeServer srv(0, fe.ctx);
  std::vector<std::vector<Scalar>> contents;
  for (int i = 0; i < 1000; ++i) {
    contents.push_back(test::random_blocks(fe.env.group, 4, rng));
    Bytes id = to_bytes("bulk-" + std::to_string(i));
    srv.cache(id, contents.back(), tag_for(fe, id, contents.back()));
  }
  EXPECT_EQ(srv.size(), 1000u);
  for (int i = 0; i < 1000; ++i) {
    auto got = srv.fetch(to_bytes("bulk-" + std::to_string(i)));
    ASSERT_TRUE(got.has_value());
    ASSERT_EQ(got->blocks, contents[static_cast<std::size_t>(i)]);
  }
}

TEST(EdgeServer, RespondMethod1) {
  Rng rng = Rng::seeded(402);
  FleetEnv fe = make_env(16, 1, rng);
  EdgeServer srv(0, fe.ctx);
  populate(srv, fe);
  Bytes id = test::replica_name(0, 0);
  EXPECT_TRUE(audit1(fe, srv, id, rng));

  auto [chal, k] = challgen1(fe.env.params, fe.env.pk, rng, 4);
  EXPECT_THROW(srv.respond_method1(to_bytes("unknown"), chal), UnknownReplica);
  Challenge forged = chal;
  forged.c2 = forged.c2 * fe.env.group.generator();
  EXPECT_THROW(srv.respond_method1(id, forged), InconsistentChallenge);

  ASSERT_TRUE(srv.inject_fault(FaultSpec{id, FaultKind::flip_block, chal.coefficients[0].index, 1}));
  Proof p = srv.respond_method1(id, chal);
  EXPECT_FALSE(check_proof1(fe.env.params, fe.env.otag, chal, k, p, id, fe.env.vendor_id));
}

TEST(EdgeServer, RespondMethod2) {
  Rng rng = Rng::seeded(403);
  FleetEnv fe = make_env(12, 5, rng);
  EdgeServer srv(0, fe.ctx);
  populate(srv, fe);
  std::vector<Bytes> ids;
  for (std::size_t f = 0; f < 5; ++f) ids.push_back(test::replica_name(0, f));
  auto [chal, k] = challgen1(fe.env.params, fe.env.pk, rng, 12);
  Scalar key = fe.env.group.random_scalar(rng);
  Proof p = srv.respond_method2(ids, chal, key);
  EXPECT_TRUE(check_proof2(fe.env.params, fe.env.otag, chal, k, key, p, ids, fe.env.vendor_id));

  // |S| = 1: both verifiers accept the respective honest responses.
  std::vector<Bytes> one{ids[2]};
  Proof p1 = srv.respond_method2(one, chal, key);
  EXPECT_TRUE(check_proof2(fe.env.params, fe.env.otag, chal, k, key, p1, one, fe.env.vendor_id));
  EXPECT_TRUE(check_proof1(fe.env.params, fe.env.otag, chal, k, srv.respond_method1(ids[2], chal), ids[2],
                           fe.env.vendor_id));

  std::vector<Bytes> missing = ids;
  missing.push_back(to_bytes("absent"));
  EXPECT_THROW(srv.respond_method2(missing, chal, key), UnknownReplica);
}

TEST(EdgeServer, FlipBlockChangesExactlyOneBit) {
  Rng rng = Rng::seeded(404);
  FleetEnv fe = make_env(10, 1, rng);
  EdgeServer srv(0, fe.ctx);
  populate(srv, fe);
  Bytes id = test::replica_name(0, 0);
  EXPECT_TRUE(srv.inject_fault(FaultSpec{id, FaultKind::flip_block, 7, 99}));
  auto after = srv.fetch(id)->blocks;
  int differing = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    if (!(after[i] == fe.files[0][i])) {
      ++differing;
      mpz_class x = after[i].value() ^ fe.files[0][i].value();
      EXPECT_EQ(mpz_popcount(x.get_mpz_t()), 1u);
      EXPECT_EQ(i, 6u);
    }
  }
  EXPECT_EQ(differing, 1);
  ASSERT_EQ(srv.fault_log().size(), 1u);
  EXPECT_TRUE(srv.fault_log()[0].mutated);
}

TEST(EdgeServer, FaultsDeterministicPerSeed) {
  Rng rng = Rng::seeded(405);
  FleetEnv fe = make_env(8, 1, rng);
  for (FaultKind kind : {FaultKind::flip_block, FaultKind::tamper_tag}) {
    EdgeServer a(0, fe.ctx);
    EdgeServer b(0, fe.ctx);
    populate(a, fe);
    populate(b, fe);
    Bytes id = test::replica_name(0, 0);
    a.inject_fault(FaultSpec{id, kind, 3, 1234});
    b.inject_fault(FaultSpec{id, kind, 3, 1234});
    EXPECT_EQ(a.fetch(id)->blocks, b.fetch(id)->blocks);
    EXPECT_EQ(a.fetch(id)->tag.values, b.fetch(id)->tag.values);
    EdgeServer c(0, fe.ctx);
    populate(c, fe);
    c.inject_fault(FaultSpec{id, kind, 3, 1235});
    const bool same = c.fetch(id)->blocks == a.fetch(id)->blocks && c.fetch(id)->tag.values == a.fetch(id)->tag.values;
    EXPECT_FALSE(same && kind == FaultKind::tamper_tag);
  }
}

TEST(EdgeServer, OtherFaultKinds) {
  Rng rng = Rng::seeded(406);
  FleetEnv fe = make_env(8, 2, rng);
  fe.files[1][2] = fe.env.group.zero();
  EdgeServer srv(0, fe.ctx);
  populate(srv, fe);
  Bytes id0 = test::replica_name(0, 0);
  Bytes id1 = test::replica_name(0, 1);

  EXPECT_FALSE(srv.inject_fault(FaultSpec{id1, FaultKind::zero_block, 3, 0}));
  EXPECT_EQ(srv.fetch(id1)->blocks, fe.files[1]);
  EXPECT_TRUE(srv.inject_fault(FaultSpec{id1, FaultKind::zero_block, 4, 0}));
  EXPECT_TRUE(srv.fetch(id1)->blocks[3].is_zero());

  OnlineTag before = srv.fetch(id0)->tag;
  EXPECT_TRUE(srv.inject_fault(FaultSpec{id0, FaultKind::tamper_tag, 5, 0}));
  OnlineTag after = srv.fetch(id0)->tag;
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(before.values[i] == after.values[i], i != 4);
  EXPECT_EQ(srv.fetch(id0)->blocks, fe.files[0]);

  EXPECT_TRUE(srv.inject_fault(FaultSpec{id0, FaultKind::drop_replica, 0, 0}));
  EXPECT_FALSE(srv.contains(id0));
  auto [chal, k] = challgen1(fe.env.params, fe.env.pk, rng, 4);
  EXPECT_THROW(srv.respond_method1(id0, chal), UnknownReplica);
  EXPECT_THROW(srv.inject_fault(FaultSpec{id0, FaultKind::flip_block, 1, 0}), UnknownReplica);
  EXPECT_THROW(srv.inject_fault(FaultSpec{id1, FaultKind::flip_block, 9, 0}), Error);
  EXPECT_THROW(srv.inject_fault(FaultSpec{id1, FaultKind::flip_block, 0, 0}), Error);
  EXPECT_EQ(srv.fault_log().size(), 4u);
}

TEST(EdgeServer, RunFindCorrupted) {
  Rng rng = Rng::seeded(407);
  FleetEnv fe = make_env(10, 5, rng);
  EdgeServer srv(0, fe.ctx);
  populate(srv, fe);
  std::vector<Bytes> ids;
  for (std::size_t f = 0; f < 5; ++f) ids.push_back(test::replica_name(0, f));
  auto [chal, k] = test::full_challenge(fe.env, rng);
  Trapdoor trap = loc_trap(fe.env.params, ids, chal, k, fe.env.otag.sec);
  EXPECT_TRUE(srv.run_find_corrupted(ids, chal, trap).empty());

  srv.inject_fault(FaultSpec{ids[1], FaultKind::flip_block, 2, 1});
  srv.inject_fault(FaultSpec{ids[3], FaultKind::tamper_tag, 10, 1});
  EXPECT_EQ(srv.run_find_corrupted(ids, chal, trap), (std::vector<std::size_t>{1, 3}));

  srv.inject_fault(FaultSpec{ids[4], FaultKind::drop_replica, 0, 0});
  EXPECT_EQ(srv.run_find_corrupted(ids, chal, trap), (std::vector<std::size_t>{1, 3, 4}));
}

TEST(EdgeServer, RepairPull) {
  Rng rng = Rng::seeded(408);
  FleetEnv fe = make_env(12, 1, rng);
  EdgeServer a(0, fe.ctx);
  EdgeServer b(1, fe.ctx);
  populate(a, fe);
  populate(b, fe);
  Bytes ida = test::replica_name(0, 0);
  Bytes idb = test::replica_name(1, 0);

  b.inject_fault(FaultSpec{idb, FaultKind::flip_block, 5, 3});
  EXPECT_FALSE(audit1(fe, b, idb, rng));

  // Stale tag: the tag bound to the source id does not verify under the destination id.
  repair_pull(b, a, ida, idb, a.fetch(ida)->tag);
  EXPECT_FALSE(audit1(fe, b, idb, rng));

  repair_pull(b, a, ida, idb, tag_for(fe, idb, a.fetch(ida)->blocks));
  EXPECT_TRUE(audit1(fe, b, idb, rng));
  EXPECT_TRUE(audit1(fe, a, ida, rng));

  EXPECT_THROW(repair_pull(a, a, ida, ida, a.fetch(ida)->tag), Error);
  EXPECT_THROW(repair_pull(b, a, to_bytes("missing"), idb, a.fetch(ida)->tag), UnknownReplica);
}

TEST(EdgeServer, FaultIsolationAcrossFleet) {
  Rng rng = Rng::seeded(409);
  FleetEnv fe = make_env(8, 2, rng);
  std::vector<std::unique_ptr<EdgeServer>> fleet;
  for (std::size_t j = 0; j < 5; ++j) {
    fleet.push_back(std::make_unique<EdgeServer>(j, fe.ctx));
    populate(*fleet.back(), fe);
  }
  const FaultKind kinds[] = {FaultKind::flip_block, FaultKind::zero_block, FaultKind::drop_replica,
                             FaultKind::tamper_tag};
  for (std::size_t j = 0; j < 5; ++j) {
    Bytes id = test::replica_name(j, j % 2);
    fleet[j]->inject_fault(FaultSpec{id, kinds[j % 4], 1 + j, j});
    for (std::size_t other = 0; other < 5; ++other) {
      if (other <= j) continue;
      for (std::size_t f = 0; f < 2; ++f) {
        EXPECT_TRUE(audit1(fe, *fleet[other], test::replica_name(other, f), rng)) << "server " << other;
      }
    }
  }
}
