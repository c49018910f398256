#include <benchmark/benchmark.h>

#include "o2di/scheme.hpp"

using namespace o2di;

namespace {

struct Fixture {
  PublicParams params;
  VendorSecretKey sk;
  VendorPublicKey pk;
  OfflineTag otag;
  Bytes vid = to_bytes("bench-vendor");
};

Fixture make(std::size_t blocks) {
  Rng rng = Rng::seeded(blocks);
  auto [params, msk] = setup(generate_group(80), blocks, rng);
  auto [sk, pk] = extract(params, msk, as_bytes("bench-vendor"), rng);
  OfflineTag otag = offline_tag(params, pk, sk, rng);
  return Fixture{params, sk, pk, otag};
}

std::vector<Scalar> random_blocks(const Group& g, std::size_t l, Rng& rng) {
  std::vector<Scalar> out;
  for (std::size_t i = 0; i < l; ++i) out.push_back(g.random_scalar(rng));
  return out;
}

void BM_OnlineTag(benchmark::State& state) {
  const auto l = static_cast<std::size_t>(state.range(0));
  Fixture f = make(l);
  Rng rng = Rng::seeded(7);
  auto blocks = random_blocks(f.params.group, l, rng);
  for (auto _ : state) benchmark::DoNotOptimize(online_tag(f.params, as_bytes("r"), f.otag, blocks, f.sk));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * l));
}
BENCHMARK(BM_OnlineTag)->Arg(256)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

void BM_OfflineTag(benchmark::State& state) {
  Fixture f = make(16);
  Rng rng = Rng::seeded(8);
  for (auto _ : state) benchmark::DoNotOptimize(offline_tag(f.params, f.pk, f.sk, rng));
}
BENCHMARK(BM_OfflineTag)->Unit(benchmark::kMillisecond);

void BM_ChallGen1(benchmark::State& state) {
  Fixture f = make(4096);
  Rng rng = Rng::seeded(9);
  for (auto _ : state) benchmark::DoNotOptimize(challgen1(f.params, f.pk, rng, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_ChallGen1)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_ChallGen2(benchmark::State& state) {
  Fixture f = make(4096);
  Rng rng = Rng::seeded(10);
  PreChallengePool pool = offline_challenge(f.params, 64, f.pk, rng);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(challgen2(f.params, pool, n, rng, 100, 16));
}
BENCHMARK(BM_ChallGen2)->Arg(1)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_GenProof(benchmark::State& state) {
  const std::size_t l = 512;
  Fixture f = make(l);
  Rng rng = Rng::seeded(11);
  auto blocks = random_blocks(f.params.group, l, rng);
  OnlineTag tag = online_tag(f.params, as_bytes("r"), f.otag, blocks, f.sk);
  auto [chal, k] = challgen1(f.params, f.pk, rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gen_proof(f.params, chal, tag, f.otag.pub.pk, blocks, f.vid));
}
BENCHMARK(BM_GenProof)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_CheckProof4(benchmark::State& state) {
  const std::size_t l = 100, servers = 3;
  const auto files = static_cast<std::size_t>(state.range(0));
  Fixture f = make(l);
  Rng rng = Rng::seeded(12);
  PreChallengePool pool = offline_challenge(f.params, 32, f.pk, rng);
  auto [agg, secrets] = challgen2(f.params, pool, servers, rng, 100, 8);
  Scalar key = f.params.group.random_scalar(rng);
  std::vector<std::vector<Scalar>> content;
  for (std::size_t s = 0; s < files; ++s) content.push_back(random_blocks(f.params.group, l, rng));
  std::vector<std::vector<Bytes>> ids(servers);
  std::vector<Proof> proofs;
  for (std::size_t j = 0; j < servers; ++j) {
    std::vector<OnlineTag> tags;
    for (std::size_t s = 0; s < files; ++s) {
      ids[j].push_back(to_bytes("r-" + std::to_string(j) + "-" + std::to_string(s)));
      tags.push_back(online_tag(f.params, ids[j].back(), f.otag, content[s], f.sk));
    }
    AggregateData ad = agg_data(f.params, key, tags, content);
    proofs.push_back(gen_proof(f.params, agg.for_server(j), ad.tag, f.otag.pub.pk, ad.blocks, f.vid));
  }
  for (auto _ : state) {
    bool ok = check_proof4(f.params, f.otag, agg, secrets, key, proofs, ids, f.vid);
    if (!ok) state.SkipWithError("honest proof rejected");
    benchmark::DoNotOptimize(ok);
  }
}
BENCHMARK(BM_CheckProof4)->Arg(5)->Arg(50)->Arg(500)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
