#include <benchmark/benchmark.h>

#include "o2di/group.hpp"
#include "o2di/hash.hpp"
#include "o2di/random.hpp"

using namespace o2di;

namespace {

const Group& group() {
  static const Group g = generate_group(80);
  return g;
}

void BM_Pairing(benchmark::State& state) {
  Rng rng = Rng::seeded(1);
  const Group& g = group();
  G1Element a = g.generator().pow(g.random_scalar(rng));
  G1Element b = g.generator().pow(g.random_scalar(rng));
  for (auto _ : state) benchmark::DoNotOptimize(g.pair(a, b));
}
BENCHMARK(BM_Pairing)->Unit(benchmark::kMillisecond);

void BM_G1Exp(benchmark::State& state) {
  Rng rng = Rng::seeded(2);
  const Group& g = group();
  G1Element a = g.generator();
  Scalar k = g.random_scalar(rng);
  for (auto _ : state) benchmark::DoNotOptimize(a.pow(k));
}
BENCHMARK(BM_G1Exp)->Unit(benchmark::kMicrosecond);

void BM_G1Mul(benchmark::State& state) {
  Rng rng = Rng::seeded(3);
  const Group& g = group();
  G1Element a = g.generator().pow(g.random_scalar(rng));
  G1Element b = g.generator().pow(g.random_scalar(rng));
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_G1Mul)->Unit(benchmark::kMicrosecond);

void BM_G2Exp(benchmark::State& state) {
  Rng rng = Rng::seeded(4);
  const Group& g = group();
  G2Element t = g.pair(g.generator(), g.generator());
  Scalar k = g.random_scalar(rng);
  for (auto _ : state) benchmark::DoNotOptimize(t.pow(k));
}
BENCHMARK(BM_G2Exp)->Unit(benchmark::kMicrosecond);

void BM_HashToG1(benchmark::State& state) {
  const Group& g = group();
  std::uint64_t i = 0;
  for (auto _ : state) {
    Bytes in = to_bytes("bench-" + std::to_string(i++));
    benchmark::DoNotOptimize(hash_to_g1(g, in));
  }
}
BENCHMARK(BM_HashToG1)->Unit(benchmark::kMicrosecond);

void BM_HashToScalar(benchmark::State& state) {
  const Group& g = group();
  Bytes in(64, 0xab);
  for (auto _ : state) benchmark::DoNotOptimize(hash_to_scalar(g, in));
}
BENCHMARK(BM_HashToScalar);

void BM_ScalarMul(benchmark::State& state) {
  Rng rng = Rng::seeded(5);
  const Group& g = group();
  Scalar a = g.random_scalar(rng), b = g.random_scalar(rng);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_ScalarMul);

}  // namespace
