#include "o2di/scheme.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "o2di/errors.hpp"
#include "o2di/hash.hpp"

namespace o2di {

Bytes block_hash_input(BytesView id, BytesView t2_encoded, std::uint64_t index) {
  ByteWriter w;
  w.var16(id).raw(t2_encoded).u64(index);
  return std::move(w).take();
}

Bytes prf_input(BytesView id, std::uint64_t index) {
  ByteWriter w;
  w.var16(id).u64(index);
  return std::move(w).take();
}

Challenge AggregateChallenge::for_server(std::size_t j) const {
  if (j >= servers.size()) throw std::out_of_range("aggregate challenge has no such server");
  return Challenge{servers[j].c1, servers[j].c2, coefficients};
}

namespace {

// Uniform subset of {1..l} of the requested size with nonzero coefficients.
std::vector<Coefficient> sample_coefficients(const PublicParams& params, std::size_t challenged_blocks, Rng& rng) {
  const std::size_t count = std::min(challenged_blocks, params.blocks);
  if (count == 0) throw Error("a challenge needs at least one block");
  std::vector<std::uint64_t> indices(params.blocks);
  std::iota(indices.begin(), indices.end(), 1);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(indices.size() - i));
    std::swap(indices[i], indices[j]);
  }
  indices.resize(count);
  std::sort(indices.begin(), indices.end());
  std::vector<Coefficient> out;
  out.reserve(count);
  for (auto i : indices) out.push_back({i, params.group.random_nonzero_scalar(rng)});
  return out;
}

void check_indices(const PublicParams& params, std::span<const Coefficient> coeffs) {
  for (const auto& c : coeffs) {
    if (c.index == 0 || c.index > params.blocks) throw Error("challenge block number out of range");
  }
}

// sum_{i in I} H'(id || T2 || i) * v_i
Scalar replica_exponent(const PublicParams& params, BytesView t2_encoded, BytesView id,
                        std::span<const Coefficient> coeffs) {
  Scalar acc = params.group.zero();
  for (const auto& c : coeffs) {
    acc += hash_to_scalar(params.group, block_hash_input(id, t2_encoded, c.index)) * c.value;
  }
  return acc;
}

// sum_{i in I} v_i * sum_{s} F_k~(id_s || i) * H'(id_s || T2 || i)
Scalar weighted_exponent(const PublicParams& params, BytesView t2_encoded, const Scalar& prf_key,
                         std::span<const Bytes> ids, std::span<const Coefficient> coeffs) {
  Scalar acc = params.group.zero();
  for (const auto& c : coeffs) {
    Scalar inner = params.group.zero();
    for (const auto& id : ids) {
      inner += prf_eval(params.group, prf_key, prf_input(id, c.index)) *
               hash_to_scalar(params.group, block_hash_input(id, t2_encoded, c.index));
    }
    acc += c.value * inner;
  }
  return acc;
}

G2Element target_base(const PublicParams& params, const PublicOfflineTag& poff, BytesView vendor_id) {
  return params.group.pair(hash_to_g1(params.group, vendor_id), poff.t1);
}

G2Element combine(std::span<const Proof> proofs, const Group& group) {
  G2Element acc = group.g2_identity();
  for (const auto& p : proofs) acc = acc * p.p1 * p.p2;
  return acc;
}

Proof gen_proof_checked(const PublicParams& params, const Challenge& chal, std::span<const Scalar> tag_values,
                        std::span<const Scalar> blocks, const G1Element& id_point) {
  check_indices(params, chal.coefficients);
  if (tag_values.size() != params.blocks || blocks.size() != params.blocks) {
    throw CapacityError("tag and data must both hold l blocks");
  }
  Scalar mu = params.group.zero();
  Scalar tau = params.group.zero();
  for (const auto& c : chal.coefficients) {
    mu += c.value * blocks[c.index - 1];
    tau += c.value * tag_values[c.index - 1];
  }
  return Proof{params.group.pair(id_point.pow(tau), chal.c1), params.group.pair(id_point, chal.c2.pow(-mu))};
}

}  // namespace

std::pair<PublicParams, MasterSecret> setup(const Group& group, std::size_t blocks, Rng& rng, BytesView system_id) {
  if (blocks == 0) throw std::invalid_argument("block count must be at least 1");
  auto [ibs_params, ibs_master] = ibs::gen(group, rng);
  ibs::SecretKey system_key = ibs::keygen(group, ibs_params, ibs_master, system_id);
  Scalar x = group.random_nonzero_scalar(rng);
  PublicParams params{group, ibs_params, Bytes(system_id.begin(), system_id.end()), group.generator().pow(x), blocks};
  return {std::move(params), MasterSecret{system_key, x, ibs_master}};
}

std::pair<VendorSecretKey, VendorPublicKey> extract(const PublicParams& params, const MasterSecret& msk,
                                                    BytesView vendor_id, Rng& rng) {
  const Group& group = params.group;
  Scalar lambda = group.random_nonzero_scalar(rng);
  G1Element lambda_pub = group.generator().pow(lambda);
  ibs::SecretKey sk = ibs::keygen(group, params.ibs, msk.ibs_master, vendor_id);
  ibs::Signature sigma = ibs::sign(group, params.ibs, msk.system_key, lambda_pub.encode(), rng);
  return {VendorSecretKey{lambda, sk}, VendorPublicKey{lambda_pub, sigma}};
}

OfflineTag offline_tag(const PublicParams& params, const VendorPublicKey& pk, const VendorSecretKey& sk, Rng& rng) {
  const Group& group = params.group;
  Scalar y = group.random_nonzero_scalar(rng);
  G1Element t1 = group.generator().pow(y);
  G1Element t2 = params.pk.pow(y);
  ibs::Signature sigma = ibs::sign(group, params.ibs, sk.sk, t1.encode(), rng);
  return OfflineTag{PublicOfflineTag{t1, sigma, pk}, SecretOfflineTag{t2, y}};
}

OnlineTag online_tag(const PublicParams& params, BytesView id, const OfflineTag& otag,
                     std::span<const Scalar> blocks, const VendorSecretKey& sk) {
  if (blocks.size() != params.blocks) {
    throw CapacityError("online_tag expects " + std::to_string(params.blocks) + " blocks, got " +
                        std::to_string(blocks.size()));
  }
  const Bytes t2 = otag.sec.t2.encode();
  OnlineTag tag{Bytes(id.begin(), id.end()), {}};
  tag.values.reserve(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    Scalar h = hash_to_scalar(params.group, block_hash_input(id, t2, i + 1));
    tag.values.push_back(sk.lambda * blocks[i] + otag.sec.y * h);
  }
  return tag;
}

bool precheck(const PublicParams& params, const PublicOfflineTag& poff, BytesView vendor_id) {
  const Group& group = params.group;
  return ibs::verify(group, params.ibs, poff.pk.sigma, params.system_id, poff.pk.lambda_pub.encode()) &&
         ibs::verify(group, params.ibs, poff.sigma, vendor_id, poff.t1.encode());
}

std::pair<Challenge, Scalar> challgen1(const PublicParams& params, const VendorPublicKey& pk, Rng& rng,
                                       std::size_t challenged_blocks) {
  Scalar k = params.group.random_nonzero_scalar(rng);
  Challenge chal{params.group.generator().pow(k), pk.lambda_pub.pow(k), {}};
  chal.coefficients = sample_coefficients(params, challenged_blocks, rng);
  return {std::move(chal), k};
}

bool challenge_consistent(const PublicParams& params, const Challenge& chal, const VendorPublicKey& pk) {
  const Group& group = params.group;
  return group.pair(chal.c2, group.generator()) == group.pair(chal.c1, pk.lambda_pub);
}

Proof gen_proof(const PublicParams& params, const Challenge& chal, std::span<const Scalar> tag_values,
                const VendorPublicKey& pk, std::span<const Scalar> blocks, BytesView vendor_id) {
  if (!challenge_consistent(params, chal, pk)) throw InconsistentChallenge();
  return gen_proof_checked(params, chal, tag_values, blocks, hash_to_g1(params.group, vendor_id));
}

Proof gen_proof(const PublicParams& params, const Challenge& chal, const OnlineTag& tag, const VendorPublicKey& pk,
                std::span<const Scalar> blocks, BytesView vendor_id) {
  return gen_proof(params, chal, std::span<const Scalar>(tag.values), pk, blocks, vendor_id);
}

Proof gen_proof(const PublicParams& params, const Challenge& chal, const AggregateTag& tag,
                const VendorPublicKey& pk, std::span<const Scalar> blocks, BytesView vendor_id) {
  return gen_proof(params, chal, std::span<const Scalar>(tag.values), pk, blocks, vendor_id);
}

bool check_proof1(const PublicParams& params, const OfflineTag& otag, const Challenge& chal, const Scalar& k,
                  const Proof& proof, BytesView replica_id, BytesView vendor_id) {
  const Scalar e = k * replica_exponent(params, otag.sec.t2.encode(), replica_id, chal.coefficients);
  return proof.p1 * proof.p2 == target_base(params, otag.pub, vendor_id).pow(e);
}

AggregateData agg_data(const PublicParams& params, const Scalar& prf_key, std::span<const OnlineTag> tags,
                       std::span<const std::vector<Scalar>> files) {
  if (tags.size() != files.size() || tags.empty()) {
    throw Error("agg_data needs one tag per file and at least one file");
  }
  const Group& group = params.group;
  AggregateData out{std::vector<Scalar>(params.blocks, group.zero()),
                    AggregateTag{{}, std::vector<Scalar>(params.blocks, group.zero())}};
  for (std::size_t s = 0; s < tags.size(); ++s) {
    if (tags[s].values.size() != params.blocks || files[s].size() != params.blocks) {
      throw CapacityError("agg_data: every file and tag must hold l blocks");
    }
    out.tag.ids.push_back(tags[s].id);
    for (std::size_t i = 0; i < params.blocks; ++i) {
      Scalar w = prf_eval(group, prf_key, prf_input(tags[s].id, i + 1));
      out.blocks[i] += w * files[s][i];
      out.tag.values[i] += w * tags[s].values[i];
    }
  }
  return out;
}

PreChallengePool offline_challenge(const PublicParams& params, std::size_t m, const VendorPublicKey& pk, Rng& rng) {
  if (m == 0) throw std::invalid_argument("pre-challenge pool size must be at least 1");
  PreChallengePool pool;
  pool.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    Scalar k = params.group.random_nonzero_scalar(rng);
    pool.push_back(PreChallenge{k, params.group.generator().pow(k), pk.lambda_pub.pow(k)});
  }
  return pool;
}

std::pair<AggregateChallenge, AggregateSecrets> challgen2(const PublicParams& params, const PreChallengePool& pool,
                                                          std::size_t servers, Rng& rng,
                                                          std::size_t challenged_blocks, std::size_t subset_size,
                                                          bool disjoint) {
  if (servers == 0) throw std::invalid_argument("challgen2 needs at least one server");
  if (pool.empty()) throw PoolExhausted();
  if (subset_size == 0) throw std::invalid_argument("subset size must be at least 1");
  const std::size_t size = std::min(subset_size, pool.size());
  if (disjoint && servers * size > pool.size()) throw PoolExhausted();

  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  std::size_t cursor = 0;
  auto partial_shuffle = [&](std::size_t from, std::size_t count) {
    for (std::size_t i = from; i < from + count; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng.below(order.size() - i));
      std::swap(order[i], order[j]);
    }
  };

  AggregateChallenge chal;
  AggregateSecrets secrets;
  for (std::size_t j = 0; j < servers; ++j) {
    if (!disjoint) cursor = 0;
    partial_shuffle(cursor, size);
    std::vector<std::size_t> subset(order.begin() + static_cast<std::ptrdiff_t>(cursor),
                                    order.begin() + static_cast<std::ptrdiff_t>(cursor + size));
    cursor += size;
    std::sort(subset.begin(), subset.end());

    const PreChallenge& first = pool[subset[0]];
    Scalar k = first.k;
    G1Element c1 = first.v;
    G1Element c2 = first.w;
    for (std::size_t t = 1; t < subset.size(); ++t) {
      const PreChallenge& e = pool[subset[t]];
      k += e.k;
      c1 = c1 * e.v;
      c2 = c2 * e.w;
    }
    chal.servers.push_back({std::move(c1), std::move(c2)});
    secrets.k.push_back(std::move(k));
    secrets.subsets.push_back(std::move(subset));
  }
  chal.coefficients = sample_coefficients(params, challenged_blocks, rng);
  return {std::move(chal), std::move(secrets)};
}

bool check_proof2(const PublicParams& params, const OfflineTag& otag, const Challenge& chal, const Scalar& k,
                  const Scalar& prf_key, const Proof& proof, std::span<const Bytes> replica_ids,
                  BytesView vendor_id) {
  const Scalar e = k * weighted_exponent(params, otag.sec.t2.encode(), prf_key, replica_ids, chal.coefficients);
  return proof.p1 * proof.p2 == target_base(params, otag.pub, vendor_id).pow(e);
}

bool check_proof3(const PublicParams& params, const OfflineTag& otag, const AggregateChallenge& chal,
                  const AggregateSecrets& secrets, std::span<const Proof> proofs,
                  std::span<const Bytes> replica_ids, BytesView vendor_id) {
  const std::size_t n = chal.servers.size();
  if (proofs.size() != n || replica_ids.size() != n || secrets.k.size() != n) {
    throw Error("check_proof3 needs exactly one proof, replica id and secret per server");
  }
  const Bytes t2 = otag.sec.t2.encode();
  Scalar e = params.group.zero();
  for (std::size_t j = 0; j < n; ++j) {
    e += secrets.k[j] * replica_exponent(params, t2, replica_ids[j], chal.coefficients);
  }
  return combine(proofs, params.group) == target_base(params, otag.pub, vendor_id).pow(e);
}

bool check_proof4(const PublicParams& params, const OfflineTag& otag, const AggregateChallenge& chal,
                  const AggregateSecrets& secrets, const Scalar& prf_key, std::span<const Proof> proofs,
                  std::span<const std::vector<Bytes>> replica_ids, BytesView vendor_id) {
  const std::size_t n = chal.servers.size();
  if (proofs.size() != n || replica_ids.size() != n || secrets.k.size() != n) {
    throw Error("check_proof4 needs exactly one proof, id list and secret per server");
  }
  const Bytes t2 = otag.sec.t2.encode();
  Scalar e = params.group.zero();
  for (std::size_t j = 0; j < n; ++j) {
    e += secrets.k[j] * weighted_exponent(params, t2, prf_key, replica_ids[j], chal.coefficients);
  }
  return combine(proofs, params.group) == target_base(params, otag.pub, vendor_id).pow(e);
}

Trapdoor loc_trap(const PublicParams& params, std::span<const Bytes> replica_ids, const Challenge& chal,
                  const Scalar& k, const SecretOfflineTag& soff) {
  const Bytes t2 = soff.t2.encode();
  Trapdoor trap;
  trap.reserve(replica_ids.size());
  for (const auto& id : replica_ids) trap.push_back(k * replica_exponent(params, t2, id, chal.coefficients));
  return trap;
}

std::vector<std::size_t> find_corrupted(const PublicParams& params, const PublicOfflineTag& poff,
                                        std::span<const OnlineTag> tags, std::span<const std::vector<Scalar>> files,
                                        const Challenge& chal, const Trapdoor& trap, BytesView vendor_id) {
  if (trap.size() != tags.size() || files.size() != tags.size()) {
    throw Error("find_corrupted needs one trapdoor entry and one file per tag");
  }
  if (!challenge_consistent(params, chal, poff.pk)) throw InconsistentChallenge();
  const G1Element id_point = hash_to_g1(params.group, vendor_id);
  const G2Element base = params.group.pair(id_point, poff.t1);
  std::vector<std::size_t> corrupted;
  for (std::size_t s = 0; s < tags.size(); ++s) {
    bool ok = false;
    if (tags[s].values.size() == params.blocks && files[s].size() == params.blocks) {
      Proof p = gen_proof_checked(params, chal, tags[s].values, files[s], id_point);
      ok = p.p1 * p.p2 == base.pow(trap[s]);
    }
    if (!ok) corrupted.push_back(s);
  }
  return corrupted;
}

}  // namespace o2di
