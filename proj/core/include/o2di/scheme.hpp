#pragma once

// The inspection scheme's algorithms over scalars and group elements:
// key setup, offline/online tagging, the four proof-checking equations,
// aggregation, pre-computed challenges, and trapdoor-based localization.
// Nothing here touches files or transport.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "o2di/bytes.hpp"
#include "o2di/group.hpp"
#include "o2di/ibs.hpp"
#include "o2di/random.hpp"

namespace o2di {

inline constexpr std::size_t kDefaultChallengedBlocks = 100;
inline constexpr std::size_t kDefaultSubsetSize = 16;
inline constexpr std::string_view kDefaultSystemId = "O2DI-SYSTEM";

struct PublicParams {
  Group group;
  ibs::Params ibs;
  Bytes system_id;  // ID*
  G1Element pk;     // g^x
  std::size_t blocks = 0;
};

struct MasterSecret {
  ibs::SecretKey system_key;  // sk* for ID*
  Scalar x;
  ibs::MasterKey ibs_master;
};

struct VendorSecretKey {
  Scalar lambda;
  ibs::SecretKey sk;
};

struct VendorPublicKey {
  G1Element lambda_pub;  // g^lambda
  ibs::Signature sigma;  // over lambda_pub, by ID*
};

struct PublicOfflineTag {
  G1Element t1;           // g^y
  ibs::Signature sigma;   // over t1, by the vendor identity
  VendorPublicKey pk;
};

struct SecretOfflineTag {
  G1Element t2;  // pk^y
  Scalar y;
};

struct OfflineTag {
  PublicOfflineTag pub;
  SecretOfflineTag sec;
};

struct OnlineTag {
  Bytes id;
  std::vector<Scalar> values;  // t_1..t_l
};

struct AggregateTag {
  std::vector<Bytes> ids;
  std::vector<Scalar> values;
};

struct AggregateData {
  std::vector<Scalar> blocks;
  AggregateTag tag;
};

// Block numbers are 1-based, as on the wire.
struct Coefficient {
  std::uint64_t index = 0;
  Scalar value;
};

struct Challenge {
  G1Element c1;  // g^k
  G1Element c2;  // Lambda^k
  std::vector<Coefficient> coefficients;
};

struct Proof {
  G2Element p1;
  G2Element p2;
};

struct PreChallenge {
  Scalar k;
  G1Element v;  // g^k
  G1Element w;  // Lambda^k
};

using PreChallengePool = std::vector<PreChallenge>;

struct ServerChallenge {
  G1Element c1;
  G1Element c2;
};

struct AggregateChallenge {
  std::vector<ServerChallenge> servers;
  std::vector<Coefficient> coefficients;

  Challenge for_server(std::size_t j) const;
};

// Verifier-side secrets of an aggregate challenge: k^(j) and the pool
// subsets J_j they were summed from.
struct AggregateSecrets {
  std::vector<Scalar> k;
  std::vector<std::vector<std::size_t>> subsets;
};

using Trapdoor = std::vector<Scalar>;

// Hash inputs. `id` is length-prefixed (2 bytes), the block number is 8-byte
// big-endian, T2 is its fixed-width compressed encoding.
Bytes block_hash_input(BytesView id, BytesView t2_encoded, std::uint64_t index);
Bytes prf_input(BytesView id, std::uint64_t index);

std::pair<PublicParams, MasterSecret> setup(const Group& group, std::size_t blocks, Rng& rng,
                                            BytesView system_id = as_bytes(kDefaultSystemId));

std::pair<VendorSecretKey, VendorPublicKey> extract(const PublicParams& params, const MasterSecret& msk,
                                                    BytesView vendor_id, Rng& rng);

OfflineTag offline_tag(const PublicParams& params, const VendorPublicKey& pk, const VendorSecretKey& sk, Rng& rng);

// t_i = lambda*m_i + y*H'(id || T2 || i). Only field arithmetic and H'.
OnlineTag online_tag(const PublicParams& params, BytesView id, const OfflineTag& otag,
                     std::span<const Scalar> blocks, const VendorSecretKey& sk);

bool precheck(const PublicParams& params, const PublicOfflineTag& poff, BytesView vendor_id);

// Draws |I| = min(challenged_blocks, l) distinct block numbers (sorted) and
// nonzero coefficients.
std::pair<Challenge, Scalar> challgen1(const PublicParams& params, const VendorPublicKey& pk, Rng& rng,
                                       std::size_t challenged_blocks = kDefaultChallengedBlocks);

bool challenge_consistent(const PublicParams& params, const Challenge& chal, const VendorPublicKey& pk);

// Throws InconsistentChallenge before touching tag data when
// e(c2, g) != e(c1, Lambda).
Proof gen_proof(const PublicParams& params, const Challenge& chal, std::span<const Scalar> tag_values,
                const VendorPublicKey& pk, std::span<const Scalar> blocks, BytesView vendor_id);
Proof gen_proof(const PublicParams& params, const Challenge& chal, const OnlineTag& tag,
                const VendorPublicKey& pk, std::span<const Scalar> blocks, BytesView vendor_id);
Proof gen_proof(const PublicParams& params, const Challenge& chal, const AggregateTag& tag,
                const VendorPublicKey& pk, std::span<const Scalar> blocks, BytesView vendor_id);

bool check_proof1(const PublicParams& params, const OfflineTag& otag, const Challenge& chal, const Scalar& k,
                  const Proof& proof, BytesView replica_id, BytesView vendor_id);

AggregateData agg_data(const PublicParams& params, const Scalar& prf_key, std::span<const OnlineTag> tags,
                       std::span<const std::vector<Scalar>> files);

PreChallengePool offline_challenge(const PublicParams& params, std::size_t m, const VendorPublicKey& pk, Rng& rng);

// Builds N per-server challenges by multiplying pool entries; no
// exponentiations. With `disjoint`, the subsets never share pool entries
// (requires N * subset_size <= |pool|).
std::pair<AggregateChallenge, AggregateSecrets> challgen2(const PublicParams& params, const PreChallengePool& pool,
                                                          std::size_t servers, Rng& rng,
                                                          std::size_t challenged_blocks = kDefaultChallengedBlocks,
                                                          std::size_t subset_size = kDefaultSubsetSize,
                                                          bool disjoint = false);

bool check_proof2(const PublicParams& params, const OfflineTag& otag, const Challenge& chal, const Scalar& k,
                  const Scalar& prf_key, const Proof& proof, std::span<const Bytes> replica_ids,
                  BytesView vendor_id);

// replica_ids[j] is the id of the replica held by server j.
bool check_proof3(const PublicParams& params, const OfflineTag& otag, const AggregateChallenge& chal,
                  const AggregateSecrets& secrets, std::span<const Proof> proofs,
                  std::span<const Bytes> replica_ids, BytesView vendor_id);

// replica_ids[j][s] is the id of file s's replica on server j.
bool check_proof4(const PublicParams& params, const OfflineTag& otag, const AggregateChallenge& chal,
                  const AggregateSecrets& secrets, const Scalar& prf_key, std::span<const Proof> proofs,
                  std::span<const std::vector<Bytes>> replica_ids, BytesView vendor_id);

Trapdoor loc_trap(const PublicParams& params, std::span<const Bytes> replica_ids, const Challenge& chal,
                  const Scalar& k, const SecretOfflineTag& soff);

// Positions s (into `tags`) whose per-file proof misses e(H(ID), T1)^trap_s.
std::vector<std::size_t> find_corrupted(const PublicParams& params, const PublicOfflineTag& poff,
                                        std::span<const OnlineTag> tags, std::span<const std::vector<Scalar>> files,
                                        const Challenge& chal, const Trapdoor& trap, BytesView vendor_id);

}  // namespace o2di
