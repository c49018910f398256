#pragma once

#include <optional>
#include <utility>

#include "o2di/bytes.hpp"
#include "o2di/group.hpp"
#include "o2di/random.hpp"

// Hess identity-based signatures over the symmetric pairing.
//   Gen:    s <- Z_q, P_pub = g^s
//   KeyGen: d_ID = Q_ID^s with Q_ID = H_id(ID)
//   Sign:   r = e(g,g)^k, h = H_msg(m || r), U = d_ID^h * g^k
//   Vrfy:   r' = e(U,g) * e(Q_ID, P_pub)^(-h), accept iff h = H_msg(m || r')
namespace o2di::ibs {

inline constexpr std::string_view kTagIdentity = "O2DI-IBS-ID";
inline constexpr std::string_view kTagChallenge = "O2DI-IBS-H";

struct Params {
  G1Element master_public;
};

struct MasterKey {
  Scalar secret;
};

struct SecretKey {
  G1Element key;
};

struct Signature {
  G1Element u;
  Scalar h;
};

std::pair<Params, MasterKey> gen(const Group& group, Rng& rng);
SecretKey keygen(const Group& group, const Params& params, const MasterKey& msk, BytesView id);
Signature sign(const Group& group, const Params& params, const SecretKey& sk, BytesView msg, Rng& rng);
bool verify(const Group& group, const Params& params, const Signature& sig, BytesView id, BytesView msg);

// Components in declared order (u, h), each with a 2-byte length prefix.
Bytes encode(const Signature& sig);
Signature decode(const Group& group, BytesView in);
// Decodes then verifies; malformed input yields false.
bool verify_encoded(const Group& group, const Params& params, BytesView sig, BytesView id, BytesView msg);

}  // namespace o2di::ibs
