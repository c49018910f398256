#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "o2di/bytes.hpp"
#include "o2di/scheme.hpp"

namespace o2di {

enum class FaultKind { flip_block, zero_block, drop_replica, tamper_tag };

const char* fault_kind_name(FaultKind kind);
FaultKind parse_fault_kind(std::string_view name);

struct FaultSpec {
  Bytes target;
  FaultKind kind = FaultKind::flip_block;
  std::uint64_t block = 1;  // 1-based; ignored for drop_replica
  std::uint64_t seed = 0;
};

struct FaultRecord {
  FaultSpec spec;
  bool mutated = false;
};

struct StoredReplica {
  std::vector<Scalar> blocks;
  OnlineTag tag;
};

// Public material every server needs to run the server-side algorithms.
struct ServerContext {
  PublicParams params;
  PublicOfflineTag poff;
  Bytes vendor_id;
};

// One simulated edge server. All state changes go through a single mutex,
// so a server behaves as a single-writer state machine; distinct servers
// are independent.
class EdgeServer {
 public:
  EdgeServer(std::size_t index, std::shared_ptr<const ServerContext> ctx);

  std::size_t index() const { return index_; }
  const ServerContext& context() const { return *ctx_; }

  // Rejects duplicate ids and tags/replicas whose length is not l.
  void cache(BytesView id, std::vector<Scalar> blocks, OnlineTag tag);
  bool contains(BytesView id) const;
  std::optional<StoredReplica> fetch(BytesView id) const;
  std::vector<Bytes> replica_ids() const;
  std::size_t size() const;

  Proof respond_method1(BytesView id, const Challenge& chal) const;
  Proof respond_method2(std::span<const Bytes> ids, const Challenge& chal, const Scalar& prf_key) const;

  // Applies the fault once and logs it. Returns whether stored state changed
  // (zeroing an already-zero block does not).
  bool inject_fault(const FaultSpec& spec);
  const std::vector<FaultRecord>& fault_log() const { return faults_; }

  // Positions into `ids` that fail their trapdoor target. Missing replicas
  // are reported as corrupted.
  std::vector<std::size_t> run_find_corrupted(std::span<const Bytes> ids, const Challenge& chal,
                                              const Trapdoor& trap) const;

  // Stores (or replaces) a replica delivered by the vendor during repair.
  void store_repair(BytesView id, std::vector<Scalar> blocks, OnlineTag tag);

 private:
  const StoredReplica& lookup(BytesView id) const;
  void check_shape(const std::vector<Scalar>& blocks, const OnlineTag& tag) const;

  std::size_t index_;
  std::shared_ptr<const ServerContext> ctx_;
  mutable std::mutex mu_;
  std::map<Bytes, StoredReplica> store_;
  std::vector<FaultRecord> faults_;
};

// Copies id_src's content from `src` into `dest` under id_dest with the
// vendor-issued fresh tag.
void repair_pull(EdgeServer& dest, const EdgeServer& src, BytesView id_src, BytesView id_dest, OnlineTag fresh_tag);

}  // namespace o2di
