#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "o2di/blockcodec.hpp"
#include "o2di/bytes.hpp"
#include "o2di/fleet.hpp"
#include "o2di/scheme.hpp"

namespace o2di {

// Handles one encoded request frame on `server` and returns the encoded
// reply (an ERROR frame for any server-side failure).
Bytes serve_frame(EdgeServer& server, BytesView request);

// In-process transport: every exchange is a serialized request frame and a
// serialized reply frame. Servers are numbered from 0.
class Fleet {
 public:
  Fleet(std::shared_ptr<const ServerContext> ctx, std::size_t servers);

  std::size_t size() const { return servers_.size(); }
  EdgeServer& server(std::size_t j);
  const EdgeServer& server(std::size_t j) const;
  const ServerContext& context() const { return *ctx_; }

  void set_reachable(std::size_t j, bool reachable);
  bool reachable(std::size_t j) const;

  // Throws TransportError when server j is unreachable.
  Bytes exchange(std::size_t j, BytesView request);

 private:
  std::shared_ptr<const ServerContext> ctx_;
  std::vector<std::unique_ptr<EdgeServer>> servers_;
  std::vector<char> reachable_;
};

struct FileRecord {
  std::string name;
  Bytes digest;
  std::uint64_t size = 0;
  std::map<std::size_t, Bytes> replicas;  // server -> replica id
};

struct AuditSummary {
  std::string kind;
  int method = 0;
  std::vector<std::size_t> files;
  std::vector<std::size_t> servers;
  bool verdict = false;
  std::string cause;
};

// Vendor-side bookkeeping. Holds ids and digests only, never content or tags.
struct FleetManifest {
  std::size_t servers = 0;
  std::vector<FileRecord> files;
  std::vector<AuditSummary> history;

  std::optional<std::size_t> find(std::string_view name) const;
};

struct RepairEntry {
  std::size_t dest = 0;
  std::size_t file = 0;
  // Candidate sources, lowest index first; the first that passes a
  // full-coverage audit is used.
  std::vector<std::size_t> sources;
  bool done = false;
  std::optional<std::size_t> used_source;
  std::string note;
};

struct RepairPlan {
  std::vector<RepairEntry> entries;
  std::vector<std::pair<std::size_t, std::size_t>> unrecoverable;  // (server, file)
};

struct AuditReport {
  std::string kind = "audit";
  int method = 0;
  std::vector<std::size_t> files;
  std::vector<std::size_t> servers;
  std::size_t challenged = 0;
  bool verdict = false;
  // Empty on success; otherwise proof-rejected, unreachable, unknown-replica,
  // inconsistent-challenge, or malformed-reply.
  std::string cause;
  double challenge_ms = 0;
  double response_ms = 0;
  double verify_ms = 0;
  std::uint64_t bytes_sent = 0;
  std::uint64_t bytes_received = 0;

  // Challenge material kept for localization: one challenge/secret per
  // entry of `servers`.
  std::vector<Challenge> challenges;
  std::vector<Scalar> secrets;
  std::optional<Scalar> prf_key;

  // Set by localize: corrupted[p] lists file indices failing on servers[p].
  bool localized = false;
  bool localization_pending = false;  // failed audit not yet localized
  std::vector<std::vector<std::size_t>> corrupted;
  std::vector<std::size_t> unresponsive;

  // Repair reports only.
  std::vector<RepairEntry> repairs;
  std::vector<std::pair<std::size_t, std::size_t>> unrecoverable;
};

struct ProtocolConfig {
  std::size_t challenged_blocks = kDefaultChallengedBlocks;
  std::size_t pool_size = 64;
  std::size_t subset_size = kDefaultSubsetSize;
  // One-time mode consumes pool entries and never refills on its own.
  bool one_time_pool = false;
};

struct VendorState {
  PublicParams params;
  Bytes vendor_id;
  VendorSecretKey sk;
  VendorPublicKey pk;
  OfflineTag otag;
  PreChallengePool pool;
  FleetManifest manifest;
};

class Vendor {
 public:
  Vendor(VendorState state, ProtocolConfig config, Rng rng);

  // Extracts the vendor key, builds the offline tag, and starts an empty manifest.
  static VendorState bootstrap(const PublicParams& params, const MasterSecret& msk, BytesView vendor_id,
                               std::size_t servers, Rng& rng);

  VendorState& state() { return state_; }
  const VendorState& state() const { return state_; }
  const ProtocolConfig& config() const { return config_; }
  ServerContext server_context() const;

  // Encodes, replicates, tags, and caches `data` on each listed server.
  // Returns the file index in the manifest.
  std::size_t add_file(Fleet& fleet, std::string name, BytesView data, std::span<const std::size_t> servers);

  void refill_pool(std::size_t count);

  AuditReport audit_method1(Fleet& fleet, std::size_t file, std::size_t server,
                            std::optional<std::size_t> challenged = std::nullopt);
  AuditReport audit_method2(Fleet& fleet, std::span<const std::size_t> files, std::size_t server);
  AuditReport audit_method3(Fleet& fleet, std::size_t file, std::span<const std::size_t> servers);
  AuditReport audit_method4(Fleet& fleet, std::span<const std::size_t> files, std::span<const std::size_t> servers);
  AuditReport audit(Fleet& fleet, int method, std::span<const std::size_t> files,
                    std::span<const std::size_t> servers);

  // Runs the trapdoor exchange for each server in a failed audit's scope.
  void localize(Fleet& fleet, AuditReport& report) const;

  AuditReport execute_repair(Fleet& fleet, const RepairPlan& plan);

 private:
  const Bytes& replica_id(std::size_t file, std::size_t server) const;
  void record(AuditReport& report);
  std::pair<AggregateChallenge, AggregateSecrets> draw_aggregate(std::size_t servers);

  VendorState state_;
  ProtocolConfig config_;
  Rng rng_;
};

// Healthy sources are servers holding the file that were not reported
// corrupted for it.
RepairPlan plan_repair(const FleetManifest& manifest, const AuditReport& localized);

}  // namespace o2di
