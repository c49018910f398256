#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "o2di/protocol.hpp"
#include "o2di/random.hpp"

namespace o2di::cli {

// Bad invocation: reported with exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRejected = 3;

struct Settings {
  std::filesystem::path vendor_dir = "vendor";
  std::filesystem::path fleet_dir = "fleet";
  std::size_t challenged = kDefaultChallengedBlocks;
  std::size_t pool_size = 64;
  std::size_t subset_size = kDefaultSubsetSize;
  bool one_time_pool = false;
  std::optional<std::uint64_t> seed;
  bool json = false;

  ProtocolConfig protocol() const;
  // Seeded per purpose when --seed is given, otherwise the OS generator.
  Rng rng(std::string_view purpose) const;
};

// Files under the vendor directory and the simulated fleet directory.
class Workspace {
 public:
  explicit Workspace(const Settings& settings) : s_(settings) {}

  std::filesystem::path params_path() const { return s_.vendor_dir / "params.json"; }
  std::filesystem::path master_path() const { return s_.vendor_dir / "master.json"; }
  std::filesystem::path keys_path() const { return s_.vendor_dir / "vendor.json"; }
  std::filesystem::path pool_path() const { return s_.vendor_dir / "pool.json"; }
  std::filesystem::path manifest_path() const { return s_.vendor_dir / "manifest.bin"; }
  std::filesystem::path log_path() const { return s_.vendor_dir / "audits.jsonl"; }
  std::filesystem::path last_audit_path() const { return s_.vendor_dir / "last-audit.json"; }

  bool has_keys() const;
  VendorState load_vendor() const;
  void save_vendor(const VendorState& state) const;  // pool and manifest
  void save_keys(const VendorState& state, const MasterSecret& msk) const;

  bool has_fleet() const;
  std::unique_ptr<Fleet> load_fleet(const VendorState& state) const;
  void save_fleet(const Fleet& fleet) const;

  void append_log(const AuditReport& report, const FleetManifest& manifest) const;
  std::optional<AuditReport> last_audit(const PublicParams& params) const;
  void save_last_audit(const AuditReport& report, const FleetManifest& manifest) const;
  void clear_last_audit() const;

 private:
  const Settings& s_;
};

}  // namespace o2di::cli
