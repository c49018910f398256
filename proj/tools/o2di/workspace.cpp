#include "workspace.hpp"

#include "o2di/storage.hpp"

namespace o2di::cli {

namespace fs = std::filesystem;

ProtocolConfig Settings::protocol() const {
  ProtocolConfig c;
  c.challenged_blocks = challenged;
  c.pool_size = pool_size;
  c.subset_size = subset_size;
  c.one_time_pool = one_time_pool;
  return c;
}

Rng Settings::rng(std::string_view purpose) const {
  if (!seed) return Rng::system();
  return Rng::seeded(to_bytes(std::string(purpose) + ":" + std::to_string(*seed)));
}

bool Workspace::has_keys() const { return fs::exists(params_path()) && fs::exists(keys_path()); }

VendorState Workspace::load_vendor() const {
  if (!has_keys()) {
    throw UsageError("no vendor keys in " + s_.vendor_dir.string() + "; run `o2di keygen` first");
  }
  VendorState st = storage::decode_vendor_state(storage::decode_public_params(storage::read_text(params_path())),
                                                storage::read_text(keys_path()));
  if (fs::exists(pool_path())) st.pool = storage::decode_pool(st.params.group, storage::read_text(pool_path()));
  if (fs::exists(manifest_path())) st.manifest = storage::decode_manifest(storage::read_file(manifest_path()));
  return st;
}

void Workspace::save_vendor(const VendorState& st) const {
  storage::write_text(pool_path(), storage::encode_pool(st.pool), true);
  storage::write_file(manifest_path(), storage::encode_manifest(st.manifest));
}

void Workspace::save_keys(const VendorState& st, const MasterSecret& msk) const {
  fs::create_directories(s_.vendor_dir);
  storage::write_text(params_path(), storage::encode_public_params(st.params));
  storage::write_text(master_path(), storage::encode_master_secret(msk), true);
  storage::write_text(keys_path(), storage::encode_vendor_keys(st), true);
  save_vendor(st);
}

bool Workspace::has_fleet() const { return fs::exists(s_.fleet_dir / "fleet.json"); }

std::unique_ptr<Fleet> Workspace::load_fleet(const VendorState& st) const {
  if (!has_fleet()) throw UsageError("no fleet in " + s_.fleet_dir.string() + "; run `o2di fleet-init` first");
  auto ctx = std::make_shared<const ServerContext>(ServerContext{st.params, st.otag.pub, st.vendor_id});
  return storage::load_fleet(s_.fleet_dir, ctx);
}

void Workspace::save_fleet(const Fleet& fleet) const { storage::save_fleet(s_.fleet_dir, fleet); }

void Workspace::append_log(const AuditReport& report, const FleetManifest& manifest) const {
  storage::ReportOptions opt;
  opt.timings = !s_.seed.has_value();
  opt.pretty = false;
  std::string line = storage::encode_report(report, &manifest, opt) + "\n";
  std::string text = fs::exists(log_path()) ? storage::read_text(log_path()) : std::string();
  storage::write_text(log_path(), text + line);
}

std::optional<AuditReport> Workspace::last_audit(const PublicParams& params) const {
  if (!fs::exists(last_audit_path())) return std::nullopt;
  return storage::decode_report(params.group, params.blocks, storage::read_text(last_audit_path()));
}

void Workspace::save_last_audit(const AuditReport& report, const FleetManifest& manifest) const {
  storage::ReportOptions opt;
  opt.secrets = true;
  opt.timings = !s_.seed.has_value();
  storage::write_text(last_audit_path(), storage::encode_report(report, &manifest, opt), true);
}

void Workspace::clear_last_audit() const { fs::remove(last_audit_path()); }

}  // namespace o2di::cli
