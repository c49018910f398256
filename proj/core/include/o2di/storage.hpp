#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "o2di/bytes.hpp"
#include "o2di/protocol.hpp"
#include "o2di/scheme.hpp"

namespace o2di::storage {

// Tag file: "O2DI-TAG", version, replica id (u16-prefixed), l (u32),
// scalar width (u16), then l fixed-width scalars.
inline constexpr std::string_view kTagMagic = "O2DI-TAG";
Bytes encode_tag_file(const Group& group, const OnlineTag& tag);
OnlineTag decode_tag_file(const Group& group, BytesView in);
std::size_t tag_file_header_size(std::size_t id_length);

// Binary manifest. Every record has a fixed size apart from the file name
// and audit history, so its size does not depend on file content.
inline constexpr std::string_view kManifestMagic = "O2DI-MAN";
Bytes encode_manifest(const FleetManifest& manifest);
FleetManifest decode_manifest(BytesView in);

// JSON documents. Element values are hex strings of their canonical encodings.
std::string encode_public_params(const PublicParams& params);
PublicParams decode_public_params(std::string_view json);

std::string encode_master_secret(const MasterSecret& msk);
MasterSecret decode_master_secret(const Group& group, std::string_view json);

// Vendor id, key pair, and offline tag.
std::string encode_vendor_keys(const VendorState& state);
void decode_vendor_keys(std::string_view json, VendorState& into);
// Starts from `params`; the pool and manifest are left empty.
VendorState decode_vendor_state(PublicParams params, std::string_view keys_json);

std::string encode_pool(const PreChallengePool& pool);
PreChallengePool decode_pool(const Group& group, std::string_view json);

struct ReportOptions {
  bool secrets = false;  // retained challenges and k values
  bool timings = true;
  bool pretty = true;  // false: a single line
};
std::string encode_report(const AuditReport& report, const FleetManifest* manifest = nullptr,
                          ReportOptions options = {});
AuditReport decode_report(const Group& group, std::size_t blocks, std::string_view json);

void write_file(const std::filesystem::path& path, BytesView data, bool secret = false);
void write_text(const std::filesystem::path& path, std::string_view text, bool secret = false);
Bytes read_file(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);

// Fleet directory: fleet.json plus server-<j>/<id>.blk and <id>.tag.
void save_fleet(const std::filesystem::path& dir, const Fleet& fleet);
// Fresh directory for `servers` empty, reachable servers; removes old server data.
void init_fleet_dir(const std::filesystem::path& dir, std::size_t servers);
std::unique_ptr<Fleet> load_fleet(const std::filesystem::path& dir, std::shared_ptr<const ServerContext> ctx);

}  // namespace o2di::storage
