#include "o2di/storage.hpp"

#include <sys/stat.h>

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "o2di/errors.hpp"
#include "o2di/ibs.hpp"
#include "o2di/wire.hpp"

namespace o2di::storage {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string hex(BytesView b) { return to_hex(b); }

Bytes unhex(const json& j) {
  if (!j.is_string()) throw DecodeError("expected a hex string");
  return from_hex(j.get<std::string>());
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw DecodeError(std::string("invalid JSON: ") + e.what());
  }
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw DecodeError(std::string("malformed document: ") + e.what());
  }
}

Scalar scalar_of(const Group& g, const json& j) { return g.decode_scalar(unhex(j)); }
G1Element g1_of(const Group& g, const json& j) { return g.decode_g1(unhex(j)); }

json sig_json(const ibs::Signature& s) { return hex(ibs::encode(s)); }
ibs::Signature sig_of(const Group& g, const json& j) { return ibs::decode(g, unhex(j)); }

json poff_json(const PublicOfflineTag& p) {
  return {{"t1", hex(p.t1.encode())},
          {"sigma", sig_json(p.sigma)},
          {"lambda_pub", hex(p.pk.lambda_pub.encode())},
          {"lambda_sigma", sig_json(p.pk.sigma)}};
}

PublicOfflineTag poff_of(const Group& g, const json& j) {
  return PublicOfflineTag{g1_of(g, j.at("t1")), sig_of(g, j.at("sigma")),
                          VendorPublicKey{g1_of(g, j.at("lambda_pub")), sig_of(g, j.at("lambda_sigma"))}};
}

json index_list(const std::vector<std::size_t>& v) { return json(v); }

std::vector<std::size_t> index_list_of(const json& j) { return j.get<std::vector<std::size_t>>(); }

}  // namespace

Bytes encode_tag_file(const Group& group, const OnlineTag& tag) {
  ByteWriter w;
  w.raw(as_bytes(kTagMagic));
  w.u8(kFormatVersion);
  w.var16(tag.id);
  w.u32(static_cast<std::uint32_t>(tag.values.size()));
  w.u16(static_cast<std::uint16_t>(group.scalar_size()));
  wire::write_scalars(w, tag.values);
  return std::move(w).take();
}

std::size_t tag_file_header_size(std::size_t id_length) { return kTagMagic.size() + 1 + 2 + id_length + 4 + 2; }

OnlineTag decode_tag_file(const Group& group, BytesView in) {
  ByteReader r(in);
  if (to_string(r.raw(kTagMagic.size())) != kTagMagic) throw DecodeError("not a tag file");
  if (r.u8() != kFormatVersion) throw DecodeError("unsupported tag file version");
  OnlineTag tag;
  auto id = r.var16();
  tag.id.assign(id.begin(), id.end());
  const std::uint32_t l = r.u32();
  if (r.u16() != group.scalar_size()) throw DecodeError("tag file scalar width does not match the group");
  if (r.remaining() != static_cast<std::size_t>(l) * group.scalar_size()) throw DecodeError("tag file length mismatch");
  tag.values = wire::read_scalars(group, r, l);
  return tag;
}

Bytes encode_manifest(const FleetManifest& m) {
  ByteWriter w;
  w.raw(as_bytes(kManifestMagic));
  w.u8(kFormatVersion);
  w.u32(static_cast<std::uint32_t>(m.servers));
  w.u32(static_cast<std::uint32_t>(m.files.size()));
  for (const auto& f : m.files) {
    w.var16(as_bytes(f.name));
    w.var16(f.digest);
    w.u64(f.size);
    w.u16(static_cast<std::uint16_t>(f.replicas.size()));
    for (const auto& [j, id] : f.replicas) {
      w.u32(static_cast<std::uint32_t>(j));
      w.var16(id);
    }
  }
  w.u32(static_cast<std::uint32_t>(m.history.size()));
  for (const auto& h : m.history) {
    w.var16(as_bytes(h.kind));
    w.u8(static_cast<std::uint8_t>(h.method));
    w.u16(static_cast<std::uint16_t>(h.files.size()));
    for (auto f : h.files) w.u32(static_cast<std::uint32_t>(f));
    w.u16(static_cast<std::uint16_t>(h.servers.size()));
    for (auto j : h.servers) w.u32(static_cast<std::uint32_t>(j));
    w.u8(h.verdict ? 1 : 0);
    w.var16(as_bytes(h.cause));
  }
  return std::move(w).take();
}

FleetManifest decode_manifest(BytesView in) {
  ByteReader r(in);
  if (to_string(r.raw(kManifestMagic.size())) != kManifestMagic) throw DecodeError("not a manifest");
  if (r.u8() != kFormatVersion) throw DecodeError("unsupported manifest version");
  FleetManifest m;
  m.servers = r.u32();
  const std::uint32_t nfiles = r.u32();
  for (std::uint32_t i = 0; i < nfiles; ++i) {
    FileRecord f;
    f.name = to_string(r.var16());
    auto d = r.var16();
    f.digest.assign(d.begin(), d.end());
    f.size = r.u64();
    const std::uint16_t nrep = r.u16();
    for (std::uint16_t k = 0; k < nrep; ++k) {
      const std::uint32_t j = r.u32();
      auto id = r.var16();
      f.replicas[j] = Bytes(id.begin(), id.end());
    }
    m.files.push_back(std::move(f));
  }
  const std::uint32_t nhist = r.u32();
  for (std::uint32_t i = 0; i < nhist; ++i) {
    AuditSummary h;
    h.kind = to_string(r.var16());
    h.method = r.u8();
    const std::uint16_t nf = r.u16();
    for (std::uint16_t k = 0; k < nf; ++k) h.files.push_back(r.u32());
    const std::uint16_t ns = r.u16();
    for (std::uint16_t k = 0; k < ns; ++k) h.servers.push_back(r.u32());
    h.verdict = r.u8() != 0;
    h.cause = to_string(r.var16());
    m.history.push_back(std::move(h));
  }
  r.expect_done();
  return m;
}

std::string encode_public_params(const PublicParams& p) {
  json j = {{"security", p.group.security_bits()},
            {"blocks", p.blocks},
            {"system_id", hex(p.system_id)},
            {"pk", hex(p.pk.encode())},
            {"ibs_master_public", hex(p.ibs.master_public.encode())}};
  return j.dump(2);
}

PublicParams decode_public_params(std::string_view text) {
  json j = parse(text);
  return guarded([&] {
    Group g = generate_group(j.at("security").get<int>());
    PublicParams p{g, ibs::Params{g1_of(g, j.at("ibs_master_public"))}, unhex(j.at("system_id")),
                   g1_of(g, j.at("pk")), j.at("blocks").get<std::size_t>()};
    if (p.blocks == 0) throw DecodeError("block count must be positive");
    return p;
  });
}

std::string encode_master_secret(const MasterSecret& msk) {
  json j = {{"x", hex(msk.x.encode())},
            {"system_key", hex(msk.system_key.key.encode())},
            {"ibs_master", hex(msk.ibs_master.secret.encode())}};
  return j.dump(2);
}

MasterSecret decode_master_secret(const Group& g, std::string_view text) {
  json j = parse(text);
  return guarded([&] {
    return MasterSecret{ibs::SecretKey{g1_of(g, j.at("system_key"))}, scalar_of(g, j.at("x")),
                        ibs::MasterKey{scalar_of(g, j.at("ibs_master"))}};
  });
}

std::string encode_vendor_keys(const VendorState& s) {
  json j = {{"vendor_id", hex(s.vendor_id)},
            {"lambda", hex(s.sk.lambda.encode())},
            {"sk", hex(s.sk.sk.key.encode())},
            {"offline_public", poff_json(s.otag.pub)},
            {"t2", hex(s.otag.sec.t2.encode())},
            {"y", hex(s.otag.sec.y.encode())}};
  return j.dump(2);
}

void decode_vendor_keys(std::string_view text, VendorState& s) {
  json j = parse(text);
  guarded([&] {
    const Group& g = s.params.group;
    s.vendor_id = unhex(j.at("vendor_id"));
    s.sk = VendorSecretKey{scalar_of(g, j.at("lambda")), ibs::SecretKey{g1_of(g, j.at("sk"))}};
    s.otag.pub = poff_of(g, j.at("offline_public"));
    s.otag.sec = SecretOfflineTag{g1_of(g, j.at("t2")), scalar_of(g, j.at("y"))};
    s.pk = s.otag.pub.pk;
    return 0;
  });
}

VendorState decode_vendor_state(PublicParams params, std::string_view keys_json) {
  json j = parse(keys_json);
  return guarded([&] {
    const Group& g = params.group;
    VendorSecretKey sk{scalar_of(g, j.at("lambda")), ibs::SecretKey{g1_of(g, j.at("sk"))}};
    PublicOfflineTag poff = poff_of(g, j.at("offline_public"));
    SecretOfflineTag soff{g1_of(g, j.at("t2")), scalar_of(g, j.at("y"))};
    VendorPublicKey pk = poff.pk;
    Bytes id = unhex(j.at("vendor_id"));
    return VendorState{std::move(params), std::move(id), std::move(sk), std::move(pk),
                       OfflineTag{std::move(poff), std::move(soff)}, {}, {}};
  });
}

std::string encode_pool(const PreChallengePool& pool) {
  json arr = json::array();
  for (const auto& e : pool) {
    arr.push_back({{"k", hex(e.k.encode())}, {"v", hex(e.v.encode())}, {"w", hex(e.w.encode())}});
  }
  return json{{"pool", arr}}.dump(2);
}

PreChallengePool decode_pool(const Group& g, std::string_view text) {
  json j = parse(text);
  return guarded([&] {
    PreChallengePool pool;
    for (const auto& e : j.at("pool")) pool.push_back({scalar_of(g, e.at("k")), g1_of(g, e.at("v")), g1_of(g, e.at("w"))});
    return pool;
  });
}

std::string encode_report(const AuditReport& r, const FleetManifest* manifest, ReportOptions opt) {
  auto name_of = [&](std::size_t f) -> json {
    if (manifest != nullptr && f < manifest->files.size()) return manifest->files[f].name;
    return nullptr;
  };
  json j = {{"kind", r.kind},
            {"method", r.method},
            {"files", index_list(r.files)},
            {"servers", index_list(r.servers)},
            {"challenged", r.challenged},
            {"verdict", r.verdict},
            {"cause", r.cause},
            {"localization_pending", r.localization_pending},
            {"bytes", {{"sent", r.bytes_sent}, {"received", r.bytes_received}}}};
  if (manifest != nullptr) {
    json names = json::array();
    for (auto f : r.files) names.push_back(name_of(f));
    j["file_names"] = names;
  }
  if (opt.timings) {
    j["timings_ms"] = {{"challenge", r.challenge_ms}, {"response", r.response_ms}, {"verify", r.verify_ms}};
  }
  if (r.localized) {
    json sets = json::array();
    for (std::size_t p = 0; p < r.corrupted.size(); ++p) {
      json names = json::array();
      for (auto f : r.corrupted[p]) names.push_back(name_of(f));
      sets.push_back({{"server", r.servers.at(p)}, {"files", index_list(r.corrupted[p])}, {"file_names", names}});
    }
    j["corrupted"] = sets;
    j["unresponsive"] = index_list(r.unresponsive);
  }
  if (r.kind == "repair") {
    json reps = json::array();
    for (const auto& e : r.repairs) {
      json entry = {{"dest", e.dest}, {"file", e.file}, {"sources", index_list(e.sources)},
                    {"done", e.done}, {"note", e.note}};
      entry["source"] = e.used_source ? json(*e.used_source) : json(nullptr);
      reps.push_back(entry);
    }
    j["repairs"] = reps;
    json unrec = json::array();
    for (const auto& [s, f] : r.unrecoverable) unrec.push_back({{"server", s}, {"file", f}});
    j["unrecoverable"] = unrec;
  }
  if (opt.secrets) {
    json chals = json::array();
    for (const auto& c : r.challenges) chals.push_back(hex(wire::encode_challenge_body(c)));
    json ks = json::array();
    for (const auto& k : r.secrets) ks.push_back(hex(k.encode()));
    j["challenge_bodies"] = chals;
    j["secrets"] = ks;
    if (r.prf_key) j["prf_key"] = hex(r.prf_key->encode());
  }
  return opt.pretty ? j.dump(2) : j.dump();
}

AuditReport decode_report(const Group& g, std::size_t blocks, std::string_view text) {
  json j = parse(text);
  return guarded([&] {
    AuditReport r;
    r.kind = j.at("kind").get<std::string>();
    r.method = j.at("method").get<int>();
    r.files = index_list_of(j.at("files"));
    r.servers = index_list_of(j.at("servers"));
    r.challenged = j.at("challenged").get<std::size_t>();
    r.verdict = j.at("verdict").get<bool>();
    r.cause = j.at("cause").get<std::string>();
    r.localization_pending = j.value("localization_pending", false);
    r.bytes_sent = j.at("bytes").at("sent").get<std::uint64_t>();
    r.bytes_received = j.at("bytes").at("received").get<std::uint64_t>();
    if (j.contains("timings_ms")) {
      r.challenge_ms = j["timings_ms"].at("challenge").get<double>();
      r.response_ms = j["timings_ms"].at("response").get<double>();
      r.verify_ms = j["timings_ms"].at("verify").get<double>();
    }
    if (j.contains("corrupted")) {
      r.localized = true;
      for (const auto& s : j["corrupted"]) r.corrupted.push_back(index_list_of(s.at("files")));
      r.unresponsive = index_list_of(j.at("unresponsive"));
    }
    if (j.contains("repairs")) {
      for (const auto& e : j["repairs"]) {
        RepairEntry re{e.at("dest").get<std::size_t>(), e.at("file").get<std::size_t>(),
                       index_list_of(e.at("sources")), e.at("done").get<bool>(), std::nullopt,
                       e.at("note").get<std::string>()};
        if (!e.at("source").is_null()) re.used_source = e["source"].get<std::size_t>();
        r.repairs.push_back(std::move(re));
      }
      for (const auto& u : j.at("unrecoverable")) {
        r.unrecoverable.emplace_back(u.at("server").get<std::size_t>(), u.at("file").get<std::size_t>());
      }
    }
    if (j.contains("challenge_bodies")) {
      for (const auto& c : j["challenge_bodies"]) r.challenges.push_back(wire::decode_challenge_body(g, blocks, unhex(c)));
      for (const auto& k : j.at("secrets")) r.secrets.push_back(scalar_of(g, k));
      if (j.contains("prf_key")) r.prf_key = scalar_of(g, j["prf_key"]);
    }
    return r;
  });
}

void write_file(const fs::path& path, BytesView data, bool secret) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    if (secret) ::chmod(tmp.c_str(), S_IRUSR | S_IWUSR);
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error("short write to " + tmp.string());
  }
  if (secret) fs::permissions(tmp, fs::perms::owner_read | fs::perms::owner_write, fs::perm_options::replace);
  fs::rename(tmp, path);
}

void write_text(const fs::path& path, std::string_view text, bool secret) { write_file(path, as_bytes(text), secret); }

Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return to_bytes(ss.str());
}

std::string read_text(const fs::path& path) { return to_string(read_file(path)); }

void save_fleet(const fs::path& dir, const Fleet& fleet) {
  fs::create_directories(dir);
  json reach = json::array();
  for (std::size_t j = 0; j < fleet.size(); ++j) {
    reach.push_back(fleet.reachable(j));
    const EdgeServer& srv = fleet.server(j);
    fs::path sdir = dir / ("server-" + std::to_string(j));
    fs::create_directories(sdir);
    for (const auto& entry : fs::directory_iterator(sdir)) {
      auto ext = entry.path().extension();
      if (ext == ".blk" || ext == ".tag") fs::remove(entry.path());
    }
    const Group& g = srv.context().params.group;
    for (const auto& id : srv.replica_ids()) {
      auto rep = srv.fetch(id);
      if (!rep) continue;
      const std::string stem = to_string(id);
      write_file(sdir / (stem + ".blk"), encode_block_file(g, rep->blocks));
      write_file(sdir / (stem + ".tag"), encode_tag_file(g, rep->tag));
    }
  }
  write_text(dir / "fleet.json", json{{"servers", fleet.size()}, {"reachable", reach}}.dump(2));
}

void init_fleet_dir(const fs::path& dir, std::size_t servers) {
  if (servers == 0) throw std::invalid_argument("a fleet needs at least one server");
  fs::create_directories(dir);
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory() && entry.path().filename().string().rfind("server-", 0) == 0) fs::remove_all(entry.path());
  }
  for (std::size_t j = 0; j < servers; ++j) fs::create_directories(dir / ("server-" + std::to_string(j)));
  write_text(dir / "fleet.json", json{{"servers", servers}, {"reachable", std::vector<bool>(servers, true)}}.dump(2));
}

std::unique_ptr<Fleet> load_fleet(const fs::path& dir, std::shared_ptr<const ServerContext> ctx) {
  json meta = parse(read_text(dir / "fleet.json"));
  const std::size_t n = guarded([&] { return meta.at("servers").get<std::size_t>(); });
  auto fleet = std::make_unique<Fleet>(ctx, n);
  const Group& g = ctx->params.group;
  for (std::size_t j = 0; j < n; ++j) {
    if (meta.contains("reachable")) fleet->set_reachable(j, meta["reachable"].at(j).get<bool>());
    fs::path sdir = dir / ("server-" + std::to_string(j));
    if (!fs::exists(sdir)) continue;
    std::vector<fs::path> blks;
    for (const auto& entry : fs::directory_iterator(sdir)) {
      if (entry.path().extension() == ".blk") blks.push_back(entry.path());
    }
    std::sort(blks.begin(), blks.end());
    for (const auto& blk : blks) {
      fs::path tagp = blk;
      tagp.replace_extension(".tag");
      auto blocks = decode_block_file(g, read_file(blk));
      OnlineTag tag = decode_tag_file(g, read_file(tagp));
      if (to_string(tag.id) != blk.stem().string()) throw DecodeError("tag file id does not match " + blk.string());
      Bytes id = tag.id;
      fleet->server(j).store_repair(id, std::move(blocks), std::move(tag));
    }
  }
  return fleet;
}

}  // namespace o2di::storage
