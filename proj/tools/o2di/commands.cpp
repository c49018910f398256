#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "o2di/blockcodec.hpp"
#include "o2di/errors.hpp"
#include "o2di/storage.hpp"

namespace o2di::cli {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::optional<std::size_t> as_index(const std::string& s) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(std::stoull(s));
}

std::size_t resolve_file(const FleetManifest& m, const std::string& token) {
  if (auto f = m.find(token)) return *f;
  if (auto i = as_index(token); i && *i < m.files.size()) return *i;
  throw UsageError("unknown file: " + token);
}

std::vector<std::size_t> resolve_files(const FleetManifest& m, const std::string& spec) {
  if (m.files.empty()) throw UsageError("no files cached yet; run `o2di tag` first");
  std::vector<std::size_t> out;
  if (spec == "all") {
    for (std::size_t f = 0; f < m.files.size(); ++f) out.push_back(f);
    return out;
  }
  for (const auto& t : split(spec)) out.push_back(resolve_file(m, t));
  return out;
}

std::vector<std::size_t> resolve_servers(const Fleet& fleet, const std::string& spec) {
  std::vector<std::size_t> out;
  if (spec == "all") {
    for (std::size_t j = 0; j < fleet.size(); ++j) out.push_back(j);
    return out;
  }
  for (const auto& t : split(spec)) {
    auto j = as_index(t);
    if (!j || *j >= fleet.size()) throw UsageError("unknown server: " + t);
    out.push_back(*j);
  }
  return out;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

std::string names(const FleetManifest& m, const std::vector<std::size_t>& files) {
  std::string out;
  for (std::size_t i = 0; i < files.size(); ++i) out += (i ? ", " : "") + m.files.at(files[i]).name;
  return out;
}

void print_json(const Settings& s, const AuditReport& r, const FleetManifest& m) {
  storage::ReportOptions opt;
  opt.timings = !s.seed.has_value();
  opt.pretty = false;
  std::cout << storage::encode_report(r, &m, opt) << "\n";
}

void print_localization(const AuditReport& r, const FleetManifest& m) {
  for (std::size_t p = 0; p < r.servers.size(); ++p) {
    const bool down = std::count(r.unresponsive.begin(), r.unresponsive.end(), r.servers[p]) > 0;
    std::cout << "  server " << r.servers[p] << ": ";
    if (down) {
      std::cout << "unresponsive, all files suspect\n";
    } else if (r.corrupted[p].empty()) {
      std::cout << "clean\n";
    } else {
      std::cout << "corrupted " << names(m, r.corrupted[p]) << "\n";
    }
  }
}

Vendor open_vendor(const Settings& s, const Workspace& ws, std::string_view purpose) {
  return Vendor(ws.load_vendor(), s.protocol(), s.rng(purpose));
}

}  // namespace

int cmd_keygen(const Settings& s, const KeygenOptions& o) {
  Workspace ws(s);
  if (!o.force && (fs::exists(ws.params_path()) || fs::exists(ws.keys_path()) || fs::exists(ws.master_path()))) {
    throw UsageError("key files already exist in " + s.vendor_dir.string() + "; pass --force to replace them");
  }
  if (o.test_mode && !s.seed) throw UsageError("--test-mode needs --seed");
  Rng rng = o.test_mode ? s.rng("keygen") : Rng::system();
  Group group = generate_group(o.security);
  auto [params, msk] = setup(group, o.blocks, rng);
  VendorState st = Vendor::bootstrap(params, msk, as_bytes(o.vendor_id), 0, rng);
  st.pool = offline_challenge(st.params, s.pool_size, st.pk, rng);
  ws.save_keys(st, msk);
  fs::remove(ws.log_path());
  ws.clear_last_audit();
  const bool ok = precheck(st.params, st.otag.pub, st.vendor_id);
  if (s.json) {
    std::cout << nlohmann::json{{"kind", "keygen"}, {"blocks", o.blocks}, {"pool", st.pool.size()}, {"precheck", ok}}.dump()
              << "\n";
  } else {
    std::cout << "wrote keys to " << s.vendor_dir.string() << " (l = " << o.blocks << ", pool " << st.pool.size()
              << ")\nprecheck: " << (ok ? 1 : 0) << "\n";
  }
  return ok ? 0 : kExitFailure;
}

int cmd_fleet_init(const Settings& s, const FleetInitOptions& o) {
  if (o.servers == 0) throw UsageError("--servers must be at least 1");
  Workspace ws(s);
  if (ws.has_fleet() && !o.force) {
    throw UsageError("a fleet already exists in " + s.fleet_dir.string() + "; pass --force to replace it");
  }
  storage::init_fleet_dir(s.fleet_dir, o.servers);
  if (ws.has_keys()) {
    VendorState st = ws.load_vendor();
    st.manifest = FleetManifest{};
    st.manifest.servers = o.servers;
    ws.save_vendor(st);
    ws.clear_last_audit();
  }
  if (s.json) {
    std::cout << nlohmann::json{{"kind", "fleet-init"}, {"servers", o.servers}}.dump() << "\n";
  } else {
    std::cout << "initialized " << o.servers << " edge servers in " << s.fleet_dir.string() << "\n";
  }
  return 0;
}

int cmd_tag(const Settings& s, const TagOptions& o) {
  Workspace ws(s);
  Vendor vendor = open_vendor(s, ws, "tag");
  auto fleet = ws.load_fleet(vendor.state());
  const std::size_t n = o.replicas.value_or(fleet->size());
  if (n == 0) throw UsageError("--replicas must be at least 1");
  if (n > fleet->size()) {
    throw UsageError("--replicas " + std::to_string(n) + " exceeds the fleet size " + std::to_string(fleet->size()));
  }
  if (!o.name.empty() && o.paths.size() != 1) throw UsageError("--name needs exactly one input file");
  std::vector<std::size_t> servers(n);
  for (std::size_t j = 0; j < n; ++j) servers[j] = j;

  const PublicParams& params = vendor.state().params;
  const std::size_t cap = file_capacity(params.group, params.blocks);
  for (const auto& path : o.paths) {
    Bytes data = storage::read_file(path);
    const std::string base = o.name.empty() ? fs::path(path).filename().string() : o.name;
    const std::size_t parts = std::max<std::size_t>(1, (data.size() + cap - 1) / cap);
    for (std::size_t part = 0; part < parts; ++part) {
      const std::size_t off = part * cap;
      const std::size_t len = std::min(cap, data.size() - std::min(off, data.size()));
      const std::string name = parts == 1 ? base : base + ".part" + std::to_string(part + 1) + "of" + std::to_string(parts);
      const std::size_t f = vendor.add_file(*fleet, name, BytesView(data).subspan(off, len), servers);
      if (s.json) {
        std::cout << nlohmann::json{{"kind", "tag"}, {"file", f}, {"name", name}, {"bytes", len}, {"servers", servers}}.dump()
                  << "\n";
      } else {
        std::cout << "cached " << name << " (" << len << " bytes) on servers " << join(servers) << "\n";
      }
    }
  }
  ws.save_fleet(*fleet);
  ws.save_vendor(vendor.state());
  if (o.remove_source) {
    for (const auto& path : o.paths) fs::remove(path);
  }
  return 0;
}

int cmd_audit(const Settings& s, const AuditOptions& o) {
  Workspace ws(s);
  Settings local = s;
  if (o.challenged) local.challenged = *o.challenged;
  Vendor vendor = open_vendor(local, ws, "audit");
  auto fleet = ws.load_fleet(vendor.state());
  const FleetManifest& m = vendor.state().manifest;
  std::vector<std::size_t> files = resolve_files(m, o.files);
  std::vector<std::size_t> servers = resolve_servers(*fleet, o.servers);
  if ((o.method == 1 || o.method == 2) && servers.size() != 1) {
    throw UsageError("method " + std::to_string(o.method) + " audits one server; pass --servers <j>");
  }
  if ((o.method == 1 || o.method == 3) && files.size() != 1) {
    throw UsageError("method " + std::to_string(o.method) + " audits one file; pass --files <name>");
  }
  AuditReport r = vendor.audit(*fleet, o.method, files, servers);
  ws.save_vendor(vendor.state());
  ws.save_last_audit(r, vendor.state().manifest);
  ws.append_log(r, vendor.state().manifest);
  if (s.json) {
    print_json(s, r, vendor.state().manifest);
  } else {
    std::cout << "method " << r.method << ": files " << names(m, r.files) << " on servers " << join(r.servers)
              << ", |I| = " << r.challenged << "\nverdict: " << (r.verdict ? 1 : 0);
    if (!r.verdict) std::cout << " (" << r.cause << ")\nrun `o2di localize` to find the corrupted replicas";
    std::cout << "\n";
  }
  return r.verdict ? 0 : kExitRejected;
}

int cmd_corrupt(const Settings& s, const CorruptOptions& o) {
  Workspace ws(s);
  VendorState st = ws.load_vendor();
  auto fleet = ws.load_fleet(st);
  const std::size_t f = resolve_file(st.manifest, o.file);
  if (o.server >= fleet->size()) throw UsageError("unknown server: " + std::to_string(o.server));
  const auto& reps = st.manifest.files[f].replicas;
  auto it = reps.find(o.server);
  if (it == reps.end()) throw UsageError("server " + std::to_string(o.server) + " holds no replica of " + o.file);
  FaultSpec spec{it->second, parse_fault_kind(o.kind), o.block, 0};
  if (s.seed) {
    spec.seed = *s.seed;
  } else {
    Rng rng = Rng::system();
    spec.seed = rng.below(~std::uint64_t{0});
  }
  const bool mutated = fleet->server(o.server).inject_fault(spec);
  ws.save_fleet(*fleet);
  const std::string& name = st.manifest.files[f].name;
  if (s.json) {
    std::cout << nlohmann::json{{"kind", "corrupt"}, {"server", o.server}, {"file", f},       {"fault", o.kind},
                                {"block", o.block},  {"mutated", mutated}}
                     .dump()
              << "\n";
  } else {
    std::cout << o.kind << " on " << name << " at server " << o.server;
    if (spec.kind != FaultKind::drop_replica) std::cout << ", block " << o.block;
    std::cout << (mutated ? "" : " (no change)") << "\n";
  }
  return 0;
}

int cmd_localize(const Settings& s) {
  Workspace ws(s);
  Vendor vendor = open_vendor(s, ws, "localize");
  auto last = ws.last_audit(vendor.state().params);
  if (!last || last->kind != "audit" || last->verdict) {
    throw UsageError("no failed audit to localize; run `o2di audit` first");
  }
  auto fleet = ws.load_fleet(vendor.state());
  vendor.localize(*fleet, *last);
  ws.save_last_audit(*last, vendor.state().manifest);
  if (s.json) {
    print_json(s, *last, vendor.state().manifest);
  } else {
    std::cout << "localized method " << last->method << " audit:\n";
    print_localization(*last, vendor.state().manifest);
  }
  return 0;
}

int cmd_repair(const Settings& s) {
  Workspace ws(s);
  Vendor vendor = open_vendor(s, ws, "repair");
  auto last = ws.last_audit(vendor.state().params);
  if (!last || last->kind != "audit" || last->verdict) {
    throw UsageError("no failed audit to repair; run `o2di audit` first");
  }
  auto fleet = ws.load_fleet(vendor.state());
  if (!last->localized) vendor.localize(*fleet, *last);
  RepairPlan plan = plan_repair(vendor.state().manifest, *last);
  AuditReport r = vendor.execute_repair(*fleet, plan);
  ws.save_fleet(*fleet);
  ws.save_vendor(vendor.state());
  ws.append_log(r, vendor.state().manifest);
  ws.clear_last_audit();
  const FleetManifest& m = vendor.state().manifest;
  if (s.json) {
    print_json(s, r, m);
  } else {
    if (r.repairs.empty() && r.unrecoverable.empty()) std::cout << "nothing to repair\n";
    for (const auto& e : r.repairs) {
      std::cout << "  " << m.files.at(e.file).name << " on server " << e.dest << ": ";
      if (e.done) {
        std::cout << "repaired from server " << *e.used_source << "\n";
      } else {
        std::cout << "not repaired (" << e.note << ")\n";
      }
    }
    for (const auto& [j, f] : r.unrecoverable) {
      std::cout << "  " << m.files.at(f).name << " on server " << j << ": unrecoverable, no healthy replica\n";
    }
    std::cout << "verdict: " << (r.verdict ? 1 : 0) << "\n";
  }
  return r.verdict ? 0 : kExitRejected;
}

}  // namespace o2di::cli
