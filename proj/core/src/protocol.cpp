#include "o2di/protocol.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <set>
#include <stdexcept>

#include "o2di/errors.hpp"
#include "o2di/wire.hpp"

namespace o2di {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

const char* cause_for(wire::ErrorCode code) {
  switch (code) {
    case wire::ErrorCode::unknown_replica: return "unknown-replica";
    case wire::ErrorCode::inconsistent_challenge: return "inconsistent-challenge";
    case wire::ErrorCode::malformed: return "malformed-request";
    case wire::ErrorCode::duplicate_replica: return "duplicate-replica";
    case wire::ErrorCode::capacity: return "capacity";
    case wire::ErrorCode::internal: return "server-error";
  }
  return "server-error";
}

struct Reply {
  std::optional<wire::Frame> frame;
  std::string cause;
  std::uint64_t sent = 0;
  std::uint64_t received = 0;
};

Reply send(Fleet& fleet, std::size_t j, const wire::Frame& request) {
  Bytes req = wire::encode_frame(request);
  Reply r;
  r.sent = req.size();
  try {
    Bytes resp = fleet.exchange(j, req);
    r.received = resp.size();
    r.frame = wire::decode_frame(resp);
  } catch (const TransportError&) {
    r.cause = "unreachable";
    return r;
  } catch (const DecodeError&) {
    r.cause = "malformed-reply";
    return r;
  }
  if (r.frame->type == wire::MessageType::error) {
    try {
      r.cause = cause_for(wire::parse_error(r.frame->payload).code);
    } catch (const DecodeError&) {
      r.cause = "malformed-reply";
    }
    r.frame.reset();
  }
  return r;
}

std::vector<Reply> fan_out(Fleet& fleet, std::span<const std::size_t> servers, std::vector<wire::Frame> requests) {
  std::vector<std::future<Reply>> pending;
  pending.reserve(servers.size());
  for (std::size_t p = 0; p < servers.size(); ++p) {
    pending.push_back(std::async(std::launch::async, [&fleet, j = servers[p], req = std::move(requests[p])] {
      return send(fleet, j, req);
    }));
  }
  std::vector<Reply> out;
  out.reserve(servers.size());
  for (auto& f : pending) out.push_back(f.get());
  return out;
}

std::optional<Proof> expect_proof(const Group& group, Reply& r) {
  if (!r.frame) return std::nullopt;
  if (r.frame->type != wire::MessageType::proof) {
    r.cause = "malformed-reply";
    return std::nullopt;
  }
  try {
    return wire::decode_proof(group, r.frame->payload);
  } catch (const DecodeError&) {
    r.cause = "malformed-reply";
    return std::nullopt;
  }
}

void require_distinct(std::span<const std::size_t> v, const char* what) {
  if (v.empty()) throw std::invalid_argument(std::string("no ") + what + " selected");
  std::set<std::size_t> seen(v.begin(), v.end());
  if (seen.size() != v.size()) throw std::invalid_argument(std::string("duplicate ") + what + " selected");
}

}  // namespace

Bytes serve_frame(EdgeServer& server, BytesView request) {
  using namespace wire;
  const ServerContext& ctx = server.context();
  const Group& group = ctx.params.group;
  const std::size_t l = ctx.params.blocks;
  Frame reply;
  try {
    Frame req = decode_frame(request);
    switch (req.type) {
      case MessageType::challenge1:
      case MessageType::challenge3: {
        auto m = parse_single_challenge(group, l, req.payload);
        reply = make_proof(server.respond_method1(m.replica_id, m.challenge));
        break;
      }
      case MessageType::challenge2:
      case MessageType::challenge4: {
        auto m = parse_multi_challenge(group, l, req.payload);
        reply = make_proof(server.respond_method2(m.replica_ids, m.challenge, m.prf_key));
        break;
      }
      case MessageType::trapdoor: {
        auto m = parse_trapdoor(group, l, req.payload);
        CorruptSet set;
        for (auto p : server.run_find_corrupted(m.replica_ids, m.challenge, m.trap)) {
          set.positions.push_back(static_cast<std::uint32_t>(p));
        }
        reply = make_corrupt_set(set);
        break;
      }
      case MessageType::cache: {
        auto m = parse_upload(group, req.payload);
        server.cache(m.replica_id, std::move(m.blocks), OnlineTag{m.replica_id, std::move(m.tag)});
        reply = make_ack();
        break;
      }
      case MessageType::repair: {
        auto m = parse_upload(group, req.payload);
        server.store_repair(m.replica_id, std::move(m.blocks), OnlineTag{m.replica_id, std::move(m.tag)});
        reply = make_ack();
        break;
      }
      case MessageType::fetch: {
        Bytes id = parse_fetch(req.payload);
        auto r = server.fetch(id);
        if (!r) throw UnknownReplica(to_string(id));
        reply = make_replica(r->blocks);
        break;
      }
      default:
        reply = make_error({ErrorCode::malformed, std::string("unexpected ") + message_type_name(req.type)});
    }
  } catch (const UnknownReplica& e) {
    reply = make_error({ErrorCode::unknown_replica, e.what()});
  } catch (const InconsistentChallenge& e) {
    reply = make_error({ErrorCode::inconsistent_challenge, e.what()});
  } catch (const DecodeError& e) {
    reply = make_error({ErrorCode::malformed, e.what()});
  } catch (const DuplicateReplica& e) {
    reply = make_error({ErrorCode::duplicate_replica, e.what()});
  } catch (const CapacityError& e) {
    reply = make_error({ErrorCode::capacity, e.what()});
  } catch (const std::exception& e) {
    reply = make_error({ErrorCode::internal, e.what()});
  }
  return encode_frame(reply);
}

Fleet::Fleet(std::shared_ptr<const ServerContext> ctx, std::size_t servers)
    : ctx_(std::move(ctx)), reachable_(servers, 1) {
  if (servers == 0) throw std::invalid_argument("a fleet needs at least one server");
  servers_.reserve(servers);
  for (std::size_t j = 0; j < servers; ++j) servers_.push_back(std::make_unique<EdgeServer>(j, ctx_));
}

EdgeServer& Fleet::server(std::size_t j) {
  if (j >= servers_.size()) throw std::out_of_range("no such server: " + std::to_string(j));
  return *servers_[j];
}

const EdgeServer& Fleet::server(std::size_t j) const {
  if (j >= servers_.size()) throw std::out_of_range("no such server: " + std::to_string(j));
  return *servers_[j];
}

void Fleet::set_reachable(std::size_t j, bool reachable) {
  server(j);
  reachable_[j] = reachable ? 1 : 0;
}

bool Fleet::reachable(std::size_t j) const {
  server(j);
  return reachable_[j] != 0;
}

Bytes Fleet::exchange(std::size_t j, BytesView request) {
  if (!reachable(j)) throw TransportError("server " + std::to_string(j) + " is unreachable");
  return serve_frame(*servers_[j], request);
}

std::optional<std::size_t> FleetManifest::find(std::string_view name) const {
  for (std::size_t f = 0; f < files.size(); ++f) {
    if (files[f].name == name) return f;
  }
  return std::nullopt;
}

Vendor::Vendor(VendorState state, ProtocolConfig config, Rng rng)
    : state_(std::move(state)), config_(config), rng_(std::move(rng)) {}

VendorState Vendor::bootstrap(const PublicParams& params, const MasterSecret& msk, BytesView vendor_id,
                              std::size_t servers, Rng& rng) {
  auto [sk, pk] = extract(params, msk, vendor_id, rng);
  OfflineTag otag = offline_tag(params, pk, sk, rng);
  VendorState st{params, Bytes(vendor_id.begin(), vendor_id.end()), sk, pk, otag, {}, {}};
  st.manifest.servers = servers;
  return st;
}

ServerContext Vendor::server_context() const {
  return ServerContext{state_.params, state_.otag.pub, state_.vendor_id};
}

const Bytes& Vendor::replica_id(std::size_t file, std::size_t server) const {
  if (file >= state_.manifest.files.size()) throw std::out_of_range("no such file: " + std::to_string(file));
  const auto& reps = state_.manifest.files[file].replicas;
  auto it = reps.find(server);
  if (it == reps.end()) {
    throw Error("server " + std::to_string(server) + " holds no replica of " + state_.manifest.files[file].name);
  }
  return it->second;
}

void Vendor::record(AuditReport& report) {
  report.localization_pending = report.kind == "audit" && !report.verdict && !report.localized;
  state_.manifest.history.push_back(
      AuditSummary{report.kind, report.method, report.files, report.servers, report.verdict, report.cause});
}

std::size_t Vendor::add_file(Fleet& fleet, std::string name, BytesView data, std::span<const std::size_t> servers) {
  require_distinct(servers, "servers");
  for (auto j : servers) fleet.server(j);
  if (state_.manifest.find(name)) throw Error("file already registered: " + name);
  const PublicParams& params = state_.params;
  DataFile df = encode_file(params.group, data, params.blocks);
  auto reps = make_replicas(df, servers.size(), rng_);
  FileRecord rec{std::move(name), df.digest, df.size, {}};
  for (std::size_t p = 0; p < servers.size(); ++p) {
    const Bytes& id = reps[p].id;
    OnlineTag tag = online_tag(params, id, state_.otag, df.blocks, state_.sk);
    Reply r = send(fleet, servers[p], wire::make_upload(wire::MessageType::cache, {id, df.blocks, tag.values}));
    if (!r.frame || r.frame->type != wire::MessageType::ack) {
      throw TransportError("caching on server " + std::to_string(servers[p]) + " failed: " + r.cause);
    }
    rec.replicas[servers[p]] = id;
  }
  state_.manifest.files.push_back(std::move(rec));
  state_.manifest.servers = std::max(state_.manifest.servers, fleet.size());
  return state_.manifest.files.size() - 1;
}

void Vendor::refill_pool(std::size_t count) {
  auto fresh = offline_challenge(state_.params, count, state_.pk, rng_);
  state_.pool.insert(state_.pool.end(), std::make_move_iterator(fresh.begin()), std::make_move_iterator(fresh.end()));
}

std::pair<AggregateChallenge, AggregateSecrets> Vendor::draw_aggregate(std::size_t servers) {
  const std::size_t size = config_.subset_size;
  if (config_.one_time_pool) {
    if (state_.pool.size() < servers * size) throw PoolExhausted();
    auto res = challgen2(state_.params, state_.pool, servers, rng_, config_.challenged_blocks, size, true);
    std::vector<std::size_t> used;
    for (const auto& s : res.second.subsets) used.insert(used.end(), s.begin(), s.end());
    std::sort(used.rbegin(), used.rend());
    for (auto i : used) state_.pool.erase(state_.pool.begin() + static_cast<std::ptrdiff_t>(i));
    return res;
  }
  if (state_.pool.size() < size) refill_pool(std::max(config_.pool_size, size) - state_.pool.size());
  return challgen2(state_.params, state_.pool, servers, rng_, config_.challenged_blocks, size, false);
}

AuditReport Vendor::audit_method1(Fleet& fleet, std::size_t file, std::size_t server,
                                  std::optional<std::size_t> challenged) {
  const PublicParams& params = state_.params;
  const Bytes& id = replica_id(file, server);
  AuditReport rep;
  rep.method = 1;
  rep.files = {file};
  rep.servers = {server};

  auto t0 = Clock::now();
  auto [chal, k] = challgen1(params, state_.pk, rng_, challenged.value_or(config_.challenged_blocks));
  rep.challenge_ms = ms_since(t0);
  rep.challenged = chal.coefficients.size();

  t0 = Clock::now();
  Reply r = send(fleet, server, wire::make_single_challenge(wire::MessageType::challenge1, {id, chal}));
  rep.response_ms = ms_since(t0);
  rep.bytes_sent = r.sent;
  rep.bytes_received = r.received;

  if (auto proof = expect_proof(params.group, r)) {
    t0 = Clock::now();
    rep.verdict = check_proof1(params, state_.otag, chal, k, *proof, id, state_.vendor_id);
    rep.verify_ms = ms_since(t0);
    if (!rep.verdict) rep.cause = "proof-rejected";
  } else {
    rep.cause = r.cause;
  }
  rep.challenges = {std::move(chal)};
  rep.secrets = {std::move(k)};
  record(rep);
  return rep;
}

AuditReport Vendor::audit_method2(Fleet& fleet, std::span<const std::size_t> files, std::size_t server) {
  require_distinct(files, "files");
  if (files.size() < 2) throw std::invalid_argument("method 2 needs at least two files; use method 1");
  const PublicParams& params = state_.params;
  std::vector<Bytes> ids;
  for (auto f : files) ids.push_back(replica_id(f, server));
  AuditReport rep;
  rep.method = 2;
  rep.files.assign(files.begin(), files.end());
  rep.servers = {server};

  auto t0 = Clock::now();
  Scalar prf_key = params.group.random_scalar(rng_);
  auto [chal, k] = challgen1(params, state_.pk, rng_, config_.challenged_blocks);
  rep.challenge_ms = ms_since(t0);
  rep.challenged = chal.coefficients.size();

  t0 = Clock::now();
  Reply r = send(fleet, server, wire::make_multi_challenge(wire::MessageType::challenge2, {prf_key, ids, chal}));
  rep.response_ms = ms_since(t0);
  rep.bytes_sent = r.sent;
  rep.bytes_received = r.received;

  if (auto proof = expect_proof(params.group, r)) {
    t0 = Clock::now();
    rep.verdict = check_proof2(params, state_.otag, chal, k, prf_key, *proof, ids, state_.vendor_id);
    rep.verify_ms = ms_since(t0);
    if (!rep.verdict) rep.cause = "proof-rejected";
  } else {
    rep.cause = r.cause;
  }
  rep.challenges = {std::move(chal)};
  rep.secrets = {std::move(k)};
  rep.prf_key = std::move(prf_key);
  record(rep);
  return rep;
}

AuditReport Vendor::audit_method3(Fleet& fleet, std::size_t file, std::span<const std::size_t> servers) {
  require_distinct(servers, "servers");
  if (servers.size() < 2) throw std::invalid_argument("method 3 needs at least two servers; use method 1");
  const PublicParams& params = state_.params;
  std::vector<Bytes> ids;
  for (auto j : servers) ids.push_back(replica_id(file, j));
  AuditReport rep;
  rep.method = 3;
  rep.files = {file};
  rep.servers.assign(servers.begin(), servers.end());

  auto t0 = Clock::now();
  auto [agg, secrets] = draw_aggregate(servers.size());
  rep.challenge_ms = ms_since(t0);
  rep.challenged = agg.coefficients.size();

  std::vector<wire::Frame> requests;
  for (std::size_t p = 0; p < servers.size(); ++p) {
    rep.challenges.push_back(agg.for_server(p));
    requests.push_back(wire::make_single_challenge(wire::MessageType::challenge3, {ids[p], rep.challenges.back()}));
  }
  t0 = Clock::now();
  auto replies = fan_out(fleet, servers, std::move(requests));
  rep.response_ms = ms_since(t0);

  std::vector<Proof> proofs;
  for (auto& r : replies) {
    rep.bytes_sent += r.sent;
    rep.bytes_received += r.received;
    if (auto proof = expect_proof(params.group, r)) {
      proofs.push_back(std::move(*proof));
    } else if (rep.cause.empty()) {
      rep.cause = r.cause;
    }
  }
  if (rep.cause.empty()) {
    t0 = Clock::now();
    rep.verdict = check_proof3(params, state_.otag, agg, secrets, proofs, ids, state_.vendor_id);
    rep.verify_ms = ms_since(t0);
    if (!rep.verdict) rep.cause = "proof-rejected";
  }
  rep.secrets = std::move(secrets.k);
  record(rep);
  return rep;
}

AuditReport Vendor::audit_method4(Fleet& fleet, std::span<const std::size_t> files,
                                  std::span<const std::size_t> servers) {
  require_distinct(files, "files");
  require_distinct(servers, "servers");
  if (files.size() < 2 || servers.size() < 2) {
    throw std::invalid_argument("method 4 needs at least two files and two servers");
  }
  const PublicParams& params = state_.params;
  std::vector<std::vector<Bytes>> ids(servers.size());
  for (std::size_t p = 0; p < servers.size(); ++p) {
    for (auto f : files) ids[p].push_back(replica_id(f, servers[p]));
  }
  AuditReport rep;
  rep.method = 4;
  rep.files.assign(files.begin(), files.end());
  rep.servers.assign(servers.begin(), servers.end());

  auto t0 = Clock::now();
  Scalar prf_key = params.group.random_scalar(rng_);
  auto [agg, secrets] = draw_aggregate(servers.size());
  rep.challenge_ms = ms_since(t0);
  rep.challenged = agg.coefficients.size();

  std::vector<wire::Frame> requests;
  for (std::size_t p = 0; p < servers.size(); ++p) {
    rep.challenges.push_back(agg.for_server(p));
    requests.push_back(
        wire::make_multi_challenge(wire::MessageType::challenge4, {prf_key, ids[p], rep.challenges.back()}));
  }
  t0 = Clock::now();
  auto replies = fan_out(fleet, servers, std::move(requests));
  rep.response_ms = ms_since(t0);

  std::vector<Proof> proofs;
  for (auto& r : replies) {
    rep.bytes_sent += r.sent;
    rep.bytes_received += r.received;
    if (auto proof = expect_proof(params.group, r)) {
      proofs.push_back(std::move(*proof));
    } else if (rep.cause.empty()) {
      rep.cause = r.cause;
    }
  }
  if (rep.cause.empty()) {
    t0 = Clock::now();
    rep.verdict = check_proof4(params, state_.otag, agg, secrets, prf_key, proofs, ids, state_.vendor_id);
    rep.verify_ms = ms_since(t0);
    if (!rep.verdict) rep.cause = "proof-rejected";
  }
  rep.secrets = std::move(secrets.k);
  rep.prf_key = std::move(prf_key);
  record(rep);
  return rep;
}

AuditReport Vendor::audit(Fleet& fleet, int method, std::span<const std::size_t> files,
                          std::span<const std::size_t> servers) {
  switch (method) {
    case 1:
      if (files.size() != 1 || servers.size() != 1) throw std::invalid_argument("method 1 takes one file and one server");
      return audit_method1(fleet, files[0], servers[0]);
    case 2:
      if (servers.size() != 1) throw std::invalid_argument("method 2 takes one server");
      return audit_method2(fleet, files, servers[0]);
    case 3:
      if (files.size() != 1) throw std::invalid_argument("method 3 takes one file");
      return audit_method3(fleet, files[0], servers);
    case 4:
      return audit_method4(fleet, files, servers);
    default:
      throw std::invalid_argument("audit method must be 1, 2, 3, or 4");
  }
}

void Vendor::localize(Fleet& fleet, AuditReport& report) const {
  if (report.kind != "audit" || report.challenges.size() != report.servers.size() ||
      report.secrets.size() != report.servers.size()) {
    throw Error("report does not carry the challenge material needed for localization");
  }
  const PublicParams& params = state_.params;
  std::vector<std::vector<Bytes>> ids(report.servers.size());
  std::vector<wire::Frame> requests;
  for (std::size_t p = 0; p < report.servers.size(); ++p) {
    for (auto f : report.files) ids[p].push_back(replica_id(f, report.servers[p]));
    Trapdoor trap = loc_trap(params, ids[p], report.challenges[p], report.secrets[p], state_.otag.sec);
    requests.push_back(wire::make_trapdoor({ids[p], std::move(trap), report.challenges[p]}));
  }
  auto replies = fan_out(fleet, report.servers, std::move(requests));

  report.corrupted.assign(report.servers.size(), {});
  report.unresponsive.clear();
  for (std::size_t p = 0; p < replies.size(); ++p) {
    Reply& r = replies[p];
    report.bytes_sent += r.sent;
    report.bytes_received += r.received;
    std::optional<wire::CorruptSet> set;
    if (r.frame && r.frame->type == wire::MessageType::corrupt_set) {
      try {
        set = wire::parse_corrupt_set(r.frame->payload);
      } catch (const DecodeError&) {
      }
    }
    bool valid = set.has_value();
    if (valid) {
      for (auto pos : set->positions) valid = valid && pos < report.files.size();
    }
    if (!valid) {
      // No usable answer: every file in scope is suspect on this server.
      report.unresponsive.push_back(report.servers[p]);
      report.corrupted[p] = report.files;
      continue;
    }
    for (auto pos : set->positions) report.corrupted[p].push_back(report.files[pos]);
  }
  report.localized = true;
  report.localization_pending = false;
}

RepairPlan plan_repair(const FleetManifest& manifest, const AuditReport& localized) {
  if (!localized.localized) throw Error("audit report has not been localized");
  std::map<std::size_t, std::set<std::size_t>> bad;  // file -> servers
  for (std::size_t p = 0; p < localized.servers.size(); ++p) {
    for (auto f : localized.corrupted[p]) bad[f].insert(localized.servers[p]);
  }
  RepairPlan plan;
  for (const auto& [f, dests] : bad) {
    if (f >= manifest.files.size()) throw std::out_of_range("no such file: " + std::to_string(f));
    std::vector<std::size_t> sources;
    for (const auto& [j, _] : manifest.files[f].replicas) {
      if (dests.count(j) == 0) sources.push_back(j);
    }
    for (auto dest : dests) {
      if (sources.empty()) {
        plan.unrecoverable.emplace_back(dest, f);
      } else {
        plan.entries.push_back(RepairEntry{dest, f, sources, false, std::nullopt, {}});
      }
    }
  }
  return plan;
}

AuditReport Vendor::execute_repair(Fleet& fleet, const RepairPlan& plan) {
  const PublicParams& params = state_.params;
  AuditReport rep;
  rep.kind = "repair";
  rep.unrecoverable = plan.unrecoverable;
  auto t0 = Clock::now();
  for (RepairEntry e : plan.entries) {
    const FileRecord& rec = state_.manifest.files.at(e.file);
    const Bytes& id_dest = replica_id(e.file, e.dest);
    for (auto src : e.sources) {
      if (src == e.dest) continue;
      AuditReport check = audit_method1(fleet, e.file, src, params.blocks);
      rep.bytes_sent += check.bytes_sent;
      rep.bytes_received += check.bytes_received;
      if (!check.verdict) {
        e.note += "source " + std::to_string(src) + " failed audit; ";
        continue;
      }
      Reply r = send(fleet, src, wire::make_fetch(replica_id(e.file, src)));
      rep.bytes_sent += r.sent;
      rep.bytes_received += r.received;
      std::vector<Scalar> blocks;
      try {
        if (!r.frame || r.frame->type != wire::MessageType::replica) throw DecodeError(r.cause);
        blocks = wire::parse_replica(params.group, r.frame->payload);
        DataFile again = encode_file(params.group, decode_file(params.group, blocks), params.blocks);
        if (again.digest != rec.digest || again.blocks != blocks) throw DecodeError("digest mismatch");
      } catch (const Error&) {
        e.note += "source " + std::to_string(src) + " returned unusable content; ";
        continue;
      }
      OnlineTag fresh = online_tag(params, id_dest, state_.otag, blocks, state_.sk);
      Reply a = send(fleet, e.dest,
                     wire::make_upload(wire::MessageType::repair, {id_dest, std::move(blocks), fresh.values}));
      rep.bytes_sent += a.sent;
      rep.bytes_received += a.received;
      if (!a.frame || a.frame->type != wire::MessageType::ack) {
        e.note += "destination rejected repair: " + a.cause + "; ";
        break;
      }
      AuditReport after = audit_method1(fleet, e.file, e.dest, params.blocks);
      rep.bytes_sent += after.bytes_sent;
      rep.bytes_received += after.bytes_received;
      e.used_source = src;
      e.done = after.verdict;
      if (!e.done) e.note += "post-repair audit failed; ";
      break;
    }
    if (!e.done && e.note.empty()) e.note = "no healthy source";
    rep.files.push_back(e.file);
    rep.servers.push_back(e.dest);
    rep.repairs.push_back(std::move(e));
  }
  rep.response_ms = ms_since(t0);
  rep.verdict = rep.unrecoverable.empty() &&
                std::all_of(rep.repairs.begin(), rep.repairs.end(), [](const RepairEntry& e) { return e.done; });
  if (!rep.verdict) rep.cause = "repair-incomplete";
  record(rep);
  return rep;
}

}  // namespace o2di
