#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "commands.hpp"
#include "o2di/errors.hpp"
#include "o2di/op_counter.hpp"
#include "o2di/storage.hpp"
#include "o2di/wire.hpp"

namespace o2di::cli {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Row {
  std::size_t blocks = 0, servers = 0, challenged = 0;
  double online_tag_ms = 0;
  OpCounts online_ops;
  double offline_challenge_ms = 0;  // per pool entry
  double challgen2_ms = 0;
  OpCounts challgen2_ops;
  double response_ms = 0;  // all servers, sequential
  double verify_ms = 0;
  OpCounts verify_ops;
  std::size_t challenge_bytes = 0, proof_bytes = 0, tag_bytes = 0;
  std::size_t expected_challenge = 0, expected_proof = 0, expected_tag = 0;
  bool verdict = false;

  bool sizes_ok() const {
    return challenge_bytes == expected_challenge && proof_bytes == expected_proof && tag_bytes == expected_tag;
  }
  bool ops_ok() const {
    return online_ops.exponentiations() == 0 && online_ops.pairing == 0 && online_ops.scalar_mul == 2 * blocks &&
           online_ops.hash_to_scalar == blocks && challgen2_ops.exponentiations() == 0 && challgen2_ops.pairing == 0;
  }
};

const char* kCsvHeader =
    "blocks,servers,challenged,online_tag_ms,online_scalar_mul,online_hash_to_scalar,online_exp,online_pairing,"
    "offline_challenge_ms,challgen2_ms,challgen2_g1_mul,challgen2_scalar_add,challgen2_exp,response_ms,verify_ms,"
    "verify_pairing,challenge_bytes,proof_bytes,tag_bytes,verdict,sizes_ok,ops_ok";

std::string csv(const Row& r) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(3) << r.blocks << ',' << r.servers << ',' << r.challenged << ','
    << r.online_tag_ms << ',' << r.online_ops.scalar_mul << ',' << r.online_ops.hash_to_scalar << ','
    << r.online_ops.exponentiations() << ',' << r.online_ops.pairing << ',' << r.offline_challenge_ms << ','
    << r.challgen2_ms << ',' << r.challgen2_ops.g1_mul << ',' << r.challgen2_ops.scalar_add << ','
    << r.challgen2_ops.exponentiations() << ',' << r.response_ms << ',' << r.verify_ms << ',' << r.verify_ops.pairing
    << ',' << r.challenge_bytes << ',' << r.proof_bytes << ',' << r.tag_bytes << ',' << r.verdict << ','
    << r.sizes_ok() << ',' << r.ops_ok();
  return o.str();
}

nlohmann::json as_json(const Row& r) {
  return {{"kind", "bench"},
          {"blocks", r.blocks},
          {"servers", r.servers},
          {"challenged", r.challenged},
          {"online_tag", {{"ms", r.online_tag_ms},
                          {"scalar_mul", r.online_ops.scalar_mul},
                          {"hash_to_scalar", r.online_ops.hash_to_scalar},
                          {"exp", r.online_ops.exponentiations()},
                          {"pairing", r.online_ops.pairing}}},
          {"offline_challenge_ms", r.offline_challenge_ms},
          {"challgen2", {{"ms", r.challgen2_ms},
                         {"g1_mul", r.challgen2_ops.g1_mul},
                         {"scalar_add", r.challgen2_ops.scalar_add},
                         {"exp", r.challgen2_ops.exponentiations()}}},
          {"response_ms", r.response_ms},
          {"verify", {{"ms", r.verify_ms}, {"pairing", r.verify_ops.pairing}}},
          {"bytes", {{"challenge", r.challenge_bytes}, {"proof", r.proof_bytes}, {"tag", r.tag_bytes}}},
          {"verdict", r.verdict},
          {"sizes_ok", r.sizes_ok()},
          {"ops_ok", r.ops_ok()}};
}

}  // namespace

int cmd_bench(const Settings& s, const BenchOptions& o) {
  for (const auto* v : {&o.challenged, &o.servers, &o.blocks}) {
    if (v->empty()) throw UsageError("bench sweeps need at least one value per parameter");
    for (auto x : *v) {
      if (x == 0) throw UsageError("bench parameters must be positive");
    }
  }
  Rng rng = s.rng("bench");
  Group group = generate_group(o.security);
  std::vector<Row> rows;

  for (std::size_t l : o.blocks) {
    if (l < 2) throw UsageError("--blocks values must be at least 2");
    auto [params, msk] = setup(group, l, rng);
    auto [sk, pk] = extract(params, msk, as_bytes("bench-vendor"), rng);
    OfflineTag otag = offline_tag(params, pk, sk, rng);
    auto ctx = std::make_shared<const ServerContext>(ServerContext{params, otag.pub, to_bytes("bench-vendor")});

    auto t0 = Clock::now();
    PreChallengePool pool = offline_challenge(params, s.pool_size, pk, rng);
    const double per_entry = ms_since(t0) / static_cast<double>(pool.size());

    std::size_t max_n = *std::max_element(o.servers.begin(), o.servers.end());
    std::vector<std::unique_ptr<EdgeServer>> servers;
    std::vector<Bytes> ids;
    double tag_ms = 0;
    OpCounts tag_ops;
    std::size_t tag_bytes = 0;
    for (std::size_t j = 0; j < max_n; ++j) {
      std::vector<Scalar> blocks;
      blocks.reserve(l);
      for (std::size_t i = 0; i < l; ++i) blocks.push_back(group.random_scalar(rng));
      ids.push_back(to_bytes("bench-replica-" + std::to_string(j)));
      t0 = Clock::now();
      OpCounter counter;
      OnlineTag tag = online_tag(params, ids.back(), otag, blocks, sk);
      if (j == 0) {
        tag_ms = ms_since(t0);
        tag_ops = counter.counts();
        tag_bytes = storage::encode_tag_file(group, tag).size() - storage::tag_file_header_size(ids.back().size());
      }
      servers.push_back(std::make_unique<EdgeServer>(j, ctx));
      servers.back()->cache(ids.back(), std::move(blocks), std::move(tag));
    }

    for (std::size_t n : o.servers) {
      for (std::size_t c : o.challenged) {
        Row row;
        row.blocks = l;
        row.servers = n;
        row.challenged = std::min(c, l);
        row.online_tag_ms = tag_ms;
        row.online_ops = tag_ops;
        row.offline_challenge_ms = per_entry;
        row.tag_bytes = tag_bytes;
        row.expected_tag = l * group.scalar_size();
        row.expected_proof = 2 * group.g2_size();
        row.expected_challenge = 2 * group.g1_size() + row.challenged * (8 + group.scalar_size());

        t0 = Clock::now();
        std::pair<AggregateChallenge, AggregateSecrets> agg;
        {
          OpCounter counter;
          agg = challgen2(params, pool, n, rng, c, std::min(s.subset_size, pool.size()));
          row.challgen2_ops = counter.counts();
        }
        row.challgen2_ms = ms_since(t0);

        std::vector<Proof> proofs;
        t0 = Clock::now();
        for (std::size_t j = 0; j < n; ++j) {
          Challenge chal = agg.first.for_server(j);
          wire::Frame req = wire::make_single_challenge(wire::MessageType::challenge3, {ids[j], chal});
          if (j == 0) row.challenge_bytes = wire::encode_challenge_body(chal).size();
          wire::Frame reply = wire::decode_frame(serve_frame(*servers[j], wire::encode_frame(req)));
          if (reply.type != wire::MessageType::proof) throw Error("bench server returned no proof");
          if (j == 0) row.proof_bytes = reply.payload.size();
          proofs.push_back(wire::decode_proof(group, reply.payload));
        }
        row.response_ms = ms_since(t0);

        std::vector<Bytes> used(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n));
        t0 = Clock::now();
        {
          OpCounter counter;
          row.verdict = check_proof3(params, otag, agg.first, agg.second, proofs, used, to_bytes("bench-vendor"));
          row.verify_ops = counter.counts();
        }
        row.verify_ms = ms_since(t0);
        rows.push_back(row);
        if (s.json) std::cout << as_json(row).dump() << "\n";
      }
    }
  }

  bool ok = true;
  for (const auto& r : rows) ok = ok && r.sizes_ok() && r.ops_ok() && r.verdict;

  if (!o.csv.empty()) {
    std::ofstream out(o.csv);
    out << kCsvHeader << "\n";
    for (const auto& r : rows) out << csv(r) << "\n";
    if (!out) throw Error("could not write " + o.csv);
  }
  if (!s.json) {
    if (o.csv.empty()) {
      std::cout << kCsvHeader << "\n";
      for (const auto& r : rows) std::cout << csv(r) << "\n";
      std::cout << "\n";
    }
    std::cout << std::left << std::setw(7) << "l" << std::setw(4) << "N" << std::setw(5) << "|I|" << std::right
              << std::setw(11) << "tag ms" << std::setw(11) << "chal ms" << std::setw(11) << "resp ms" << std::setw(11)
              << "verify ms" << std::setw(10) << "chal B" << std::setw(8) << "proof B" << std::setw(9) << "tag B"
              << "  ok\n";
    for (const auto& r : rows) {
      std::cout << std::left << std::setw(7) << r.blocks << std::setw(4) << r.servers << std::setw(5) << r.challenged
                << std::right << std::fixed << std::setprecision(2) << std::setw(11) << r.online_tag_ms
                << std::setw(11) << r.challgen2_ms << std::setw(11) << r.response_ms << std::setw(11) << r.verify_ms
                << std::setw(10) << r.challenge_bytes << std::setw(8) << r.proof_bytes << std::setw(9) << r.tag_bytes
                << "  " << (r.sizes_ok() && r.ops_ok() && r.verdict ? "yes" : "NO") << "\n";
    }
    std::cout << rows.size() << " configurations; size and operation-count checks "
              << (ok ? "passed" : "FAILED") << "\n";
  }
  return ok ? 0 : kExitFailure;
}

}  // namespace o2di::cli
