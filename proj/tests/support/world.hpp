#pragma once

// A vendor plus a simulated fleet with files already cached, for protocol-level tests.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "o2di/blockcodec.hpp"
#include "o2di/protocol.hpp"
#include "support/oracle.hpp"

namespace o2di::test {

struct World {
  std::unique_ptr<Vendor> vendor;
  std::unique_ptr<Fleet> fleet;
  std::vector<Bytes> contents;
  // Pristine copies, so a test can undo faults without re-tagging.
  std::map<std::pair<std::size_t, std::size_t>, StoredReplica> pristine;

  const Bytes& id(std::size_t file, std::size_t server) const {
    return vendor->state().manifest.files.at(file).replicas.at(server);
  }

  bool fault(std::size_t file, std::size_t server, FaultKind kind, std::uint64_t block, std::uint64_t seed = 0) {
    return fleet->server(server).inject_fault(FaultSpec{id(file, server), kind, block, seed});
  }

  void restore() {
    for (auto& [key, rep] : pristine) {
      fleet->server(key.second).store_repair(id(key.first, key.second), rep.blocks, rep.tag);
    }
  }

  std::vector<std::size_t> all_files() const {
    std::vector<std::size_t> v(vendor->state().manifest.files.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
    return v;
  }
  std::vector<std::size_t> all_servers() const {
    std::vector<std::size_t> v(fleet->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
    return v;
  }
};

inline const PublicParams& shared_params(std::size_t blocks, const MasterSecret** msk = nullptr) {
  static std::map<std::size_t, std::pair<PublicParams, MasterSecret>> cache;
  auto it = cache.find(blocks);
  if (it == cache.end()) {
    Rng rng = Rng::seeded(0x5eed0000 + blocks);
    it = cache.emplace(blocks, setup(generate_group(80), blocks, rng)).first;
  }
  if (msk) *msk = &it->second.second;
  return it->second.first;
}

// `files` files of random content replicated on every one of `servers` servers.
inline World make_world(std::size_t blocks, std::size_t files, std::size_t servers, std::uint64_t seed,
                        ProtocolConfig config = {}) {
  const MasterSecret* msk = nullptr;
  const PublicParams& params = shared_params(blocks, &msk);
  Rng rng = Rng::seeded(seed);
  VendorState st = Vendor::bootstrap(params, *msk, as_bytes("vendor@example"), servers, rng);
  World w;
  w.vendor = std::make_unique<Vendor>(std::move(st), config, Rng::seeded(seed + 1));
  w.fleet = std::make_unique<Fleet>(std::make_shared<const ServerContext>(w.vendor->server_context()), servers);
  const std::size_t cap = file_capacity(params.group, blocks);
  std::vector<std::size_t> on = w.all_servers();
  for (std::size_t f = 0; f < files; ++f) {
    std::size_t len = cap == 0 ? 0 : static_cast<std::size_t>(rng.below(cap + 1));
    w.contents.push_back(rng.bytes(len));
    w.vendor->add_file(*w.fleet, "file-" + std::to_string(f), w.contents.back(), on);
  }
  for (std::size_t f = 0; f < files; ++f) {
    for (std::size_t j = 0; j < servers; ++j) w.pristine[{f, j}] = *w.fleet->server(j).fetch(w.id(f, j));
  }
  return w;
}

}  // namespace o2di::test
