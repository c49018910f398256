#include "o2di/fleet.hpp"

#include <algorithm>

#include "o2di/errors.hpp"

namespace o2di {

const char* fault_kind_name(FaultKind kind) {
  switch (kind) {
    case FaultKind::flip_block: return "flip-block";
    case FaultKind::zero_block: return "zero-block";
    case FaultKind::drop_replica: return "drop-replica";
    case FaultKind::tamper_tag: return "tamper-tag";
  }
  return "unknown";
}

FaultKind parse_fault_kind(std::string_view name) {
  if (name == "flip-block") return FaultKind::flip_block;
  if (name == "zero-block") return FaultKind::zero_block;
  if (name == "drop-replica") return FaultKind::drop_replica;
  if (name == "tamper-tag") return FaultKind::tamper_tag;
  throw Error("unknown fault kind: " + std::string(name));
}

EdgeServer::EdgeServer(std::size_t index, std::shared_ptr<const ServerContext> ctx)
    : index_(index), ctx_(std::move(ctx)) {}

void EdgeServer::check_shape(const std::vector<Scalar>& blocks, const OnlineTag& tag) const {
  const std::size_t l = ctx_->params.blocks;
  if (blocks.size() != l || tag.values.size() != l) {
    throw CapacityError("replica and tag must hold exactly " + std::to_string(l) + " blocks");
  }
}

void EdgeServer::cache(BytesView id, std::vector<Scalar> blocks, OnlineTag tag) {
  check_shape(blocks, tag);
  std::lock_guard lock(mu_);
  Bytes key(id.begin(), id.end());
  if (store_.count(key) != 0) throw DuplicateReplica(to_string(id));
  store_.emplace(std::move(key), StoredReplica{std::move(blocks), std::move(tag)});
}

bool EdgeServer::contains(BytesView id) const {
  std::lock_guard lock(mu_);
  return store_.count(Bytes(id.begin(), id.end())) != 0;
}

std::optional<StoredReplica> EdgeServer::fetch(BytesView id) const {
  std::lock_guard lock(mu_);
  auto it = store_.find(Bytes(id.begin(), id.end()));
  if (it == store_.end()) return std::nullopt;
  return it->second;
}

std::vector<Bytes> EdgeServer::replica_ids() const {
  std::lock_guard lock(mu_);
  std::vector<Bytes> ids;
  ids.reserve(store_.size());
  for (const auto& [id, _] : store_) ids.push_back(id);
  return ids;
}

std::size_t EdgeServer::size() const {
  std::lock_guard lock(mu_);
  return store_.size();
}

const StoredReplica& EdgeServer::lookup(BytesView id) const {
  auto it = store_.find(Bytes(id.begin(), id.end()));
  if (it == store_.end()) throw UnknownReplica(to_string(id));
  return it->second;
}

Proof EdgeServer::respond_method1(BytesView id, const Challenge& chal) const {
  std::lock_guard lock(mu_);
  const StoredReplica& r = lookup(id);
  return gen_proof(ctx_->params, chal, r.tag, ctx_->poff.pk, r.blocks, ctx_->vendor_id);
}

Proof EdgeServer::respond_method2(std::span<const Bytes> ids, const Challenge& chal, const Scalar& prf_key) const {
  std::lock_guard lock(mu_);
  std::vector<OnlineTag> tags;
  std::vector<std::vector<Scalar>> files;
  tags.reserve(ids.size());
  files.reserve(ids.size());
  for (const auto& id : ids) {
    const StoredReplica& r = lookup(id);
    tags.push_back(r.tag);
    files.push_back(r.blocks);
  }
  AggregateData agg = agg_data(ctx_->params, prf_key, tags, files);
  return gen_proof(ctx_->params, chal, agg.tag, ctx_->poff.pk, agg.blocks, ctx_->vendor_id);
}

bool EdgeServer::inject_fault(const FaultSpec& spec) {
  std::lock_guard lock(mu_);
  auto it = store_.find(spec.target);
  if (it == store_.end()) throw UnknownReplica(to_string(spec.target));
  const Group& group = ctx_->params.group;
  const std::size_t l = ctx_->params.blocks;
  if (spec.kind != FaultKind::drop_replica && (spec.block == 0 || spec.block > l)) {
    throw Error("fault block number out of range");
  }
  Rng rng = Rng::seeded(spec.seed);
  bool mutated = true;
  switch (spec.kind) {
    case FaultKind::flip_block: {
      // Flip one bit below the chunk width so the block stays a valid scalar.
      const std::size_t width_bits = (group.scalar_size() - 1) * 8;
      mpz_class v = it->second.blocks[spec.block - 1].value();
      mpz_combit(v.get_mpz_t(), static_cast<mp_bitcnt_t>(rng.below(width_bits)));
      it->second.blocks[spec.block - 1] = group.scalar(v);
      break;
    }
    case FaultKind::zero_block:
      mutated = !it->second.blocks[spec.block - 1].is_zero();
      it->second.blocks[spec.block - 1] = group.zero();
      break;
    case FaultKind::tamper_tag:
      it->second.tag.values[spec.block - 1] += group.random_nonzero_scalar(rng);
      break;
    case FaultKind::drop_replica:
      store_.erase(it);
      break;
  }
  faults_.push_back(FaultRecord{spec, mutated});
  return mutated;
}

std::vector<std::size_t> EdgeServer::run_find_corrupted(std::span<const Bytes> ids, const Challenge& chal,
                                                        const Trapdoor& trap) const {
  if (trap.size() != ids.size()) throw Error("trapdoor does not cover every requested replica");
  std::lock_guard lock(mu_);
  std::vector<std::size_t> present;
  std::vector<OnlineTag> tags;
  std::vector<std::vector<Scalar>> files;
  Trapdoor present_trap;
  std::vector<std::size_t> corrupted;
  for (std::size_t s = 0; s < ids.size(); ++s) {
    auto it = store_.find(ids[s]);
    if (it == store_.end()) {
      corrupted.push_back(s);
      continue;
    }
    present.push_back(s);
    tags.push_back(it->second.tag);
    files.push_back(it->second.blocks);
    present_trap.push_back(trap[s]);
  }
  if (!present.empty()) {
    auto bad = find_corrupted(ctx_->params, ctx_->poff, tags, files, chal, present_trap, ctx_->vendor_id);
    for (auto b : bad) corrupted.push_back(present[b]);
  }
  std::sort(corrupted.begin(), corrupted.end());
  return corrupted;
}

void EdgeServer::store_repair(BytesView id, std::vector<Scalar> blocks, OnlineTag tag) {
  check_shape(blocks, tag);
  std::lock_guard lock(mu_);
  store_[Bytes(id.begin(), id.end())] = StoredReplica{std::move(blocks), std::move(tag)};
}

void repair_pull(EdgeServer& dest, const EdgeServer& src, BytesView id_src, BytesView id_dest, OnlineTag fresh_tag) {
  if (&dest == &src || dest.index() == src.index()) throw Error("a server cannot repair from itself");
  auto replica = src.fetch(id_src);
  if (!replica) throw UnknownReplica(to_string(id_src));
  dest.store_repair(id_dest, std::move(replica->blocks), std::move(fresh_tag));
}

}  // namespace o2di
