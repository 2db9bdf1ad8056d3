#pragma once

#include "shardsim/netsim.hpp"

namespace shardsim {

enum class Protocol : uint8_t { Sbac = 0, Atomix = 1, Byzcuit = 2 };

const char* to_string(Protocol p);
std::optional<Protocol> protocol_from_string(const std::string& s);

// Shard actors own their object store; a shard's actor id equals its ShardId.
class ShardActorBase : public Actor {
  public:
    ShardActorBase(ShardId shard, ShardConfig cfg) : shard_(shard), cfg_(std::move(cfg)) {}

    ShardId shard() const { return shard_; }
    const std::map<ObjectId, ObjectRecord>& objects() const { return objects_; }

    void put_object(ObjectRecord rec) {
        rec.shard = shard_;
        objects_[rec.id] = rec;
    }

    const ObjectRecord* find_object(const ObjectId& id) const {
        auto it = objects_.find(id);
        return it == objects_.end() ? nullptr : &it->second;
    }

  protected:
    std::vector<ObjectId> local_inputs(const Transaction& txn) const {
        std::vector<ObjectId> out;
        for (const auto& in : txn.inputs)
            if (shard_of(in, cfg_.num_shards) == shard_) out.push_back(in);
        return out;
    }

    std::vector<OutputSpec> local_outputs(const Transaction& txn) const {
        std::vector<OutputSpec> out;
        for (const auto& spec : txn.outputs)
            if (spec.shard == shard_) out.push_back(spec);
        return out;
    }

    QuorumCert cert_for(TxnId txn, SeqNo tx_seq, MsgKind kind) const {
        uint64_t digest = txn ^ (tx_seq << 8) ^ (static_cast<uint64_t>(kind) << 56) ^ shard_;
        return make_shard_cert(shard_, cfg_, digest);
    }

    ShardId shard_;
    ShardConfig cfg_;
    std::map<ObjectId, ObjectRecord> objects_;
};

}  // namespace shardsim
