#include "shardsim/types.hpp"

#include <algorithm>
#include <set>

namespace shardsim {

ShardId shard_of(const ObjectId& obj, uint32_t num_shards) {
    if (num_shards == 0) throw std::invalid_argument("shard_of: num_shards must be >= 1");
    if (obj.dummy) {
        return static_cast<ShardId>((obj.raw >> kDummyShardShift) % num_shards);
    }
    return static_cast<ShardId>(obj.raw % num_shards);
}

const char* to_string(ObjectStateKind s) {
    switch (s) {
        case ObjectStateKind::Active: return "active";
        case ObjectStateKind::Locked: return "locked";
        case ObjectStateKind::Inactive: return "inactive";
    }
    return "?";
}

SeqNo tx_sequence_number(const std::vector<SeqNo>& input_seqs) {
    if (input_seqs.empty()) throw MalformedTransaction("transaction has no input sequence numbers");
    return *std::max_element(input_seqs.begin(), input_seqs.end());
}

bool validate_cert(const QuorumCert& cert, const ShardConfig& cfg) {
    std::set<uint32_t> distinct(cert.nodes.begin(), cert.nodes.end());
    return distinct.size() >= static_cast<size_t>(cfg.max_faulty) + 1;
}

QuorumCert make_shard_cert(ShardId shard, const ShardConfig& cfg, uint64_t payload_digest) {
    QuorumCert cert;
    cert.shard = shard;
    cert.payload_digest = payload_digest;
    for (uint32_t n = 0; n <= cfg.max_faulty; ++n) cert.nodes.push_back(n);
    return cert;
}

QuorumCert forge_cert(ShardId shard, const ShardConfig& cfg, uint64_t payload_digest) {
    QuorumCert cert;
    cert.shard = shard;
    cert.payload_digest = payload_digest;
    for (uint32_t n = 0; n < cfg.max_faulty; ++n) cert.nodes.push_back(n);
    return cert;
}

std::vector<ShardId> input_shards(const Transaction& txn, uint32_t num_shards) {
    std::set<ShardId> shards;
    for (const auto& in : txn.inputs) shards.insert(shard_of(in, num_shards));
    return {shards.begin(), shards.end()};
}

std::vector<ShardId> concerned_shards(const Transaction& txn, uint32_t num_shards) {
    std::set<ShardId> shards;
    for (const auto& in : txn.inputs) shards.insert(shard_of(in, num_shards));
    for (const auto& out : txn.outputs) shards.insert(out.shard);
    return {shards.begin(), shards.end()};
}

std::vector<ShardId> output_only_shards(const Transaction& txn, uint32_t num_shards) {
    std::set<ShardId> ins;
    for (const auto& in : txn.inputs) ins.insert(shard_of(in, num_shards));
    std::set<ShardId> result;
    for (const auto& out : txn.outputs) {
        if (!ins.contains(out.shard)) result.insert(out.shard);
    }
    return {result.begin(), result.end()};
}

bool transaction_well_formed(const Transaction& txn, uint32_t num_shards, std::string* why) {
    auto fail = [&](const char* reason) {
        if (why) *why = reason;
        return false;
    };
    if (txn.inputs.empty()) return fail("inputs empty");
    std::set<ObjectId> in_seen;
    for (const auto& in : txn.inputs) {
        if (!in_seen.insert(in).second) return fail("duplicate input");
    }
    std::set<ObjectId> out_seen;
    for (const auto& out : txn.outputs) {
        if (!out_seen.insert(out.id).second) return fail("duplicate output");
        if (in_seen.contains(out.id)) return fail("output reuses an input id");
        if (out.shard >= num_shards) return fail("output shard out of range");
        if (!out.id.dummy && shard_of(out.id, num_shards) != out.shard)
            return fail("output id does not map to its declared shard");
    }
    return true;
}

}  // namespace shardsim
