#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace shardsim {

using ShardId = uint32_t;
using ActorId = uint32_t;
using TxnId = uint64_t;
using Tick = uint64_t;
using SeqNo = uint64_t;

// Dummy object ids carry their minting shard in the top 16 bits so that
// shard_of can route them without a lookup.
struct ObjectId {
    uint64_t raw = 0;
    bool dummy = false;

    auto operator<=>(const ObjectId&) const = default;
};

constexpr unsigned kDummyShardShift = 48;

inline ObjectId make_object_id(uint64_t raw) { return ObjectId{raw, false}; }

inline ObjectId make_dummy_id(ShardId minted_by, uint64_t counter) {
    return ObjectId{(static_cast<uint64_t>(minted_by) << kDummyShardShift) | counter, true};
}

ShardId shard_of(const ObjectId& obj, uint32_t num_shards);

enum class ObjectStateKind : uint8_t { Active = 0, Locked = 1, Inactive = 2 };

const char* to_string(ObjectStateKind s);

struct ObjectRecord {
    ObjectId id;
    ObjectStateKind state = ObjectStateKind::Active;
    SeqNo seq = 0;
    ShardId shard = 0;
    // Lock tag, meaningful only while state == Locked.
    TxnId locked_by = 0;
    SeqNo locked_tx_seq = 0;

    bool active() const { return state == ObjectStateKind::Active; }
    bool operator==(const ObjectRecord&) const = default;
};

struct OutputSpec {
    ObjectId id;
    ShardId shard = 0;

    auto operator<=>(const OutputSpec&) const = default;
};

struct Transaction {
    TxnId id = 0;
    std::vector<ObjectId> inputs;     // byzcuit: attached dummies appended at the end
    std::vector<OutputSpec> outputs;  // byzcuit: replacement dummy specs appended

    bool operator==(const Transaction&) const = default;
};

struct MalformedTransaction : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// max over the input (and dummy) sequence numbers; the session identifier s_T.
SeqNo tx_sequence_number(const std::vector<SeqNo>& input_seqs);

struct ShardConfig {
    uint32_t num_shards = 3;
    uint32_t nodes_per_shard = 4;
    uint32_t max_faulty = 1;  // f; certs need f+1 attestations
    SeqNo overflow_threshold = 1ull << 16;
    SeqNo clone_margin = 1;
    uint32_t dummy_pool_size = 8;
};

// Node attestations stand in for signatures; the adversary can gather at
// most max_faulty of them, one short of the f+1 a shard statement needs.
struct QuorumCert {
    ShardId shard = 0;
    std::vector<uint32_t> nodes;  // attesting node indices, sorted
    uint64_t payload_digest = 0;

    bool operator==(const QuorumCert&) const = default;
};

bool validate_cert(const QuorumCert& cert, const ShardConfig& cfg);

QuorumCert make_shard_cert(ShardId shard, const ShardConfig& cfg, uint64_t payload_digest);
QuorumCert forge_cert(ShardId shard, const ShardConfig& cfg, uint64_t payload_digest);

// Phase-1 evidence embedded in decisions: the vote, the session it was cast
// for and the voter's local object sequence numbers at vote time.
struct VoteCert {
    ShardId shard = 0;
    bool pre_accept = false;
    SeqNo tx_seq = 0;
    std::vector<std::pair<ObjectId, SeqNo>> input_seqs;
    QuorumCert cert;

    bool operator==(const VoteCert&) const = default;
};

// Shards touched by a transaction's inputs (input shards).
std::vector<ShardId> input_shards(const Transaction& txn, uint32_t num_shards);
// Shards touched by inputs or outputs (every shard that must see the tx).
std::vector<ShardId> concerned_shards(const Transaction& txn, uint32_t num_shards);
// Output shards that manage no input of the transaction.
std::vector<ShardId> output_only_shards(const Transaction& txn, uint32_t num_shards);

bool transaction_well_formed(const Transaction& txn, uint32_t num_shards, std::string* why = nullptr);

}  // namespace shardsim
