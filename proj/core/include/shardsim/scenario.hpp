#pragma once

#include <memory>

#include "shardsim/atomix.hpp"
#include "shardsim/byzcuit.hpp"
#include "shardsim/oracle.hpp"
#include "shardsim/sbac.hpp"

namespace shardsim {

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScenarioObject {
    std::string name;
    ShardId shard = 0;
    ObjectStateKind state = ObjectStateKind::Active;
    SeqNo seq = 0;
};

struct ScenarioOutput {
    std::string name;
    ShardId shard = 0;
};

struct ScenarioTx {
    std::string name;
    std::vector<std::string> inputs;
    std::vector<ScenarioOutput> outputs;
    Tick submit_tick = 0;
    uint32_t client = 0;
    std::optional<SeqNo> tx_seq_override;
};

struct ScenarioRecordFilter {
    bool all = true;
    std::vector<std::string> kinds;
    std::vector<std::string> origins;
    std::vector<std::string> targets;
};

struct ScenarioInjection {
    size_t recorded_index = 0;
    std::string target;
    Tick at = 0;
};

struct ScenarioDelay {
    std::optional<std::string> origin;
    std::optional<std::string> target;
    std::optional<std::string> kind;
    Tick add = 0;
};

struct ScenarioCrash {
    std::string actor;
    Tick at = 0;
};

struct ScenarioTakeover {
    std::string txn;
    Tick fire_at = 0;
};

struct ScenarioExpect {
    std::map<std::string, std::string> classifications;  // txn name -> classification
    std::map<std::string, std::string> objects;          // object name -> active/inactive/locked/absent
};

struct ScenarioScript {
    std::string name = "scenario";
    Protocol protocol = Protocol::Sbac;
    uint32_t num_shards = 3;
    uint32_t nodes_per_shard = 4;
    uint32_t f = 1;
    SeqNo overflow_threshold = 1ull << 16;
    SeqNo clone_margin = 1;
    uint32_t dummy_pool_size = 8;
    uint32_t num_clients = 1;
    uint64_t seed = 0;
    std::vector<ScenarioObject> objects;
    std::vector<ScenarioTx> transactions;
    ScenarioRecordFilter record;
    std::vector<ScenarioInjection> injections;
    std::vector<ScenarioDelay> delays;
    std::vector<ScenarioCrash> crashes;
    std::vector<ScenarioTakeover> takeovers;
    std::string recording_in;
    std::string recording_out;
    std::optional<ScenarioExpect> expect;

    ShardConfig shard_config() const;
};

ScenarioScript parse_scenario(const std::string& json_text);
std::string scenario_to_json(const ScenarioScript& script);
ScenarioScript load_scenario_file(const std::string& path);

// Actor id layout inside a built world: shards, then clients, then the TM
// (byzcuit), then takeover actors.
struct ActorLayout {
    uint32_t num_shards = 0;
    uint32_t num_clients = 0;
    bool has_tm = false;
    uint32_t num_takeovers = 0;

    ActorId shard(ShardId s) const { return s; }
    ActorId client(uint32_t c) const { return num_shards + c; }
    ActorId tm() const { return num_shards + num_clients; }
    ActorId takeover(uint32_t k) const { return num_shards + num_clients + (has_tm ? 1 : 0) + k; }
    ActorId resolve(const std::string& ref) const;
    std::string describe(ActorId id) const;
};

struct SimInstance {
    ShardConfig cfg;
    Protocol protocol;
    ActorLayout layout;
    std::unique_ptr<World> world;
    std::vector<ShardActorBase*> shards;
    SubmissionLog submissions;
    std::map<std::string, ObjectId> object_ids;
    std::map<ObjectId, std::string> object_names;
    std::map<std::string, TxnId> txn_ids;
    std::map<TxnId, std::string> txn_names;
    Snapshot initial;

    std::string object_name(const ObjectId& id) const;
    std::string txn_name(TxnId id) const;
};

std::unique_ptr<SimInstance> build_sim(const ScenarioScript& script,
                                       const std::vector<RecordedMessage>* loaded_log = nullptr);

}  // namespace shardsim
