#pragma once

#include <random>

#include "shardsim/runner.hpp"

namespace shardsim::testing {

// Canonical three-shard world: T(x1,x2) -> (y1,y2,y3) with y3 on the
// output-only shard 2.
inline ScenarioScript canonical_script(Protocol protocol) {
    ScenarioScript s;
    s.name = "canonical";
    s.protocol = protocol;
    s.num_shards = 3;
    s.objects = {{"x1", 0, ObjectStateKind::Active, 0}, {"x2", 1, ObjectStateKind::Active, 0}};
    ScenarioTx t;
    t.name = "T";
    t.inputs = {"x1", "x2"};
    t.outputs = {{"y1", 0}, {"y2", 1}, {"y3", 2}};
    t.submit_tick = 0;
    s.transactions = {t};
    return s;
}

inline ScenarioTx make_tx(std::string name, std::vector<std::string> inputs,
                          std::vector<ScenarioOutput> outputs, Tick tick) {
    ScenarioTx t;
    t.name = std::move(name);
    t.inputs = std::move(inputs);
    t.outputs = std::move(outputs);
    t.submit_tick = tick;
    return t;
}

inline size_t find_recorded(const std::vector<RecordedMessage>& log, MsgKind kind, ActorId origin,
                            TxnId txn, size_t skip = 0) {
    for (size_t i = 0; i < log.size(); ++i) {
        if (log[i].msg.kind != kind || log[i].origin != origin) continue;
        if (txn != 0 && (!log[i].msg.txn || log[i].msg.txn->id != txn)) continue;
        if (skip-- > 0) continue;
        return i;
    }
    throw std::runtime_error("recorded message not found");
}

inline bool action_logged(const RunOutcome& run, ActorId actor, ActionKind action,
                          const std::string& txn = "", const std::string& object = "") {
    TxnId txn_id = txn.empty() ? 0 : run.txn_ids.at(txn);
    ObjectId obj = object.empty() ? ObjectId{} : run.object_ids.at(object);
    for (const auto& e : run.log) {
        if (e.actor != actor || e.action != action) continue;
        if (txn_id != 0 && e.txn != txn_id) continue;
        if (!object.empty() && !(e.object == obj)) continue;
        return true;
    }
    return false;
}

// Random conflict-free-ish workload for atomicity properties; transactions
// may share inputs, which just forces one of them to abort.
inline ScenarioScript random_script(Protocol protocol, uint64_t seed) {
    std::mt19937_64 rng(seed);
    ScenarioScript s;
    s.name = "random-" + std::to_string(seed);
    s.protocol = protocol;
    s.num_shards = 1 + rng() % 4;
    uint32_t num_objects = 2 + rng() % 6;
    for (uint32_t i = 0; i < num_objects; ++i) {
        ScenarioObject o;
        o.name = "o" + std::to_string(i);
        o.shard = static_cast<ShardId>(rng() % s.num_shards);
        o.state = rng() % 5 == 0 ? ObjectStateKind::Inactive : ObjectStateKind::Active;
        s.objects.push_back(o);
    }
    uint32_t num_txs = 1 + rng() % 4;
    uint32_t next_output = 0;
    for (uint32_t t = 0; t < num_txs; ++t) {
        ScenarioTx tx;
        tx.name = "t" + std::to_string(t);
        uint32_t num_inputs = 1 + rng() % std::min<uint32_t>(3, num_objects);
        std::set<std::string> chosen;
        while (chosen.size() < num_inputs) chosen.insert("o" + std::to_string(rng() % num_objects));
        tx.inputs.assign(chosen.begin(), chosen.end());
        uint32_t num_outputs = rng() % 3;
        for (uint32_t o = 0; o < num_outputs; ++o)
            tx.outputs.push_back({"w" + std::to_string(next_output++), static_cast<ShardId>(rng() % s.num_shards)});
        tx.submit_tick = rng() % 7;
        s.transactions.push_back(tx);
    }
    return s;
}

}  // namespace shardsim::testing
