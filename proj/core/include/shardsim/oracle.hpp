#pragma once

#include <functional>

#include "shardsim/protocol_base.hpp"

namespace shardsim {

// Merged object tables across all shards, taken at quiescence.
struct Snapshot {
    std::map<ObjectId, ObjectRecord> objects;

    const ObjectRecord* find(const ObjectId& id) const {
        auto it = objects.find(id);
        return it == objects.end() ? nullptr : &it->second;
    }
};

Snapshot take_snapshot(const std::vector<ShardActorBase*>& shards);

enum class Classification : uint8_t {
    ConsistentCommit = 0,
    ConsistentAbort = 1,
    Inconsistent = 2,
    AvailabilityLoss = 3,
};

const char* to_string(Classification c);

struct TxVerdict {
    Classification outcome = Classification::ConsistentAbort;
    std::string detail;
};

using ObjectNamer = std::function<std::string(const ObjectId&)>;

// Net effect of one protocol instance on one of its inputs, folded from the
// actions the instance (and replays of its messages) performed on the object.
enum class NetEffect : uint8_t { None = 0, Consumed = 1, LeftLocked = 2 };

// Everything classify needs to judge one protocol instance.
struct TxAssessment {
    std::shared_ptr<const Transaction> txn;
    std::map<ObjectId, std::optional<ObjectRecord>> inputs_at_submission;
    std::map<ObjectId, NetEffect> input_effects;
    std::set<ObjectId> outputs_created;  // creations logged in this instance's window
    bool decided = false;
    bool adversary_present = false;
    std::optional<bool> counterfactual_committed;  // same script, injections stripped
};

TxVerdict classify(const Snapshot& final_world, const TxAssessment& ctx, const ObjectNamer& name);

struct HistoryEntry {
    TxnId txn = 0;
    std::vector<ObjectId> inputs;
    Classification outcome = Classification::ConsistentAbort;
    bool valid_at_submission = true;
    bool decided = false;
};

// At most one of any two transactions sharing an input may consistently commit.
bool check_conflict_exclusivity(const std::vector<HistoryEntry>& history);
// In adversary-free runs, invalid transactions never consistently commit.
bool check_validity(const std::vector<HistoryEntry>& history);
// Every submitted transaction reached a terminal decision.
bool check_liveness(const std::vector<HistoryEntry>& history);

// True when no input was spent or missing at submission time (a locked input
// counts as present: the instance may legitimately retry once it unlocks).
bool inputs_usable_at_submission(const TxAssessment& ctx);

}  // namespace shardsim
