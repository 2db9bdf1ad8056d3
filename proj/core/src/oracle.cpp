#include "shardsim/oracle.hpp"

namespace shardsim {

Snapshot take_snapshot(const std::vector<ShardActorBase*>& shards) {
    Snapshot snap;
    for (const auto* shard : shards)
        for (const auto& [id, rec] : shard->objects()) snap.objects.emplace(id, rec);
    return snap;
}

const char* to_string(Classification c) {
    switch (c) {
        case Classification::ConsistentCommit: return "consistent_commit";
        case Classification::ConsistentAbort: return "consistent_abort";
        case Classification::Inconsistent: return "inconsistent";
        case Classification::AvailabilityLoss: return "availability_loss";
    }
    return "?";
}

bool inputs_usable_at_submission(const TxAssessment& ctx) {
    for (const auto& in : ctx.txn->inputs) {
        auto it = ctx.inputs_at_submission.find(in);
        if (it == ctx.inputs_at_submission.end() || !it->second) return false;
        if (it->second->state == ObjectStateKind::Inactive) return false;
    }
    return true;
}

TxVerdict classify(const Snapshot& final_world, const TxAssessment& ctx, const ObjectNamer& name) {
    const Transaction& txn = *ctx.txn;
    auto effect = [&](const ObjectId& in) {
        auto it = ctx.input_effects.find(in);
        return it == ctx.input_effects.end() ? NetEffect::None : it->second;
    };

    bool all_consumed = true, all_reverted = true, any_locked = false;
    std::string consumed_detail, reverted_detail;
    for (const auto& in : txn.inputs) {
        switch (effect(in)) {
            case NetEffect::Consumed:
                all_reverted = false;
                reverted_detail = "input " + name(in) + " consumed";
                break;
            case NetEffect::None:
                all_consumed = false;
                consumed_detail = "input " + name(in) + " not consumed";
                break;
            case NetEffect::LeftLocked:
                all_consumed = false;
                all_reverted = false;
                any_locked = true;
                break;
        }
    }
    bool outputs_complete = true;
    std::string output_detail;
    for (const auto& out : txn.outputs) {
        if (!ctx.outputs_created.contains(out.id)) {
            outputs_complete = false;
            output_detail = "output " + name(out.id) + " missing";
            break;
        }
    }
    bool any_output = false;
    for (const auto& out : txn.outputs)
        if (ctx.outputs_created.contains(out.id)) any_output = true;

    bool valid = inputs_usable_at_submission(ctx);

    if (all_consumed && outputs_complete) {
        // Consuming an input implies the shard saw it active in phase 1, so
        // the only commit-time anomaly left is a resurrected input: one
        // active again at quiescence through a replay of this instance.
        for (const auto& in : txn.inputs) {
            const ObjectRecord* rec = final_world.find(in);
            if (rec && rec->state == ObjectStateKind::Active)
                return {Classification::Inconsistent, "input " + name(in) + " active again after commit"};
        }
        return {Classification::ConsistentCommit, ""};
    }

    if (all_reverted && !any_output) {
        if (valid && ctx.adversary_present && ctx.counterfactual_committed.value_or(false))
            return {Classification::AvailabilityLoss, "valid transaction suppressed by replays"};
        return {Classification::ConsistentAbort, ""};
    }

    if (!any_output) {
        // No double-spend is possible without outputs; inputs left locked or
        // spent with nothing created is lost availability, decided or not.
        return {Classification::AvailabilityLoss,
                any_locked ? "inputs left locked" : "inputs left inactive with nothing created"};
    }

    std::string detail;
    auto append = [&detail](const std::string& part) {
        if (part.empty()) return;
        if (!detail.empty()) detail += "; ";
        detail += part;
    };
    if (all_consumed && !outputs_complete) append(output_detail);
    else {
        append(consumed_detail);
        append(reverted_detail);
        if (any_output && !all_consumed) append("outputs created without consuming every input");
        else append(output_detail);
    }
    if (any_locked) append("inputs left locked");
    return {Classification::Inconsistent, detail};
}

bool check_conflict_exclusivity(const std::vector<HistoryEntry>& history) {
    for (size_t i = 0; i < history.size(); ++i) {
        for (size_t j = i + 1; j < history.size(); ++j) {
            if (history[i].txn == history[j].txn) continue;
            bool share = false;
            for (const auto& a : history[i].inputs)
                for (const auto& b : history[j].inputs)
                    if (a == b) share = true;
            if (!share) continue;
            if (history[i].outcome == Classification::ConsistentCommit &&
                history[j].outcome == Classification::ConsistentCommit)
                return false;
        }
    }
    return true;
}

bool check_validity(const std::vector<HistoryEntry>& history) {
    for (const auto& entry : history)
        if (!entry.valid_at_submission && entry.outcome == Classification::ConsistentCommit) return false;
    return true;
}

bool check_liveness(const std::vector<HistoryEntry>& history) {
    for (const auto& entry : history)
        if (!entry.decided) return false;
    return true;
}

}  // namespace shardsim
