#include "shardsim/runner.hpp"

#include <algorithm>
#include <sstream>

namespace shardsim {

std::string RunOutcome::object_name(const ObjectId& id) const {
    auto it = object_names.find(id);
    if (it != object_names.end()) return it->second;
    if (id.dummy) {
        uint64_t counter = id.raw & ((1ull << kDummyShardShift) - 1);
        uint64_t shard = id.raw >> kDummyShardShift;
        return "d" + std::to_string(shard) + "." + std::to_string(counter);
    }
    return "obj." + std::to_string(id.raw);
}

std::string RunOutcome::txn_name(TxnId id) const {
    auto it = txn_names.find(id);
    return it == txn_names.end() ? "txn." + std::to_string(id) : it->second;
}

std::optional<TxVerdict> RunOutcome::verdict_of(const std::string& txn) const {
    auto it = txn_ids.find(txn);
    if (it == txn_ids.end()) return std::nullopt;
    auto vit = verdicts.find(it->second);
    if (vit == verdicts.end()) return std::nullopt;
    return vit->second;
}

std::string RunOutcome::state_of(const std::string& object) const {
    auto it = object_ids.find(object);
    if (it == object_ids.end()) return "absent";
    const ObjectRecord* rec = final_world.find(it->second);
    return rec ? to_string(rec->state) : "absent";
}

std::vector<HistoryEntry> RunOutcome::history() const {
    std::vector<HistoryEntry> out;
    for (const auto& [id, list] : instances) {
        for (const auto& inst : list) {
            HistoryEntry entry;
            entry.txn = id;
            entry.inputs = inst.submission.txn->inputs;
            entry.outcome = inst.verdict.outcome;
            entry.valid_at_submission = inputs_usable_at_submission(inst.assessment);
            entry.decided = inst.assessment.decided;
            out.push_back(entry);
        }
    }
    return out;
}

bool RunOutcome::any_inconsistent() const {
    return std::any_of(verdicts.begin(), verdicts.end(),
                       [](const auto& kv) { return kv.second.outcome == Classification::Inconsistent; });
}

bool RunOutcome::decided(TxnId txn) const {
    auto it = instances.find(txn);
    if (it == instances.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(),
                       [](const InstanceOutcome& i) { return i.assessment.decided; });
}

std::string RunOutcome::named_world_fingerprint() const {
    std::ostringstream out;
    for (const auto& [name, id] : object_ids) {
        const ObjectRecord* rec = final_world.find(id);
        out << name << "=" << (rec ? to_string(rec->state) : "absent") << ";";
    }
    return out.str();
}

namespace {

bool is_terminal_action(ActionKind k) {
    switch (k) {
        case ActionKind::DecideCommit:
        case ActionKind::DecideAbort:
        case ActionKind::ClientAccept:
        case ActionKind::ClientAbort:
        case ActionKind::TmAccept:
        case ActionKind::TmAbort: return true;
        default: return false;
    }
}

int severity(Classification c) {
    switch (c) {
        case Classification::Inconsistent: return 3;
        case Classification::AvailabilityLoss: return 2;
        case Classification::ConsistentCommit: return 1;
        case Classification::ConsistentAbort: return 0;
    }
    return 0;
}

// Watches byzcuit completions and checks that no recorded message still
// carries a usable session: for every message of a completed (T, s_T), some
// input's sequence number has moved past s_T or some input is spent.
struct FreshnessMonitor {
    const SimInstance* sim = nullptr;
    std::map<std::pair<TxnId, SeqNo>, uint32_t> applied;
    std::set<std::pair<TxnId, SeqNo>> completed;
    bool ok = true;
    std::string detail;

    void on_action(World& world, const DecisionEntry& entry) {
        if (entry.action != ActionKind::ApplyCommit && entry.action != ActionKind::ApplyAbort) return;
        std::pair<TxnId, SeqNo> pair{entry.txn, entry.tx_seq};
        const SubmissionInstance* sub = sim->submissions.find_latest(entry.txn);
        if (!sub) return;
        uint32_t need = static_cast<uint32_t>(concerned_shards(*sub->txn, sim->cfg.num_shards).size());
        if (++applied[pair] < need) return;
        completed.insert(pair);
        scan(world);
    }

    void scan(World& world) {
        if (!ok) return;
        for (const auto& rec : world.recording()) {
            if (!rec.msg.txn) continue;
            std::pair<TxnId, SeqNo> pair{rec.msg.txn->id, rec.msg.tx_seq};
            if (!completed.contains(pair)) continue;
            bool stale = false;
            for (const auto& in : rec.msg.txn->inputs) {
                const ObjectRecord* cur = sim->shards[shard_of(in, sim->cfg.num_shards)]->find_object(in);
                if (!cur) continue;
                if (cur->seq > rec.msg.tx_seq || cur->state == ObjectStateKind::Inactive) {
                    stale = true;
                    break;
                }
            }
            if (!stale) {
                ok = false;
                detail = "recorded " + std::string(to_string(rec.msg.kind)) + " for completed session s_T=" +
                         std::to_string(rec.msg.tx_seq) + " is still fresh";
                return;
            }
        }
    }
};

}  // namespace

RunOutcome run_scenario(const ScenarioScript& script, const std::vector<RecordedMessage>* loaded_log,
                        const RunOptions& options) {
    auto sim = build_sim(script, loaded_log);
    World& world = *sim->world;
    world.policy.templates = options.templates;

    FreshnessMonitor monitor;
    monitor.sim = sim.get();
    if (script.protocol == Protocol::Byzcuit && options.lemma1_monitor) {
        world.on_action = [&monitor](World& w, const DecisionEntry& e) { monitor.on_action(w, e); };
    }

    world.run_to_quiescence(options.max_events);
    if (script.protocol == Protocol::Byzcuit && options.lemma1_monitor) monitor.scan(world);

    RunOutcome out;
    out.name = script.name;
    out.protocol = script.protocol;
    out.seed = script.seed;
    out.initial = sim->initial;
    out.final_world = take_snapshot(sim->shards);
    out.log = world.decision_log();
    out.stats = world.stats;
    out.recording = world.recording();
    out.quiescence_tick = world.now();
    out.events = world.events_delivered();
    out.not_concerned = world.not_concerned_deliveries;
    out.object_ids = sim->object_ids;
    out.object_names = sim->object_names;
    out.txn_ids = sim->txn_ids;
    out.txn_names = sim->txn_names;
    out.lemma1_ok = monitor.ok;
    out.lemma1_detail = monitor.detail;

    bool adversary = !script.injections.empty() || !options.templates.empty();
    std::map<TxnId, std::vector<bool>> counterfactual_commit;
    if (adversary && options.counterfactual) counterfactual_commit = *options.counterfactual;
    else if (adversary && options.compute_counterfactual) {
        ScenarioScript stripped = script;
        stripped.injections.clear();
        stripped.recording_out.clear();
        RunOptions sub_options = options;
        sub_options.compute_counterfactual = false;
        sub_options.templates.clear();
        RunOutcome clean = run_scenario(stripped, loaded_log, sub_options);
        for (const auto& [id, list] : clean.instances) {
            auto& flags = counterfactual_commit[id];
            for (const auto& inst : list)
                flags.push_back(inst.verdict.outcome == Classification::ConsistentCommit);
        }
    }

    ObjectNamer namer = [&out](const ObjectId& id) { return out.object_name(id); };
    for (const auto& [txn_id, subs] : sim->submissions.instances) {
        auto& list = out.instances[txn_id];

        // Attribute each log entry to one submission instance. Byzcuit events
        // carry the session s_T, which pins them regardless of delivery time
        // (a replayed submission can act before its instance's window);
        // sbac/atomix events are indistinguishable, so time decides.
        auto attribute = [&](const DecisionEntry& entry) -> size_t {
            size_t chosen = subs.size();
            for (size_t i = 0; i < subs.size(); ++i) {
                if (script.protocol == Protocol::Byzcuit && subs[i].tx_seq != entry.tx_seq) continue;
                if (chosen == subs.size() || subs[i].tick <= entry.tick) chosen = i;
            }
            return chosen;
        };

        std::vector<TxAssessment> contexts(subs.size());
        for (size_t i = 0; i < subs.size(); ++i) {
            contexts[i].txn = subs[i].txn;
            for (const auto& in : subs[i].txn->inputs) {
                const ObjectRecord* rec = subs[i].world_before.find(in);
                contexts[i].inputs_at_submission[in] = rec ? std::optional<ObjectRecord>(*rec) : std::nullopt;
            }
            contexts[i].adversary_present = adversary;
            if (auto cit = counterfactual_commit.find(txn_id);
                cit != counterfactual_commit.end() && i < cit->second.size())
                contexts[i].counterfactual_committed = cit->second[i];
        }
        std::vector<std::map<ObjectId, NetEffect>> stray_dummy_effects(subs.size());
        std::vector<std::set<ObjectId>> stray_dummy_created(subs.size());
        for (const auto& entry : out.log) {
            if (entry.txn != txn_id) continue;
            size_t i = attribute(entry);
            if (i >= subs.size()) continue;
            TxAssessment& ctx = contexts[i];
            if (is_terminal_action(entry.action)) ctx.decided = true;
            bool is_input = std::find(ctx.txn->inputs.begin(), ctx.txn->inputs.end(), entry.object) !=
                            ctx.txn->inputs.end();
            if (entry.action == ActionKind::CreateOutput) {
                bool is_output = std::any_of(ctx.txn->outputs.begin(), ctx.txn->outputs.end(),
                                             [&](const OutputSpec& o) { return o.id == entry.object; });
                if (is_output) ctx.outputs_created.insert(entry.object);
                else if (entry.object.dummy) stray_dummy_created[i].insert(entry.object);
                else ctx.outputs_created.insert(entry.object);
            }
            NetEffect effect;
            bool effect_set = true;
            switch (entry.action) {
                case ActionKind::Inactivate: effect = NetEffect::Consumed; break;
                case ActionKind::Reactivate:
                case ActionKind::Unlock: effect = NetEffect::None; break;
                case ActionKind::Lock: effect = NetEffect::LeftLocked; break;
                default: effect_set = false; break;
            }
            if (effect_set) {
                if (is_input) ctx.input_effects[entry.object] = effect;
                else if (entry.object.dummy) stray_dummy_effects[i][entry.object] = effect;
            }
        }
        // A replayed byzcuit submission can open a session whose attached
        // dummy differs from the one the client picked for this attempt.
        // Dummies are interchangeable placeholders, so reconcile by shard:
        // the assessed payload swaps an untouched expected dummy for the
        // stray same-shard dummy the session actually acted on.
        if (script.protocol == Protocol::Byzcuit) {
            for (size_t i = 0; i < subs.size(); ++i) {
                TxAssessment& ctx = contexts[i];
                Transaction patched = *ctx.txn;
                bool changed = false;
                for (auto& in : patched.inputs) {
                    if (!in.dummy || ctx.input_effects.contains(in)) continue;
                    for (auto it = stray_dummy_effects[i].begin(); it != stray_dummy_effects[i].end(); ++it) {
                        if (shard_of(it->first, sim->cfg.num_shards) != shard_of(in, sim->cfg.num_shards))
                            continue;
                        const ObjectRecord* before = subs[i].world_before.find(it->first);
                        ctx.inputs_at_submission[it->first] =
                            before ? std::optional<ObjectRecord>(*before) : std::nullopt;
                        ctx.input_effects[it->first] = it->second;
                        in = it->first;
                        changed = true;
                        stray_dummy_effects[i].erase(it);
                        break;
                    }
                }
                for (auto& spec : patched.outputs) {
                    if (!spec.id.dummy || ctx.outputs_created.contains(spec.id)) continue;
                    for (auto it = stray_dummy_created[i].begin(); it != stray_dummy_created[i].end(); ++it) {
                        if (shard_of(*it, sim->cfg.num_shards) != spec.shard) continue;
                        ctx.outputs_created.insert(*it);
                        spec.id = *it;
                        changed = true;
                        stray_dummy_created[i].erase(it);
                        break;
                    }
                }
                if (changed) ctx.txn = std::make_shared<const Transaction>(std::move(patched));
            }
        }
        for (size_t i = 0; i < subs.size(); ++i) {
            InstanceOutcome inst;
            inst.submission = subs[i];
            const Snapshot& final_i = i + 1 < subs.size() ? subs[i + 1].world_before : out.final_world;
            inst.assessment = contexts[i];
            inst.verdict = classify(final_i, contexts[i], namer);
            list.push_back(std::move(inst));
        }
        TxVerdict headline{Classification::ConsistentAbort, ""};
        bool first = true;
        for (const auto& inst : list) {
            if (first || severity(inst.verdict.outcome) > severity(headline.outcome)) headline = inst.verdict;
            first = false;
        }
        out.verdicts[txn_id] = headline;
    }

    if (!script.recording_out.empty()) save_recording_log(script.recording_out, out.recording);
    return out;
}

}  // namespace shardsim
