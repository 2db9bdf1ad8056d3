#pragma once

#include "shardsim/scenario.hpp"

namespace shardsim {

// One assessed protocol instance: a single submission of a transaction,
// judged between its submission snapshot and the next one (or quiescence).
struct InstanceOutcome {
    SubmissionInstance submission;
    TxAssessment assessment;
    TxVerdict verdict;
};

struct RunOutcome {
    std::string name;
    Protocol protocol = Protocol::Sbac;
    uint64_t seed = 0;
    Snapshot initial;
    Snapshot final_world;
    std::vector<DecisionEntry> log;
    MessageStats stats;
    std::vector<RecordedMessage> recording;
    Tick quiescence_tick = 0;
    uint64_t events = 0;
    uint64_t not_concerned = 0;
    std::map<TxnId, std::vector<InstanceOutcome>> instances;
    std::map<TxnId, TxVerdict> verdicts;  // headline per transaction (most severe instance)
    std::map<std::string, ObjectId> object_ids;
    std::map<ObjectId, std::string> object_names;
    std::map<std::string, TxnId> txn_ids;
    std::map<TxnId, std::string> txn_names;
    bool lemma1_ok = true;
    std::string lemma1_detail;

    std::string object_name(const ObjectId& id) const;
    std::string txn_name(TxnId id) const;
    std::optional<TxVerdict> verdict_of(const std::string& txn) const;
    // Final state of a named object: active/locked/inactive/absent.
    std::string state_of(const std::string& object) const;
    std::vector<HistoryEntry> history() const;  // one entry per instance
    bool any_inconsistent() const;
    bool decided(TxnId txn) const;
    // Canonical fingerprint of the named objects' final states.
    std::string named_world_fingerprint() const;
};

struct RunOptions {
    bool compute_counterfactual = true;
    bool lemma1_monitor = true;  // byzcuit only
    uint64_t max_events = 1'000'000;
    // Instance-commit flags of the injection-free run, when the caller has
    // already computed them (the sweep shares one baseline across schedules).
    const std::map<TxnId, std::vector<bool>>* counterfactual = nullptr;
    // Same-run replay templates, applied on top of the script's injections.
    std::vector<TemplateInjection> templates;
};

RunOutcome run_scenario(const ScenarioScript& script, const std::vector<RecordedMessage>* loaded_log = nullptr,
                        const RunOptions& options = {});

}  // namespace shardsim
