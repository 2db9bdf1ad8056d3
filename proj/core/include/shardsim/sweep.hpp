#pragma once

#include "shardsim/attacks.hpp"

namespace shardsim {

struct SweepBounds {
    uint32_t max_shards = 3;
    uint32_t max_injections = 2;  // per schedule; also caps copies of one message
    Tick horizon_slack = 3;
    uint64_t schedule_guard = 2'000'000;

    bool within_guard() const { return max_shards <= 3 && max_injections <= 2; }
};

struct SweepGuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SweepInjection {
    size_t corpus_index = 0;
    ActorId target = 0;
    Tick at = 0;
};

struct SweepResult {
    Protocol protocol = Protocol::Sbac;
    uint64_t schedules = 0;
    std::map<Classification, uint64_t> by_class;  // per-schedule worst classification
    // Distinct final worlds over the canonical objects, for Inconsistent
    // schedules, each with the first schedule that produced it.
    std::map<std::string, std::string> inconsistent_worlds;
    uint64_t lemma1_violations = 0;
    size_t corpus_size = 0;
    uint64_t single_positions = 0;
    Tick baseline_quiescence = 0;

    uint64_t inconsistent() const {
        auto it = by_class.find(Classification::Inconsistent);
        return it == by_class.end() ? 0 : it->second;
    }
};

// The continuous two-transaction world every sweep runs in: a doomed sibling
// locks (or temporarily spends) both canonical inputs, the canonical
// transaction aborts once, then succeeds on resubmission.
ScenarioScript sweep_script(Protocol protocol);

// Restrict a run's final world to the canonical objects.
std::string canonical_fingerprint(const RunOutcome& run);

// Enumerate every injection position and target of every recorded message,
// alone and in unordered pairs, across all delivery ticks of the baseline
// horizon; classify each schedule's final world. A custom base script (same
// actor layout) may replace the canonical one.
SweepResult run_sweep(Protocol protocol, const SweepBounds& bounds = {}, unsigned workers = 0,
                      const ScenarioScript* base_script = nullptr);

}  // namespace shardsim
