#include "shardsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace shardsim {

namespace {

constexpr ActorId kClient = 3;
constexpr ActorId kTm = 4;

const std::vector<std::string>& canonical_names() {
    static const std::vector<std::string> names = {"x1", "x2", "y1", "y2", "y3"};
    return names;
}

std::vector<ActorId> targets_for(Protocol protocol, MsgKind kind) {
    std::vector<ActorId> shards{0, 1, 2};
    switch (protocol) {
        case Protocol::Sbac:
            if (kind == MsgKind::SubmitTx || is_vote(kind)) return shards;
            if (is_decision(kind)) return {0, 1, 2, kClient};
            return {};
        case Protocol::Atomix:
            if (kind == MsgKind::SubmitTx) return shards;
            if (is_vote(kind)) return {kClient};
            if (is_decision(kind)) return shards;
            return {};
        case Protocol::Byzcuit:
            if (kind == MsgKind::SubmitTx || kind == MsgKind::VoteRequest) return shards;
            if (is_vote(kind)) return {kTm};
            if (is_decision(kind)) return shards;
            return {};
    }
    return {};
}

}  // namespace

ScenarioScript sweep_script(Protocol protocol) {
    ScenarioScript s;
    s.name = "sweep-" + std::string(to_string(protocol));
    s.protocol = protocol;
    s.num_shards = 3;
    s.objects = {{"x1", 0, ObjectStateKind::Active, 0},
                 {"x2", 1, ObjectStateKind::Active, 0},
                 {"xa3", 2, ObjectStateKind::Inactive, 0}};
    ScenarioTx doomed;
    doomed.name = "Tp";
    doomed.inputs = {"x1", "x2", "xa3"};
    doomed.outputs = {{"w1", 0}};
    doomed.submit_tick = 0;
    ScenarioTx first;
    first.name = "T";
    first.inputs = {"x1", "x2"};
    first.outputs = {{"y1", 0}, {"y2", 1}, {"y3", 2}};
    first.submit_tick = 1;
    ScenarioTx retry = first;
    retry.submit_tick = 8;
    s.transactions = {doomed, first, retry};
    return s;
}

std::string canonical_fingerprint(const RunOutcome& run) {
    std::ostringstream out;
    for (const auto& name : canonical_names()) out << name << "=" << run.state_of(name) << ";";
    return out.str();
}

SweepResult run_sweep(Protocol protocol, const SweepBounds& bounds, unsigned workers,
                      const ScenarioScript* base_script) {
    if (!bounds.within_guard())
        throw SweepGuardError("sweep bounds exceed the desk-scale guard (<= 3 shards, <= 2 injections)");

    SweepResult result;
    result.protocol = protocol;

    ScenarioScript base = base_script ? *base_script : sweep_script(protocol);
    RunOptions base_options;
    base_options.compute_counterfactual = false;
    RunOutcome baseline = run_scenario(base, nullptr, base_options);
    result.baseline_quiescence = baseline.quiescence_tick;

    // The clean run's per-instance commits feed every schedule's
    // availability judgement.
    std::map<TxnId, std::vector<bool>> counterfactual;
    for (const auto& [txn, list] : baseline.instances)
        for (const auto& inst : list)
            counterfactual[txn].push_back(inst.verdict.outcome == Classification::ConsistentCommit);

    // Deduplicate the corpus by origin and payload bytes; replays of one
    // message to different targets are the injection enumeration's job.
    std::vector<RecordedMessage> corpus;
    std::set<std::pair<ActorId, std::vector<uint8_t>>> seen;
    for (const auto& rec : baseline.recording) {
        if (rec.msg.kind == MsgKind::Notify) continue;  // no actor reacts to a replayed notification
        if (seen.emplace(rec.origin, encode_message(rec.msg)).second) corpus.push_back(rec);
    }
    result.corpus_size = corpus.size();

    std::vector<SweepInjection> singles;
    Tick horizon = baseline.quiescence_tick + bounds.horizon_slack;
    for (size_t i = 0; i < corpus.size(); ++i) {
        for (ActorId target : targets_for(protocol, corpus[i].msg.kind)) {
            for (Tick at = corpus[i].recorded_at; at <= horizon; ++at) singles.push_back({i, target, at});
        }
    }
    result.single_positions = singles.size();

    uint64_t schedule_count = singles.size();
    if (bounds.max_injections >= 2)
        schedule_count += singles.size() * (singles.size() + 1) / 2;
    if (schedule_count > bounds.schedule_guard)
        throw SweepGuardError("sweep would enumerate " + std::to_string(schedule_count) +
                              " schedules, over the guard of " + std::to_string(bounds.schedule_guard));

    if (workers == 0) {
        if (const char* env = std::getenv("SHARDSIM_WORKERS")) workers = static_cast<unsigned>(std::atoi(env));
        if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    }

    struct Partial {
        std::map<Classification, uint64_t> by_class;
        std::map<std::string, std::pair<uint64_t, std::string>> worlds;  // fingerprint -> (schedule, desc)
        uint64_t lemma_violations = 0;
    };
    std::vector<Partial> partials(workers);
    std::atomic<uint64_t> next_chunk{0};
    constexpr uint64_t kChunk = 512;

    auto schedule_at = [&](uint64_t index, std::vector<SweepInjection>& out) {
        // Schedules are ordered: all singles, then unordered pairs (i <= j).
        out.clear();
        if (index < singles.size()) {
            out.push_back(singles[index]);
            return;
        }
        uint64_t k = index - singles.size();
        // Row i of the triangular pair matrix holds (n - i) entries.
        uint64_t n = singles.size();
        uint64_t i = 0;
        while (k >= n - i) {
            k -= n - i;
            ++i;
        }
        out.push_back(singles[i]);
        out.push_back(singles[i + k]);
    };

    auto describe = [&](const std::vector<SweepInjection>& schedule) {
        std::ostringstream out;
        for (const auto& inj : schedule) {
            const auto& rec = corpus[inj.corpus_index];
            out << to_string(rec.msg.kind) << " from actor " << rec.origin << " -> actor " << inj.target
                << " @" << inj.at << "; ";
        }
        return out.str();
    };

    // Precompute the byte payload of every corpus entry once.
    std::vector<std::vector<uint8_t>> corpus_bytes;
    corpus_bytes.reserve(corpus.size());
    for (const auto& rec : corpus) corpus_bytes.push_back(encode_message(rec.msg));

    auto worker_fn = [&](unsigned w) {
        Partial& mine = partials[w];
        std::vector<SweepInjection> schedule;
        RunOptions options;
        options.compute_counterfactual = false;
        options.counterfactual = &counterfactual;
        while (true) {
            uint64_t start = next_chunk.fetch_add(kChunk);
            if (start >= schedule_count) break;
            uint64_t end = std::min(schedule_count, start + kChunk);
            for (uint64_t index = start; index < end; ++index) {
                schedule_at(index, schedule);
                // Same-run templates: the replayed copy exists only once this
                // run emits the message it mirrors.
                options.templates.clear();
                for (const auto& inj : schedule) {
                    TemplateInjection tpl;
                    tpl.origin = corpus[inj.corpus_index].origin;
                    tpl.payload = corpus_bytes[inj.corpus_index];
                    tpl.target = inj.target;
                    tpl.deliver_at = inj.at;
                    options.templates.push_back(tpl);
                }
                RunOutcome run = run_scenario(base, nullptr, options);
                Classification worst = Classification::ConsistentAbort;
                auto severity = [](Classification c) {
                    switch (c) {
                        case Classification::Inconsistent: return 3;
                        case Classification::AvailabilityLoss: return 2;
                        case Classification::ConsistentCommit: return 1;
                        case Classification::ConsistentAbort: return 0;
                    }
                    return 0;
                };
                for (const auto& [txn, verdict] : run.verdicts)
                    if (severity(verdict.outcome) > severity(worst)) worst = verdict.outcome;
                mine.by_class[worst]++;
                if (worst == Classification::Inconsistent) {
                    auto fp = canonical_fingerprint(run);
                    auto it = mine.worlds.find(fp);
                    if (it == mine.worlds.end() || index < it->second.first)
                        mine.worlds[fp] = {index, describe(schedule)};
                }
                if (!run.lemma1_ok) mine.lemma_violations++;
            }
        }
    };

    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker_fn, w);
    for (auto& t : pool) t.join();

    result.schedules = schedule_count;
    std::map<std::string, std::pair<uint64_t, std::string>> merged;
    for (const auto& partial : partials) {
        for (const auto& [cls, count] : partial.by_class) result.by_class[cls] += count;
        for (const auto& [fp, entry] : partial.worlds) {
            auto it = merged.find(fp);
            if (it == merged.end() || entry.first < it->second.first) merged[fp] = entry;
        }
        result.lemma1_violations += partial.lemma_violations;
    }
    for (const auto& [fp, entry] : merged) result.inconsistent_worlds[fp] = entry.second;
    return result;
}

}  // namespace shardsim
