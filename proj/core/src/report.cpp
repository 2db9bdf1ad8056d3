#include "shardsim/report.hpp"

#include <algorithm>

#include "json.hpp"

namespace shardsim {

using json = nlohmann::ordered_json;

bool all_pass(const std::vector<AssertionResult>& assertions) {
    return std::all_of(assertions.begin(), assertions.end(), [](const auto& a) { return a.pass; });
}

std::string render_report(const RunOutcome& run, const std::vector<AssertionResult>& assertions) {
    json j;
    j["report_version"] = 1;
    j["name"] = run.name;
    j["protocol"] = to_string(run.protocol);
    j["seed"] = run.seed;
    j["quiescence_tick"] = run.quiescence_tick;
    j["events_delivered"] = run.events;

    json msgs;
    uint64_t total = 0;
    for (const auto& [kind, count] : run.stats.emitted) {
        msgs[to_string(kind)] = count;
        total += count;
    }
    msgs["injected"] = run.stats.injected;
    msgs["total_genuine"] = total;
    j["messages"] = msgs;

    // Final object tables grouped by shard, each sorted by object name.
    std::map<ShardId, std::vector<const ObjectRecord*>> by_shard;
    for (const auto& [id, rec] : run.final_world.objects) by_shard[rec.shard].push_back(&rec);
    json shards = json::array();
    for (auto& [shard, records] : by_shard) {
        std::sort(records.begin(), records.end(), [&](const ObjectRecord* a, const ObjectRecord* b) {
            return run.object_name(a->id) < run.object_name(b->id);
        });
        json entry;
        entry["shard"] = shard;
        json objects = json::array();
        for (const ObjectRecord* rec : records) {
            json o;
            o["name"] = run.object_name(rec->id);
            o["state"] = to_string(rec->state);
            o["seq"] = rec->seq;
            o["dummy"] = rec->id.dummy;
            if (rec->state == ObjectStateKind::Locked) {
                o["locked_by"] = run.txn_name(rec->locked_by);
                o["locked_s_t"] = rec->locked_tx_seq;
            }
            objects.push_back(o);
        }
        entry["objects"] = objects;
        shards.push_back(entry);
    }
    j["shards"] = shards;

    json txns = json::array();
    for (const auto& [id, verdict] : run.verdicts) {
        json t;
        t["name"] = run.txn_name(id);
        t["classification"] = to_string(verdict.outcome);
        if (!verdict.detail.empty()) t["detail"] = verdict.detail;
        t["decided"] = run.decided(id);
        auto iit = run.instances.find(id);
        if (iit != run.instances.end() && !iit->second.empty()) {
            t["instances"] = iit->second.size();
            json per = json::array();
            for (const auto& inst : iit->second) {
                json e;
                e["submitted_tick"] = inst.submission.tick;
                e["s_t"] = inst.submission.tx_seq;
                e["classification"] = to_string(inst.verdict.outcome);
                per.push_back(e);
            }
            t["submissions"] = per;
        }
        txns.push_back(t);
    }
    j["transactions"] = txns;

    json rec;
    rec["count"] = run.recording.size();
    rec["digest"] = hex64(recording_digest(run.recording));
    j["recording"] = rec;

    if (run.protocol == Protocol::Byzcuit) {
        json lemma;
        lemma["fresh_session_in_log"] = !run.lemma1_ok;
        if (!run.lemma1_ok) lemma["detail"] = run.lemma1_detail;
        j["session_freshness"] = lemma;
    }

    json asserts = json::array();
    bool pass = true;
    for (const auto& a : assertions) {
        json e;
        e["name"] = a.name;
        e["pass"] = a.pass;
        if (!a.detail.empty()) e["detail"] = a.detail;
        asserts.push_back(e);
        pass = pass && a.pass;
    }
    j["assertions"] = asserts;
    j["pass"] = pass;
    return j.dump(2) + "\n";
}

std::vector<AssertionResult> evaluate_expectations(const RunOutcome& run, const ScenarioExpect& expect) {
    std::vector<AssertionResult> out;
    for (const auto& [txn, want] : expect.classifications) {
        AssertionResult a;
        a.name = "classification:" + txn;
        auto verdict = run.verdict_of(txn);
        std::string got = verdict ? to_string(verdict->outcome) : "missing";
        a.pass = got == want;
        if (!a.pass) a.detail = "expected " + want + ", got " + got;
        out.push_back(a);
    }
    for (const auto& [object, want] : expect.objects) {
        AssertionResult a;
        a.name = "object:" + object;
        std::string got = run.state_of(object);
        a.pass = got == want;
        if (!a.pass) a.detail = "expected " + want + ", got " + got;
        out.push_back(a);
    }
    return out;
}

}  // namespace shardsim
