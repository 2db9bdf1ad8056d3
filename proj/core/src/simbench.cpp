#include "shardsim/simbench.hpp"

#include <cstdio>

#include "json.hpp"

namespace shardsim {

namespace {

// One transaction with one input on each of n shards; outputs land on the
// same shards, so every protocol sees exactly n concerned shards.
ScenarioScript spread_commit_script(Protocol protocol, uint32_t concerned) {
    ScenarioScript s;
    s.name = "bench-commit-" + std::to_string(concerned);
    s.protocol = protocol;
    s.num_shards = concerned;
    ScenarioTx t;
    t.name = "T";
    for (uint32_t i = 0; i < concerned; ++i) {
        s.objects.push_back({"a" + std::to_string(i), i, ObjectStateKind::Active, 0});
        t.inputs.push_back("a" + std::to_string(i));
        t.outputs.push_back({"b" + std::to_string(i), i});
    }
    t.submit_tick = 0;
    s.transactions = {t};
    return s;
}

uint64_t protocol_message_total(const MessageStats& stats) {
    uint64_t total = 0;
    for (const auto& [kind, count] : stats.emitted)
        if (kind != MsgKind::Timer) total += count;
    return total;
}

// Independent chained streams: shard pair (2k, 2k+1) runs `depth` dependent
// transactions, each spending the previous one's outputs.
ScenarioScript stream_script(Protocol protocol, uint32_t shards, uint32_t depth, bool force_dummies) {
    ScenarioScript s;
    s.name = "bench-streams-" + std::to_string(shards);
    s.protocol = protocol;
    s.num_shards = shards;
    uint32_t streams = shards / 2;
    constexpr Tick kSpacing = 6;  // past one commit's latency, so chains never conflict
    for (uint32_t k = 0; k < streams; ++k) {
        ShardId left = 2 * k, right = 2 * k + 1;
        std::string prev_a = "a" + std::to_string(k) + ".0";
        std::string prev_b = "b" + std::to_string(k) + ".0";
        s.objects.push_back({prev_a, left, ObjectStateKind::Active, 0});
        s.objects.push_back({prev_b, right, ObjectStateKind::Active, 0});
        for (uint32_t i = 0; i < depth; ++i) {
            ScenarioTx t;
            t.name = "t" + std::to_string(k) + "." + std::to_string(i);
            t.inputs = {prev_a, prev_b};
            std::string next_a = "a" + std::to_string(k) + "." + std::to_string(i + 1);
            std::string next_b = "b" + std::to_string(k) + "." + std::to_string(i + 1);
            t.outputs = {{next_a, left}, {next_b, right}};
            if (force_dummies) {
                // An output on a non-input shard drags one dummy per tx in.
                ShardId extra = (right + 1) % shards;
                if (extra != left && extra != right)
                    t.outputs.push_back({"c" + std::to_string(k) + "." + std::to_string(i), extra});
            }
            t.submit_tick = i * kSpacing;
            s.transactions.push_back(t);
            prev_a = next_a;
            prev_b = next_b;
        }
    }
    return s;
}

BenchRow measure(const ScenarioScript& script) {
    auto run = run_scenario(script);
    BenchRow row;
    row.shards = script.num_shards;
    for (const auto& [txn, verdict] : run.verdicts)
        if (verdict.outcome == Classification::ConsistentCommit) row.commits++;
    row.protocol_messages = protocol_message_total(run.stats);
    row.events = run.events;
    row.quiescence = run.quiescence_tick;
    row.commits_per_tick = row.quiescence ? double(row.commits) / double(row.quiescence) : 0.0;
    row.commits_per_kevent = row.events ? 1000.0 * double(row.commits) / double(row.events) : 0.0;
    return row;
}

void check(std::vector<AssertionResult>& out, const std::string& name, bool pass,
           const std::string& detail = "") {
    out.push_back({name, pass, pass ? "" : detail});
}

}  // namespace

uint64_t commit_message_count(Protocol protocol, uint32_t concerned) {
    auto run = run_scenario(spread_commit_script(protocol, concerned));
    return protocol_message_total(run.stats);
}

uint64_t phase1_vote_count(Protocol protocol, uint32_t concerned) {
    auto run = run_scenario(spread_commit_script(protocol, concerned));
    switch (protocol) {
        case Protocol::Sbac: return run.stats.of(MsgKind::SbacPreAccept) + run.stats.of(MsgKind::SbacPreAbort);
        case Protocol::Atomix:
            return run.stats.of(MsgKind::AtomixPreAccept) + run.stats.of(MsgKind::AtomixPreAbort);
        case Protocol::Byzcuit: return run.stats.of(MsgKind::ByzPreAccept) + run.stats.of(MsgKind::ByzPreAbort);
    }
    return 0;
}

BenchReport run_bench(const BenchConfig& config) {
    BenchReport report;
    report.protocol = config.protocol;

    for (uint32_t n = 2; n <= 5; ++n)
        report.commit_messages.emplace_back(n, commit_message_count(config.protocol, n));

    if (config.protocol == Protocol::Byzcuit) {
        for (const auto& [n, messages] : report.commit_messages) {
            check(report.assertions, "commit_messages_3n_plus_1:n=" + std::to_string(n),
                  messages == 3ull * n + 1,
                  "expected " + std::to_string(3 * n + 1) + ", got " + std::to_string(messages));
        }
        // A transaction with dummies attached costs the same 3n+1 over its
        // concerned shards: 1 input shard, 2 output-only shards -> n = 3.
        {
            ScenarioScript s;
            s.name = "bench-dummy-commit";
            s.protocol = Protocol::Byzcuit;
            s.num_shards = 3;
            s.objects = {{"a0", 0, ObjectStateKind::Active, 0}};
            ScenarioTx t;
            t.name = "T";
            t.inputs = {"a0"};
            t.outputs = {{"b0", 0}, {"b1", 1}, {"b2", 2}};
            t.submit_tick = 0;
            s.transactions = {t};
            auto run = run_scenario(s);
            check(report.assertions, "commit_messages_with_dummies:n=3",
                  protocol_message_total(run.stats) == 10,
                  "got " + std::to_string(protocol_message_total(run.stats)));
        }
    }
    if (config.protocol == Protocol::Sbac) {
        for (uint32_t n = 2; n <= 5; ++n) {
            uint64_t votes = phase1_vote_count(Protocol::Sbac, n);
            check(report.assertions, "phase1_votes_n_times_n_minus_1:n=" + std::to_string(n),
                  votes == uint64_t(n) * (n - 1),
                  "expected " + std::to_string(n * (n - 1)) + ", got " + std::to_string(votes));
        }
    }

    uint32_t depth = std::max(1u, config.txs / std::max(1u, config.max_shards / 2));
    for (uint32_t shards = std::max(2u, config.min_shards); shards <= config.max_shards; shards += 2)
        report.scaling.push_back(measure(stream_script(config.protocol, shards, depth, false)));

    for (size_t i = 0; i < report.scaling.size(); ++i) {
        const auto& row = report.scaling[i];
        check(report.assertions, "all_committed:shards=" + std::to_string(row.shards),
              row.commits == (row.shards / 2) * depth,
              "committed " + std::to_string(row.commits));
        if (config.protocol == Protocol::Byzcuit && i > 0) {
            check(report.assertions, "throughput_nondecreasing:shards=" + std::to_string(row.shards),
                  row.commits_per_tick >= report.scaling[i - 1].commits_per_tick,
                  "simulated throughput dropped with added shards");
        }
    }

    if (config.protocol == Protocol::Byzcuit) {
        uint32_t shards = 6;
        report.dummy_impact.push_back(measure(stream_script(config.protocol, shards, depth, false)));
        report.dummy_impact.push_back(measure(stream_script(config.protocol, shards, depth, true)));
        const auto& plain = report.dummy_impact[0];
        const auto& forced = report.dummy_impact[1];
        check(report.assertions, "dummies_strictly_reduce_throughput",
              forced.commits_per_kevent < plain.commits_per_kevent,
              "forced dummies did not reduce simulated throughput");
        check(report.assertions, "dummies_add_messages",
              forced.protocol_messages > plain.protocol_messages);
    }
    return report;
}

std::string render_bench_report(const BenchReport& report) {
    using json = nlohmann::ordered_json;
    auto fixed3 = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3f", v);
        return std::string(buf);
    };
    json j;
    j["report_version"] = 1;
    j["kind"] = "bench";
    j["protocol"] = to_string(report.protocol);
    json commits = json::array();
    for (const auto& [n, messages] : report.commit_messages)
        commits.push_back({{"concerned_shards", n}, {"messages_per_commit", messages}});
    j["commit_messages"] = commits;
    auto rows_json = [&](const std::vector<BenchRow>& rows) {
        json out = json::array();
        for (const auto& row : rows) {
            out.push_back({{"shards", row.shards},
                           {"commits", row.commits},
                           {"protocol_messages", row.protocol_messages},
                           {"events", row.events},
                           {"quiescence_tick", row.quiescence},
                           {"commits_per_tick", fixed3(row.commits_per_tick)},
                           {"commits_per_kevent", fixed3(row.commits_per_kevent)}});
        }
        return out;
    };
    j["scaling"] = rows_json(report.scaling);
    if (!report.dummy_impact.empty()) j["dummy_impact"] = rows_json(report.dummy_impact);
    json asserts = json::array();
    for (const auto& a : report.assertions) {
        json e;
        e["name"] = a.name;
        e["pass"] = a.pass;
        if (!a.detail.empty()) e["detail"] = a.detail;
        asserts.push_back(e);
    }
    j["assertions"] = asserts;
    j["pass"] = report.pass();
    return j.dump(2) + "\n";
}

}  // namespace shardsim
