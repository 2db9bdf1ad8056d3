#include "shardsim/cli.hpp"

#include <fstream>
#include <iomanip>

namespace shardsim {

namespace {

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

void print_world(const RunOutcome& run, std::ostream& out) {
    std::map<ShardId, std::vector<const ObjectRecord*>> by_shard;
    for (const auto& [id, rec] : run.final_world.objects)
        if (!id.dummy) by_shard[rec.shard].push_back(&rec);
    for (auto& [shard, records] : by_shard) {
        std::sort(records.begin(), records.end(), [&](const ObjectRecord* a, const ObjectRecord* b) {
            return run.object_name(a->id) < run.object_name(b->id);
        });
        out << "  shard " << shard << ":";
        for (const ObjectRecord* rec : records)
            out << " " << run.object_name(rec->id) << "=" << to_string(rec->state)
                << "(seq " << rec->seq << ")";
        out << "\n";
    }
}

void print_verdicts(const RunOutcome& run, std::ostream& out) {
    for (const auto& [txn, verdict] : run.verdicts) {
        out << "  " << run.txn_name(txn) << ": " << to_string(verdict.outcome);
        if (!verdict.detail.empty()) out << " (" << verdict.detail << ")";
        out << "\n";
    }
}

}  // namespace

int cmd_run(const std::string& scenario_path, const std::string& out_path, std::optional<uint64_t> seed,
            std::ostream& out, std::ostream& err) {
    ScenarioScript script;
    try {
        script = load_scenario_file(scenario_path);
    } catch (const SchemaError& e) {
        err << "schema error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    if (seed) script.seed = *seed;

    try {
        RunOutcome run = run_scenario(script);
        std::vector<AssertionResult> assertions;
        if (script.expect) assertions = evaluate_expectations(run, *script.expect);
        std::string report = render_report(run, assertions);

        // Determinism self-check: the same script must reproduce the same
        // report byte for byte.
        RunOutcome again = run_scenario(script);
        if (render_report(again, script.expect ? evaluate_expectations(again, *script.expect)
                                               : std::vector<AssertionResult>{}) != report) {
            err << "internal error: report not reproducible across identical runs\n";
            return kExitFail;
        }

        if (!out_path.empty()) write_file(out_path, report);
        out << report;
        return all_pass(assertions) ? kExitPass : kExitFail;
    } catch (const SchemaError& e) {
        err << "schema error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFail;
    }
}

int cmd_attack(int table, int row, const std::string& protocol, const std::string& out_path,
               std::ostream& out, std::ostream& err) {
    auto proto = protocol_from_string(protocol);
    if (!proto) {
        err << "usage error: unknown protocol '" << protocol << "'\n";
        return kExitUsage;
    }
    TableAttackOutcome outcome;
    try {
        outcome = run_table_attack(table, row, *proto);
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    out << "table " << table << " row " << row << " under " << protocol
        << (outcome.highlighted ? " (correct-execution row, run as baseline)" : "") << "\n";
    out << "before:\n";
    {
        RunOutcome initial_view = outcome.run;
        initial_view.final_world = outcome.run.initial;
        print_world(initial_view, out);
    }
    out << "after:\n";
    print_world(outcome.run, out);
    out << "classification:\n";
    print_verdicts(outcome.run, out);
    out << "checks:\n";
    for (const auto& c : outcome.checks) {
        out << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.name;
        if (!c.detail.empty()) out << " -- " << c.detail;
        out << "\n";
    }
    out << (outcome.matched ? "row reproduced" : "row NOT reproduced") << "\n";

    if (!out_path.empty()) write_file(out_path, render_report(outcome.run, outcome.checks));
    return outcome.matched ? kExitPass : kExitFail;
}

int cmd_sweep(const std::string& protocol, uint32_t max_shards, uint32_t max_injections,
              const std::string& out_path, std::ostream& out, std::ostream& err) {
    auto proto = protocol_from_string(protocol);
    if (!proto) {
        err << "usage error: unknown protocol '" << protocol << "'\n";
        return kExitUsage;
    }
    SweepBounds bounds;
    bounds.max_shards = max_shards;
    bounds.max_injections = max_injections;
    SweepResult result;
    try {
        result = run_sweep(*proto, bounds);
    } catch (const SweepGuardError& e) {
        err << "refused: " << e.what() << "\n";
        return kExitUsage;
    }

    std::ostringstream text;
    text << "protocol: " << protocol << "\n";
    text << "corpus: " << result.corpus_size << " recorded messages, " << result.single_positions
         << " single positions, " << result.schedules << " schedules\n";
    for (const auto& [cls, count] : result.by_class) text << "  " << to_string(cls) << ": " << count << "\n";
    text << "distinct inconsistent final worlds: " << result.inconsistent_worlds.size() << "\n";
    for (const auto& [fp, via] : result.inconsistent_worlds) text << "  " << fp << "  via " << via << "\n";
    text << "fresh-session log violations: " << result.lemma1_violations << "\n";
    out << text.str();
    if (!out_path.empty()) write_file(out_path, text.str());

    if (*proto == Protocol::Byzcuit)
        return (result.inconsistent() == 0 && result.lemma1_violations == 0) ? kExitPass : kExitFail;
    return kExitPass;
}

int cmd_bench(const std::string& protocol, uint32_t min_shards, uint32_t max_shards, uint32_t txs,
              const std::string& out_path, std::ostream& out, std::ostream& err) {
    auto proto = protocol_from_string(protocol);
    if (!proto) {
        err << "usage error: unknown protocol '" << protocol << "'\n";
        return kExitUsage;
    }
    if (min_shards < 2 || max_shards < min_shards) {
        err << "usage error: need 2 <= min shards <= max shards\n";
        return kExitUsage;
    }
    BenchConfig config;
    config.protocol = *proto;
    config.min_shards = min_shards;
    config.max_shards = max_shards;
    config.txs = txs;
    BenchReport report = run_bench(config);
    std::string text = render_bench_report(report);
    out << text;
    if (!out_path.empty()) write_file(out_path, text);
    return report.pass() ? kExitPass : kExitFail;
}

}  // namespace shardsim
