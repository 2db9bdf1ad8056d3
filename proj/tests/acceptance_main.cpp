// Acceptance suite: drives every headline guarantee end to end and prints
// one pass/fail line per criterion.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "shardsim/cli.hpp"

using namespace shardsim;

namespace {

int failures = 0;

void report(int criterion, const std::string& what, bool pass, const std::string& detail = "") {
    std::printf("%s  criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!pass) failures++;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---- criterion 1: every table row reproduces, deterministically, <1s ----

void criterion_1() {
    bool all_ok = true;
    std::string detail;
    for (int table = 1; table <= 4 && all_ok; ++table) {
        for (int row = 1; row <= rows_in_table(table); ++row) {
            auto start = std::chrono::steady_clock::now();
            auto outcome = run_table_attack(table, row, native_protocol(table));
            double elapsed = seconds_since(start);
            if (!outcome.matched || elapsed >= 1.0) {
                all_ok = false;
                std::ostringstream why;
                why << "table " << table << " row " << row;
                if (!outcome.matched) {
                    for (const auto& c : outcome.checks)
                        if (!c.pass) why << " [" << c.name << ": " << c.detail << "]";
                } else {
                    why << " took " << elapsed << "s";
                }
                detail = why.str();
                break;
            }
        }
    }
    report(1, "all 31 rows of the four attack tables reproduce exactly under their native protocol",
           all_ok, detail);
}

// ---- criteria 2 and 3: exhaustive replay sweeps ----

void criteria_2_and_3() {
    auto start = std::chrono::steady_clock::now();

    auto byz = run_sweep(Protocol::Byzcuit);
    auto sbac = run_sweep(Protocol::Sbac);
    auto atomix = run_sweep(Protocol::Atomix);
    double elapsed = seconds_since(start);

    // Table-row end states in the sweep world's coordinates. Several table
    // rows share one final world (rows 2 and 8, and rows 3 and 6, differ
    // only in which message was raced), so the distinct set is smaller than
    // the row count.
    std::string row2_world = "x1=inactive;x2=active;y1=active;y2=absent;y3=active;";
    std::string row6_world = "x1=active;x2=inactive;y1=absent;y2=active;y3=active;";
    std::string spent_commit_world = "x1=inactive;x2=inactive;y1=active;y2=active;y3=active;";
    std::string row4_world = "x1=active;x2=active;y1=active;y2=active;y3=active;";

    {
        std::ostringstream detail;
        detail << "byzcuit " << byz.schedules << " schedules, " << byz.inconsistent()
               << " inconsistent; sbac " << sbac.inconsistent() << " over "
               << sbac.inconsistent_worlds.size() << " worlds; atomix " << atomix.inconsistent()
               << "; " << elapsed << "s";
        bool ok = byz.inconsistent() == 0 && sbac.inconsistent() >= 1 && atomix.inconsistent() >= 1 &&
                  sbac.inconsistent_worlds.contains(row2_world) &&
                  sbac.inconsistent_worlds.contains(row6_world) &&
                  sbac.inconsistent_worlds.contains(spent_commit_world) &&
                  sbac.inconsistent_worlds.size() == 5 &&
                  atomix.inconsistent_worlds.contains(row4_world) && elapsed < 300.0;
        report(2,
               "replay sweep: byzcuit yields zero inconsistent schedules; sbac and atomix reach the "
               "table-row end states",
               ok, detail.str());
    }
    report(3, "no recorded message of a completed byzcuit transaction ever carries a fresh s_T",
           byz.lemma1_violations == 0,
           std::to_string(byz.lemma1_violations) + " violations");
}

// ---- criterion 4: liveness / consistency / validity ----

ScenarioScript canonical_byz() {
    ScenarioScript s;
    s.name = "acceptance-byz";
    s.protocol = Protocol::Byzcuit;
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

void criterion_4() {
    auto start = std::chrono::steady_clock::now();

    // (a) Liveness: crash the TM at every tick of the protocol's lifetime;
    // one takeover actor must still drive every transaction to a decision.
    auto clean = run_scenario(canonical_byz());
    bool live_ok = true;
    std::string live_detail;
    for (Tick crash = 0; crash <= clean.quiescence_tick + 1 && live_ok; ++crash) {
        auto s = canonical_byz();
        s.crashes.push_back({"tm:0", crash});
        s.takeovers.push_back({"T", 20});
        auto run = run_scenario(s);
        bool decided = run.decided(run.txn_ids.at("T"));
        bool consistent = !run.any_inconsistent();
        bool same_world = run.named_world_fingerprint() == clean.named_world_fingerprint();
        if (!decided || !consistent || !same_world) {
            live_ok = false;
            live_detail = "tm crash at tick " + std::to_string(crash);
        }
    }
    report(4, "(a) liveness: tm crash at every tick is absorbed by a takeover actor", live_ok, live_detail);

    // (b) Consistency: two transactions sharing x1, every submission
    // interleaving; at most one may commit.
    bool excl_ok = true;
    std::string excl_detail;
    for (Tick ta = 0; ta <= 6 && excl_ok; ++ta) {
        for (Tick tb = 0; tb <= 6; ++tb) {
            ScenarioScript s;
            s.name = "acceptance-conflict";
            s.protocol = Protocol::Byzcuit;
            s.num_shards = 3;
            s.objects = {{"x1", 0, ObjectStateKind::Active, 0},
                         {"u1", 1, ObjectStateKind::Active, 0},
                         {"u2", 2, ObjectStateKind::Active, 0}};
            ScenarioTx a, b;
            a.name = "Ta";
            a.inputs = {"x1", "u1"};
            a.outputs = {{"p", 1}};
            a.submit_tick = ta;
            b.name = "Tb";
            b.inputs = {"x1", "u2"};
            b.outputs = {{"q", 2}};
            b.submit_tick = tb;
            s.transactions = {a, b};
            auto run = run_scenario(s);
            if (!check_conflict_exclusivity(run.history()) || run.any_inconsistent()) {
                excl_ok = false;
                excl_detail = "ta=" + std::to_string(ta) + " tb=" + std::to_string(tb);
                break;
            }
        }
    }
    report(4, "(b) consistency: conflicting transactions never both commit, over all interleavings",
           excl_ok, excl_detail);

    // (c) Validity: a spent input and a never-created input both doom the
    // transaction, under all three protocols.
    bool valid_ok = true;
    std::string valid_detail;
    for (Protocol p : {Protocol::Sbac, Protocol::Atomix, Protocol::Byzcuit}) {
        ScenarioScript s;
        s.name = "acceptance-validity";
        s.protocol = p;
        s.num_shards = 3;
        s.objects = {{"spent", 0, ObjectStateKind::Inactive, 0},
                     {"xa", 1, ObjectStateKind::Inactive, 0},
                     {"ok1", 1, ObjectStateKind::Active, 0},
                     {"ok2", 2, ObjectStateKind::Active, 0}};
        ScenarioTx doomed;  // aborts, so its output never exists
        doomed.name = "Tdoomed";
        doomed.inputs = {"ok1", "xa"};
        doomed.outputs = {{"ghost", 2}};
        doomed.submit_tick = 0;
        ScenarioTx spender;  // references the spent input
        spender.name = "Tspent";
        spender.inputs = {"spent", "ok2"};
        spender.outputs = {{"w1", 0}};
        spender.submit_tick = 0;
        ScenarioTx ghostly;  // references the never-created object
        ghostly.name = "Tghost";
        ghostly.inputs = {"ghost", "ok2"};
        ghostly.outputs = {{"w2", 1}};
        ghostly.submit_tick = 6;
        s.transactions = {doomed, spender, ghostly};
        auto run = run_scenario(s);
        if (!check_validity(run.history()) || run.verdict_of("Tspent")->outcome == Classification::ConsistentCommit ||
            run.verdict_of("Tghost")->outcome == Classification::ConsistentCommit) {
            valid_ok = false;
            valid_detail = to_string(p);
            break;
        }
    }
    report(4, "(c) validity: transactions over spent or nonexistent inputs never commit", valid_ok,
           valid_detail);

    double elapsed = seconds_since(start);
    report(4, "(timing) liveness/consistency/validity suites complete within a minute", elapsed < 60.0,
           std::to_string(elapsed) + "s");
}

// ---- criterion 5: exact message-complexity formulas ----

void criterion_5() {
    bool ok = true;
    std::string detail;
    for (uint32_t n = 2; n <= 5 && ok; ++n) {
        uint64_t byz = commit_message_count(Protocol::Byzcuit, n);
        uint64_t sbac = phase1_vote_count(Protocol::Sbac, n);
        if (byz != 3ull * n + 1 || sbac != uint64_t(n) * (n - 1)) {
            ok = false;
            detail = "n=" + std::to_string(n) + ": byzcuit " + std::to_string(byz) + " (want " +
                     std::to_string(3 * n + 1) + "), sbac phase-1 " + std::to_string(sbac) + " (want " +
                     std::to_string(n * (n - 1)) + ")";
        }
    }
    report(5, "fault-free commits cost exactly 3n+1 messages (byzcuit) and n(n-1) phase-1 votes (sbac)",
           ok, detail);
}

// ---- criterion 6: sequence-number overflow and the clone procedure ----

void criterion_6() {
    // A scripted aborting transaction pushes x1's sequence number across the
    // margin; the clone must fire and stay spendable.
    ScenarioScript s = canonical_byz();
    s.name = "acceptance-clone";
    s.overflow_threshold = 16;
    s.clone_margin = 1;
    s.objects[1].state = ObjectStateKind::Inactive;  // x2 forces the abort
    s.transactions[0].tx_seq_override = 14;          // bump lands at 15

    auto sim = build_sim(s);
    sim->world->run_to_quiescence();
    ObjectId clone_id{};
    for (const auto& [id, rec] : sim->shards[0]->objects())
        if (!id.dummy && !sim->object_names.contains(id) && rec.state == ObjectStateKind::Active)
            clone_id = id;
    const ObjectRecord* old_x1 = sim->shards[0]->find_object(sim->object_ids.at("x1"));
    bool fired = clone_id.raw != 0 && old_x1 && old_x1->state == ObjectStateKind::Inactive;
    bool fresh_seq = false, spendable = false;
    if (fired) {
        fresh_seq = sim->shards[0]->find_object(clone_id)->seq == 0;
        auto spend = std::make_shared<Transaction>();
        spend->id = fnv1a(reinterpret_cast<const uint8_t*>("Tspend"), 6) | 1;
        spend->inputs = {clone_id};
        spend->outputs = {{make_object_id(clone_id.raw + 3), 0}};
        byz_submit_now(*sim->world, sim->submissions, sim->shards, sim->cfg, sim->layout.client(0), spend);
        sim->world->run_to_quiescence();
        const ObjectRecord* spent = sim->shards[0]->find_object(clone_id);
        const ObjectRecord* minted = sim->shards[0]->find_object(spend->outputs[0].id);
        spendable = spent && spent->state == ObjectStateKind::Inactive && minted && minted->active();
    }
    report(6, "an abort bump across the margin clones the object to seq 0 and it remains spendable",
           fired && fresh_seq && spendable);

    // Re-run the byzcuit sweep in a world whose first abort forces clones.
    ScenarioScript post = sweep_script(Protocol::Byzcuit);
    post.name = "sweep-byzcuit-post-clone";
    post.overflow_threshold = 16;
    post.clone_margin = 1;
    post.objects[0].seq = 14;
    post.objects[1].seq = 14;
    auto base_run = run_scenario(post);
    bool cloned_in_base = false;
    for (const auto& entry : base_run.log)
        if (entry.action == ActionKind::Clone) cloned_in_base = true;
    auto swept = run_sweep(Protocol::Byzcuit, {}, 0, &post);
    report(6, "the replay sweep re-run across the clone still yields zero inconsistent schedules",
           cloned_in_base && swept.inconsistent() == 0 && swept.lemma1_violations == 0,
           "clone fired: " + std::string(cloned_in_base ? "yes" : "no") + ", inconsistent: " +
               std::to_string(swept.inconsistent()));
}

// ---- criterion 7: byte-identical reports on re-runs ----

void criterion_7() {
    bool ok = true;
    std::string detail;

    // Attack reports.
    {
        auto a = run_table_attack(1, 6, Protocol::Sbac);
        auto b = run_table_attack(1, 6, Protocol::Sbac);
        if (render_report(a.run, a.checks) != render_report(b.run, b.checks)) {
            ok = false;
            detail = "attack report diverged";
        }
    }
    // Sweep summaries, including across worker counts.
    if (ok) {
        SweepBounds bounds;
        bounds.max_injections = 1;
        auto a = run_sweep(Protocol::Atomix, bounds, 1);
        auto b = run_sweep(Protocol::Atomix, bounds, 4);
        if (a.by_class != b.by_class || a.inconsistent_worlds != b.inconsistent_worlds) {
            ok = false;
            detail = "sweep result diverged across worker counts";
        }
    }
    // Bench reports.
    if (ok) {
        BenchConfig cfg;
        cfg.protocol = Protocol::Byzcuit;
        cfg.min_shards = 2;
        cfg.max_shards = 6;
        cfg.txs = 12;
        if (render_bench_report(run_bench(cfg)) != render_bench_report(run_bench(cfg))) {
            ok = false;
            detail = "bench report diverged";
        }
    }
    // Scenario reports (also self-checked inside cmd_run).
    if (ok) {
        auto run1 = run_scenario(canonical_byz());
        auto run2 = run_scenario(canonical_byz());
        if (render_report(run1, {}) != render_report(run2, {})) {
            ok = false;
            detail = "scenario report diverged";
        }
    }
    report(7, "identical runs render byte-identical reports", ok, detail);
}

// ---- criterion 8: declared substitute for cloud-scale throughput figures ----

void criterion_8() {
    std::printf("note: absolute cloud throughput/latency figures are not reproducible at desk scale;\n"
                "      the substitute below checks the scaling shape and the dummy-object cost only.\n");
    BenchConfig cfg;
    cfg.protocol = Protocol::Byzcuit;
    cfg.min_shards = 2;
    cfg.max_shards = 10;
    cfg.txs = 30;
    auto bench = run_bench(cfg);
    std::string detail;
    for (const auto& a : bench.assertions)
        if (!a.pass) detail += a.name + " (" + a.detail + "); ";
    report(8,
           "simulated throughput is nondecreasing from 2 to 10 shards and forced dummies strictly "
           "reduce it",
           bench.pass(), detail);
}

}  // namespace

int main() {
    auto start = std::chrono::steady_clock::now();
    criterion_1();
    criteria_2_and_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    std::printf("acceptance finished in %.1fs: %s\n", seconds_since(start),
                failures == 0 ? "all criteria pass" : (std::to_string(failures) + " failures").c_str());
    return failures == 0 ? 0 : 1;
}
