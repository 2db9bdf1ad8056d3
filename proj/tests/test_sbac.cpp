#include "doctest.h"

#include "helpers.hpp"

using namespace shardsim;
using namespace shardsim::testing;

TEST_SUITE_BEGIN("sbac");

TEST_CASE("valid transaction commits across three shards") {
    auto run = run_scenario(canonical_script(Protocol::Sbac));
    CHECK(run.state_of("x1") == "inactive");
    CHECK(run.state_of("x2") == "inactive");
    CHECK(run.state_of("y1") == "active");
    CHECK(run.state_of("y2") == "active");
    CHECK(run.state_of("y3") == "active");
    CHECK(run.verdict_of("T")->outcome == Classification::ConsistentCommit);

    // Each input shard locks, votes pre-accept, decides commit locally.
    CHECK(action_logged(run, 0, ActionKind::VotePreAccept, "T"));
    CHECK(action_logged(run, 1, ActionKind::VotePreAccept, "T"));
    CHECK(action_logged(run, 0, ActionKind::Lock, "T", "x1"));
    CHECK(action_logged(run, 0, ActionKind::DecideCommit, "T"));
    CHECK(action_logged(run, 1, ActionKind::DecideCommit, "T"));
    CHECK(action_logged(run, 2, ActionKind::CreateOutput, "T", "y3"));

    // Two input shards broadcast to each other: n(n-1) = 2 phase-1 votes.
    CHECK(run.stats.of(MsgKind::SbacPreAccept) == 2);
    CHECK(run.stats.of(MsgKind::SbacPreAbort) == 0);
}

TEST_CASE("locked input forces pre-abort and a clean unlock") {
    auto s = canonical_script(Protocol::Sbac);
    s.objects.push_back({"xa2", 1, ObjectStateKind::Inactive, 0});
    // Tp locks x1 on shard 0; shard 1 pre-aborts it over the inactive xa2.
    auto tp = make_tx("Tp", {"x1", "xa2"}, {{"w1", 0}}, 0);
    s.transactions = {tp, s.transactions[0]};
    s.transactions[1].submit_tick = 1;
    auto run = run_scenario(s);

    CHECK(action_logged(run, 0, ActionKind::VotePreAbort, "T"));
    CHECK(action_logged(run, 1, ActionKind::VotePreAccept, "T"));
    CHECK(action_logged(run, 1, ActionKind::Unlock, "T", "x2"));
    CHECK(run.state_of("x1") == "active");
    CHECK(run.state_of("x2") == "active");
    CHECK(run.state_of("y2") == "absent");
    CHECK(run.state_of("w1") == "absent");
    CHECK(run.verdict_of("T")->outcome == Classification::ConsistentAbort);
    CHECK(run.verdict_of("Tp")->outcome == Classification::ConsistentAbort);
}

TEST_CASE("inactive input forces pre-abort") {
    auto s = canonical_script(Protocol::Sbac);
    s.objects[0].state = ObjectStateKind::Inactive;
    auto run = run_scenario(s);
    CHECK(action_logged(run, 0, ActionKind::VotePreAbort, "T"));
    CHECK(run.state_of("x1") == "inactive");
    CHECK(run.state_of("x2") == "active");
    CHECK(run.verdict_of("T")->outcome == Classification::ConsistentAbort);
}

TEST_CASE("output shard recreates a spent output on a replayed accept") {
    // Commit, spend y3, then replay the recorded Accept to shard 2.
    auto s = canonical_script(Protocol::Sbac);
    s.transactions.push_back(make_tx("T2", {"y3"}, {{"z3", 2}}, 6));
    auto baseline = run_scenario(s);
    CHECK(baseline.state_of("y3") == "inactive");
    CHECK(baseline.state_of("z3") == "active");

    size_t idx = find_recorded(baseline.recording, MsgKind::SbacAccept, 0, baseline.txn_ids.at("T"));
    auto attack = s;
    attack.injections.push_back({idx, "shard:2", 12});
    auto run = run_scenario(attack, &baseline.recording);
    CHECK(run.state_of("y3") == "active");  // resurrected
    CHECK(run.state_of("z3") == "active");
    CHECK(run.verdict_of("T2")->outcome == Classification::Inconsistent);
    CHECK(run.verdict_of("T")->outcome == Classification::ConsistentCommit);
}

TEST_CASE("replayed abort at the output shard does nothing") {
    auto s = canonical_script(Protocol::Sbac);
    s.objects[0].state = ObjectStateKind::Inactive;  // genuine abort run
    auto baseline = run_scenario(s);
    size_t idx = find_recorded(baseline.recording, MsgKind::SbacAbort, 1, baseline.txn_ids.at("T"));
    auto attack = s;
    attack.injections.push_back({idx, "shard:2", 10});
    auto run = run_scenario(attack, &baseline.recording);
    CHECK(run.state_of("y3") == "absent");
    CHECK(run.named_world_fingerprint() == baseline.named_world_fingerprint());
}

TEST_CASE("single input shard decides alone with zero cross-shard votes") {
    ScenarioScript s;
    s.protocol = Protocol::Sbac;
    s.num_shards = 2;
    s.objects = {{"a", 0, ObjectStateKind::Active, 0}};
    s.transactions = {make_tx("T", {"a"}, {{"b", 0}, {"c", 1}}, 0)};
    auto run = run_scenario(s);
    CHECK(run.verdict_of("T")->outcome == Classification::ConsistentCommit);
    CHECK(run.stats.of(MsgKind::SbacPreAccept) == 0);
    CHECK(run.state_of("c") == "active");
}

TEST_CASE("adversary-free runs are atomic for every transaction") {
    for (uint64_t seed = 0; seed < 60; ++seed) {
        auto run = run_scenario(random_script(Protocol::Sbac, seed));
        for (const auto& [txn, verdict] : run.verdicts) {
            INFO("seed ", seed, " txn ", run.txn_name(txn), " -> ", to_string(verdict.outcome), " ",
                 verdict.detail);
            CHECK((verdict.outcome == Classification::ConsistentCommit ||
                   verdict.outcome == Classification::ConsistentAbort));
        }
        auto hist = run.history();
        CHECK(check_conflict_exclusivity(hist));
        CHECK(check_validity(hist));
        CHECK(check_liveness(hist));
    }
}

TEST_SUITE_END();
