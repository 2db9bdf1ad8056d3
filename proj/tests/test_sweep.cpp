#include "doctest.h"

#include "shardsim/sweep.hpp"

using namespace shardsim;

TEST_SUITE_BEGIN("sweep");

namespace {

std::string row6_world() {
    // Table I rows 3 and 6 share this final shape: shard 1 aborted and
    // released x1 while shard 2 committed and shard 3 created y3.
    return "x1=active;x2=inactive;y1=absent;y2=active;y3=active;";
}

std::string table4_row4_world() {
    // Inputs usable again while every output exists.
    return "x1=active;x2=active;y1=active;y2=active;y3=active;";
}

}  // namespace

TEST_CASE("sweep baselines conclude cleanly") {
    for (Protocol p : {Protocol::Sbac, Protocol::Atomix, Protocol::Byzcuit}) {
        auto run = run_scenario(sweep_script(p));
        INFO(to_string(p));
        CHECK_FALSE(run.any_inconsistent());
        CHECK(run.verdict_of("T")->outcome == Classification::ConsistentCommit);
        CHECK(run.verdict_of("Tp")->outcome == Classification::ConsistentAbort);
    }
}

TEST_CASE("guard rejects oversized bounds") {
    SweepBounds bounds;
    bounds.max_shards = 4;
    CHECK_THROWS_AS(run_sweep(Protocol::Sbac, bounds), SweepGuardError);
    SweepBounds tight;
    tight.schedule_guard = 10;
    CHECK_THROWS_AS(run_sweep(Protocol::Sbac, tight), SweepGuardError);
}

TEST_CASE("single-injection sweeps find the table attacks quickly") {
    SweepBounds bounds;
    bounds.max_injections = 1;

    auto sbac = run_sweep(Protocol::Sbac, bounds);
    INFO("sbac inconsistent worlds: ", sbac.inconsistent_worlds.size());
    CHECK(sbac.inconsistent() >= 1);
    CHECK(sbac.inconsistent_worlds.contains(row6_world()));

    auto atomix = run_sweep(Protocol::Atomix, bounds);
    CHECK(atomix.inconsistent() >= 1);

    auto byz = run_sweep(Protocol::Byzcuit, bounds);
    CHECK(byz.inconsistent() == 0);
    CHECK(byz.lemma1_violations == 0);
}

TEST_CASE("paired injections reach the decision-replay end state on atomix") {
    // Re-activating both inputs after the commit needs two copies of the
    // recorded abort, one per input shard.
    auto atomix = run_sweep(Protocol::Atomix, {});
    CHECK(atomix.inconsistent() >= 1);
    CHECK(atomix.inconsistent_worlds.contains(table4_row4_world()));
}

TEST_CASE("sweep results are deterministic across worker counts") {
    SweepBounds bounds;
    bounds.max_injections = 1;
    auto one = run_sweep(Protocol::Sbac, bounds, 1);
    auto many = run_sweep(Protocol::Sbac, bounds, 4);
    CHECK(one.by_class == many.by_class);
    CHECK(one.inconsistent_worlds == many.inconsistent_worlds);
}

TEST_SUITE_END();
