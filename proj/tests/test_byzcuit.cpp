#include "doctest.h"

#include <random>

#include "helpers.hpp"

using namespace shardsim;
using namespace shardsim::testing;

namespace {

// Active non-dummy objects minted by clone, i.e. not declared in the script.
std::vector<ObjectRecord> minted_actives(const RunOutcome& run, ShardId shard) {
    std::vector<ObjectRecord> out;
    for (const auto& [id, rec] : run.final_world.objects) {
        if (id.dummy || rec.shard != shard) continue;
        if (run.object_names.contains(id)) continue;
        if (rec.state == ObjectStateKind::Active) out.push_back(rec);
    }
    return out;
}

size_t active_dummies(const RunOutcome& run, ShardId shard) {
    size_t n = 0;
    for (const auto& [id, rec] : run.final_world.objects)
        if (id.dummy && rec.shard == shard && rec.state == ObjectStateKind::Active) ++n;
    return n;
}

}  // namespace

TEST_SUITE_BEGIN("byzcuit");

TEST_CASE("commit attaches a dummy for the output-only shard") {
    auto run = run_scenario(canonical_script(Protocol::Byzcuit));
    CHECK(run.verdict_of("T")->outcome == Classification::ConsistentCommit);
    CHECK(run.state_of("x1") == "inactive");
    CHECK(run.state_of("y3") == "active");

    // Shard 2 was forced into phase 1 through its dummy: a pre-accept vote
    // and a consumed-then-replaced dummy.
    CHECK(action_logged(run, 2, ActionKind::VotePreAccept, "T"));
    CHECK(active_dummies(run, 2) == 8);  // consumed dummy replaced, pool restored
    const auto& inst = run.instances.at(run.txn_ids.at("T")).front();
    CHECK(inst.submission.txn->inputs.size() == 3);
    CHECK(inst.submission.txn->inputs.back().dummy);
    CHECK(inst.submission.tx_seq == 0);

    // 3 submissions + 3 votes + 3 decisions + 1 notification.
    uint64_t protocol_msgs = run.stats.of(MsgKind::SubmitTx) + run.stats.of(MsgKind::ByzPreAccept) +
                             run.stats.of(MsgKind::ByzPreAbort) + run.stats.of(MsgKind::ByzAccept) +
                             run.stats.of(MsgKind::ByzAbort) + run.stats.of(MsgKind::Notify);
    CHECK(protocol_msgs == 10);
}

TEST_CASE("attach_dummies is a no-op without output-only shards") {
    ScenarioScript s;
    s.protocol = Protocol::Byzcuit;
    s.num_shards = 2;
    s.objects = {{"a", 0, ObjectStateKind::Active, 0}};
    s.transactions = {make_tx("T", {"a"}, {{"b", 0}}, 0)};
    auto run = run_scenario(s);
    CHECK(run.instances.at(run.txn_ids.at("T")).front().submission.txn->inputs.size() == 1);
    CHECK(run.verdict_of("T")->outcome == Classification::ConsistentCommit);
}

TEST_CASE("attach_dummies adds one dummy per output-only shard") {
    // One input on shard 0, outputs on shards 1 and 2: two dummies attached.
    ScenarioScript s;
    s.protocol = Protocol::Byzcuit;
    s.num_shards = 3;
    s.objects = {{"a", 0, ObjectStateKind::Active, 0}};
    s.transactions = {make_tx("T", {"a"}, {{"b1", 1}, {"b2", 2}}, 0)};
    auto run = run_scenario(s);
    const auto& txn = *run.instances.at(run.txn_ids.at("T")).front().submission.txn;
    REQUIRE(txn.inputs.size() == 3);
    CHECK(txn.inputs[1].dummy);
    CHECK(txn.inputs[2].dummy);
    CHECK(shard_of(txn.inputs[1], 3) == 1);
    CHECK(shard_of(txn.inputs[2], 3) == 2);
    CHECK(run.verdict_of("T")->outcome == Classification::ConsistentCommit);
}

TEST_CASE("every generated transaction gets exactly one dummy per output-only shard") {
    std::mt19937_64 rng(33);
    ShardConfig cfg;
    cfg.num_shards = 4;
    for (int trial = 0; trial < 200; ++trial) {
        World world{cfg};
        std::vector<std::unique_ptr<ShardActorBase>> owned;
        std::vector<ShardActorBase*> shards;
        for (ShardId s = 0; s < cfg.num_shards; ++s) {
            auto shard = std::make_unique<ByzShard>(s, cfg, 99);
            for (uint32_t k = 0; k < cfg.dummy_pool_size; ++k)
                shard->put_object(ObjectRecord{make_dummy_id(s, k), ObjectStateKind::Active, 0, s});
            shards.push_back(shard.get());
            owned.push_back(std::move(shard));
        }
        Transaction base;
        base.id = 1 + trial;
        size_t ni = 1 + rng() % 3;
        for (size_t i = 0; i < ni; ++i) base.inputs.push_back(make_object_id(trial * 100 + i * 7));
        size_t no = rng() % 4;
        for (size_t o = 0; o < no; ++o) {
            uint64_t raw = 10000 + trial * 100 + o;
            base.outputs.push_back({make_object_id(raw), shard_of(make_object_id(raw), cfg.num_shards)});
        }
        Transaction augmented = attach_dummies(base, shards, world, cfg.num_shards);
        for (ShardId s : output_only_shards(base, cfg.num_shards)) {
            size_t dummies_on_s = 0;
            for (const auto& in : augmented.inputs)
                if (in.dummy && shard_of(in, cfg.num_shards) == s) dummies_on_s++;
            CHECK(dummies_on_s == 1);
        }
        CHECK(output_only_shards(augmented, cfg.num_shards).empty());
        CHECK(transaction_well_formed(augmented, cfg.num_shards));
    }
}

TEST_CASE("a decision without enough valid vote certificates is ignored") {
    // n-1 genuine pre-accepts plus one forged certificate cannot form an
    // Accept any shard honors.
    auto s = canonical_script(Protocol::Byzcuit);
    auto sim = build_sim(s);
    sim->world->run_to_quiescence();  // T commits; shards now hold persisted votes

    // Re-open a session at shard 0 by resubmitting with a fresh s_T.
    auto resub = std::make_shared<Transaction>(
        *sim->submissions.find_latest(sim->txn_ids.at("T"))->txn);
    Message submit;
    submit.kind = MsgKind::SubmitTx;
    submit.role = SenderRole::Client;
    submit.txn = resub;
    submit.tx_seq = 9;  // new pair (T, 9), cached on receipt
    sim->world->submit(sim->layout.client(0), 0, submit, sim->world->now() + 1);
    sim->world->run_to_quiescence();
    auto* shard0 = dynamic_cast<ByzShard*>(sim->shards[0]);
    REQUIRE(shard0->has_cached(resub->id, 9));

    Message accept;
    accept.kind = MsgKind::ByzAccept;
    accept.role = SenderRole::TxManager;
    accept.txn = resub;
    accept.tx_seq = 9;
    for (ShardId v = 0; v < 3; ++v) {
        VoteCert vc;
        vc.shard = v;
        vc.pre_accept = true;
        vc.tx_seq = 9;
        vc.cert = v == 2 ? forge_cert(v, sim->cfg, 1) : make_shard_cert(v, sim->cfg, 1);
        accept.votes.push_back(vc);
    }
    auto before = take_snapshot(sim->shards);
    sim->world->submit(99, 0, accept, sim->world->now() + 1, true);
    sim->world->run_to_quiescence();
    auto after = take_snapshot(sim->shards);
    CHECK(before.objects == after.objects);  // ignored as malformed
    bool malformed_logged = false;
    for (const auto& e : sim->world->decision_log())
        if (e.action == ActionKind::IgnoreMalformed) malformed_logged = true;
    CHECK(malformed_logged);
}

TEST_CASE("stale session number is pre-aborted and bumped past the replay window") {
    auto s = canonical_script(Protocol::Byzcuit);
    s.objects[0].seq = 5;  // x1 ahead of the forced session number
    s.transactions[0].tx_seq_override = 2;
    auto run = run_scenario(s);
    CHECK(action_logged(run, 0, ActionKind::VotePreAbort, "T"));
    CHECK(run.verdict_of("T")->outcome == Classification::ConsistentAbort);
    // Abort updates sequence numbers to s_T + 1 without going backwards.
    const ObjectRecord* x1 = run.final_world.find(run.object_ids.at("x1"));
    CHECK(x1->seq == 5);
    const ObjectRecord* x2 = run.final_world.find(run.object_ids.at("x2"));
    CHECK(x2->seq == 3);
}

TEST_CASE("aborted transaction bumps every input and dummy to s_T + 1") {
    auto s = canonical_script(Protocol::Byzcuit);
    s.objects[1].state = ObjectStateKind::Inactive;  // x2 forces the abort
    auto run = run_scenario(s);
    CHECK(run.verdict_of("T")->outcome == Classification::ConsistentAbort);
    const ObjectRecord* x1 = run.final_world.find(run.object_ids.at("x1"));
    CHECK(x1->state == ObjectStateKind::Active);
    CHECK(x1->seq == 1);
    CHECK(run.state_of("y3") == "absent");
    CHECK(active_dummies(run, 2) == 8);  // the locked dummy was released
}

TEST_CASE("replayed decision without a cached pair is ignored bit-identically") {
    auto s = canonical_script(Protocol::Byzcuit);
    auto baseline = run_scenario(s);
    ActorId tm = 4;  // 3 shards + 1 client
    size_t idx = find_recorded(baseline.recording, MsgKind::ByzAccept, tm, baseline.txn_ids.at("T"));
    auto attack = s;
    attack.injections.push_back({idx, "shard:2", 15});
    auto run = run_scenario(attack, &baseline.recording);
    CHECK(run.named_world_fingerprint() == baseline.named_world_fingerprint());
    bool ignored = false;
    for (const auto& e : run.log)
        if (e.action == ActionKind::IgnoreReplay && e.actor == 2) ignored = true;
    CHECK(ignored);
    CHECK_FALSE(run.any_inconsistent());
}

TEST_CASE("tm crash is survived via takeover with an identical final world") {
    auto clean = run_scenario(canonical_script(Protocol::Byzcuit));

    auto s = canonical_script(Protocol::Byzcuit);
    s.crashes.push_back({"tm:0", 2});  // dies while votes are in flight
    s.takeovers.push_back({"T", 20});
    auto run = run_scenario(s);
    CHECK(run.decided(run.txn_ids.at("T")));
    CHECK(run.verdict_of("T")->outcome == Classification::ConsistentCommit);
    CHECK(run.named_world_fingerprint() == clean.named_world_fingerprint());
    CHECK(run.stats.of(MsgKind::VoteRequest) == 3);
}

TEST_CASE("tm crash before any progress is also survived") {
    auto s = canonical_script(Protocol::Byzcuit);
    s.crashes.push_back({"tm:0", 0});
    s.takeovers.push_back({"T", 20});
    auto run = run_scenario(s);
    CHECK(run.verdict_of("T")->outcome == Classification::ConsistentCommit);
}

TEST_CASE("racing takeover actors assemble the same decision") {
    std::string fingerprint;
    // Both orderings of two takeover firings produce identical worlds.
    for (auto ticks : {std::pair<Tick, Tick>{20, 24}, std::pair<Tick, Tick>{24, 20}}) {
        auto s = canonical_script(Protocol::Byzcuit);
        s.crashes.push_back({"tm:0", 2});
        s.takeovers.push_back({"T", ticks.first});
        s.takeovers.push_back({"T", ticks.second});
        auto run = run_scenario(s);
        CHECK(run.verdict_of("T")->outcome == Classification::ConsistentCommit);
        if (fingerprint.empty()) fingerprint = run.named_world_fingerprint();
        else CHECK(run.named_world_fingerprint() == fingerprint);
    }
}

TEST_CASE("abort bump across the overflow margin triggers the clone") {
    auto s = canonical_script(Protocol::Byzcuit);
    s.overflow_threshold = 16;
    s.clone_margin = 1;
    s.objects[1].state = ObjectStateKind::Inactive;   // x2 forces the abort
    s.transactions[0].tx_seq_override = 14;           // bump lands at 15 = threshold - 1
    auto run = run_scenario(s);
    CHECK(run.verdict_of("T")->outcome == Classification::ConsistentAbort);
    CHECK(run.state_of("x1") == "inactive");  // replaced by its clone
    auto clones = minted_actives(run, 0);
    REQUIRE(clones.size() == 1);
    CHECK(clones[0].seq == 0);
}

TEST_CASE("clone far below the margin does not fire") {
    auto s = canonical_script(Protocol::Byzcuit);
    s.overflow_threshold = 16;
    s.objects[1].state = ObjectStateKind::Inactive;
    s.transactions[0].tx_seq_override = 3;
    auto run = run_scenario(s);
    CHECK(run.state_of("x1") == "active");
    CHECK(minted_actives(run, 0).empty());
}

TEST_CASE("manual clone rejects locked and inactive objects") {
    ShardConfig cfg;
    World world{cfg};
    ByzShard shard(0, cfg, 99);
    shard.put_object(ObjectRecord{make_object_id(0), ObjectStateKind::Inactive, 0, 0});
    shard.put_object(ObjectRecord{make_object_id(3), ObjectStateKind::Locked, 0, 0});
    CHECK_THROWS_AS(shard.clone_object(world, make_object_id(0)), std::logic_error);
    CHECK_THROWS_AS(shard.clone_object(world, make_object_id(3)), std::logic_error);
    CHECK_THROWS_AS(shard.clone_object(world, make_object_id(6)), std::logic_error);
}

TEST_CASE("cloned object remains spendable") {
    auto s = canonical_script(Protocol::Byzcuit);
    s.overflow_threshold = 16;
    s.objects[1].state = ObjectStateKind::Inactive;
    s.transactions[0].tx_seq_override = 14;

    auto sim = build_sim(s);
    sim->world->run_to_quiescence();
    // Find the clone minted for x1 on shard 0.
    ObjectId clone_id{};
    for (const auto& [id, rec] : sim->shards[0]->objects())
        if (!id.dummy && !sim->object_names.contains(id) && rec.state == ObjectStateKind::Active) clone_id = id;
    REQUIRE(clone_id.raw != 0);

    auto spend = std::make_shared<Transaction>();
    spend->id = 77;
    spend->inputs = {clone_id};
    spend->outputs = {{make_object_id(clone_id.raw + 3), 0}};
    byz_submit_now(*sim->world, sim->submissions, sim->shards, sim->cfg, sim->layout.client(0), spend);
    sim->world->run_to_quiescence();
    CHECK(sim->shards[0]->find_object(clone_id)->state == ObjectStateKind::Inactive);
    CHECK(sim->shards[0]->find_object(spend->outputs[0].id)->state == ObjectStateKind::Active);
}

TEST_CASE("dummy exhaustion is a scenario error") {
    auto s = canonical_script(Protocol::Byzcuit);
    s.dummy_pool_size = 0;
    CHECK_THROWS_AS(run_scenario(s), DummyExhausted);
}

TEST_CASE("adversary-free runs are atomic and the session log goes stale") {
    for (uint64_t seed = 200; seed < 250; ++seed) {
        auto run = run_scenario(random_script(Protocol::Byzcuit, seed));
        for (const auto& [txn, verdict] : run.verdicts) {
            INFO("seed ", seed, " txn ", run.txn_name(txn), " -> ", to_string(verdict.outcome), " ",
                 verdict.detail);
            CHECK((verdict.outcome == Classification::ConsistentCommit ||
                   verdict.outcome == Classification::ConsistentAbort));
        }
        CHECK(run.lemma1_ok);
        CHECK(check_conflict_exclusivity(run.history()));
        CHECK(check_validity(run.history()));
        CHECK(check_liveness(run.history()));
    }
}

TEST_SUITE_END();
