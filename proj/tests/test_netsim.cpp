#include "doctest.h"

#include "shardsim/netsim.hpp"

using namespace shardsim;

TEST_SUITE_BEGIN("netsim");

namespace {

// Records every delivery it sees; emits nothing.
struct SinkActor : Actor {
    std::vector<Event> seen;
    void on_message(World&, const Event& ev) override { seen.push_back(ev); }
};

Message probe(MsgKind kind, TxnId id = 1) {
    Message m;
    m.kind = kind;
    m.role = SenderRole::Shard;
    auto txn = std::make_shared<Transaction>();
    txn->id = id;
    txn->inputs = {make_object_id(0)};
    m.txn = txn;
    return m;
}

}  // namespace

TEST_CASE("delivery follows (tick, seq_no) order") {
    World world{ShardConfig{}};
    auto* sink = new SinkActor;
    world.add_actor(std::unique_ptr<Actor>(sink));

    world.submit(0, 0, probe(MsgKind::SbacPreAccept, 1), 5);
    world.submit(0, 0, probe(MsgKind::SbacPreAccept, 2), 3);
    world.submit(0, 0, probe(MsgKind::SbacPreAccept, 3), 3);

    auto first = world.step();
    REQUIRE(first.has_value());
    CHECK(first->msg.txn->id == 2);  // earlier tick wins
    CHECK(world.now() == 3);
    auto second = world.step();
    CHECK(second->msg.txn->id == 3);  // same tick, earlier submission wins
    auto third = world.step();
    CHECK(third->msg.txn->id == 1);
    CHECK(world.now() == 5);
    CHECK_FALSE(world.step().has_value());  // quiescent
}

TEST_CASE("past-dated submission is a scheduling error") {
    World world{ShardConfig{}};
    world.add_actor(std::make_unique<SinkActor>());
    world.submit(0, 0, probe(MsgKind::SbacPreAccept), 3);
    world.step();
    CHECK(world.now() == 3);
    CHECK_THROWS_AS(world.submit(0, 0, probe(MsgKind::SbacPreAccept), 2), SchedulingError);
}

TEST_CASE("matched messages are recorded and still delivered") {
    World world{ShardConfig{}};
    auto* sink = new SinkActor;
    world.add_actor(std::unique_ptr<Actor>(sink));
    world.policy.record.record_all = false;
    world.policy.record.kinds = {MsgKind::SbacPreAbort};

    world.submit(0, 0, probe(MsgKind::SbacPreAccept), 1);
    world.submit(0, 0, probe(MsgKind::SbacPreAbort), 2);
    world.run_to_quiescence();

    CHECK(world.recording().size() == 1);
    CHECK(world.recording()[0].msg.kind == MsgKind::SbacPreAbort);
    CHECK(sink->seen.size() == 2);
}

TEST_CASE("inject_replay delivers a byte-identical copy that can win a race") {
    World world{ShardConfig{}};
    auto* sink = new SinkActor;
    world.add_actor(std::unique_ptr<Actor>(sink));
    world.submit(0, 0, probe(MsgKind::SbacPreAbort, 7), 1);
    world.step();
    REQUIRE(world.recording().size() == 1);

    // Genuine message later; replayed copy scheduled one tick sooner.
    world.submit(0, 0, probe(MsgKind::SbacPreAccept, 7), 6);
    world.inject_replay(0, 0, 5);
    auto e1 = world.step();
    CHECK(e1->injected);
    CHECK(e1->msg.kind == MsgKind::SbacPreAbort);
    auto e2 = world.step();
    CHECK_FALSE(e2->injected);

    CHECK(encode_message(sink->seen[1].msg) == encode_message(sink->seen[0].msg));
    CHECK_THROWS_AS(world.inject_replay(99, 0, 50), SchedulingError);
}

TEST_CASE("replaying a message twice delivers two copies") {
    World world{ShardConfig{}};
    auto* sink = new SinkActor;
    world.add_actor(std::unique_ptr<Actor>(sink));
    world.submit(0, 0, probe(MsgKind::SbacAccept, 9), 1);
    world.step();
    world.inject_replay(0, 0, 4);
    world.inject_replay(0, 0, 5);
    world.run_to_quiescence();
    CHECK(sink->seen.size() == 3);
    CHECK(world.stats.injected == 2);
}

TEST_CASE("injected copies are not re-recorded") {
    World world{ShardConfig{}};
    world.add_actor(std::make_unique<SinkActor>());
    world.submit(0, 0, probe(MsgKind::SbacAccept), 1);
    world.step();
    world.inject_replay(0, 0, 3);
    world.run_to_quiescence();
    CHECK(world.recording().size() == 1);
}

TEST_CASE("crashed actors swallow deliveries") {
    World world{ShardConfig{}};
    auto* sink = new SinkActor;
    world.add_actor(std::unique_ptr<Actor>(sink));
    world.crash_at(0, 4);
    world.submit(0, 0, probe(MsgKind::SbacAccept), 3);
    world.submit(0, 0, probe(MsgKind::SbacAccept), 4);
    world.run_to_quiescence();
    CHECK(sink->seen.size() == 1);
}

TEST_CASE("delay rules push deliveries later") {
    World world{ShardConfig{}};
    auto* sink = new SinkActor;
    world.add_actor(std::unique_ptr<Actor>(sink));
    DelayRule rule;
    rule.kind = MsgKind::SbacPreAccept;
    rule.add = 4;
    world.policy.delays.push_back(rule);

    struct Emitter : Actor {
        void on_message(World& w, const Event&) override {
            Message m;
            m.kind = MsgKind::SbacPreAccept;
            m.role = SenderRole::Shard;
            w.send(1, 0, m);
        }
    };
    world.add_actor(std::make_unique<Emitter>());
    world.submit(0, 1, probe(MsgKind::SubmitTx), 0);
    world.run_to_quiescence();
    REQUIRE(sink->seen.size() == 1);
    CHECK(sink->seen[0].deliver_at == 5);  // 0 + 1 + 4
}

TEST_SUITE_END();
