#include "shardsim/attacks.hpp"

#include <algorithm>

namespace shardsim {

namespace {

constexpr ActorId kShard0 = 0, kShard1 = 1, kShard2 = 2;
constexpr ActorId kClient = 3;  // canonical worlds: 3 shards, 1 client
constexpr ActorId kTm = 4;      // byzcuit only

ScenarioScript blank(Protocol protocol, const std::string& name) {
    ScenarioScript s;
    s.name = name;
    s.protocol = protocol;
    s.num_shards = 3;
    return s;
}

void add_object(ScenarioScript& s, const std::string& name, ShardId shard, bool active) {
    s.objects.push_back({name, shard, active ? ObjectStateKind::Active : ObjectStateKind::Inactive, 0});
}

ScenarioTx tx(const std::string& name, std::vector<std::string> inputs, std::vector<ScenarioOutput> outputs,
              Tick tick) {
    ScenarioTx t;
    t.name = name;
    t.inputs = std::move(inputs);
    t.outputs = std::move(outputs);
    t.submit_tick = tick;
    return t;
}

ScenarioTx canonical_t(Tick tick) { return tx("T", {"x1", "x2"}, {{"y1", 0}, {"y2", 1}, {"y3", 2}}, tick); }

ActorId resolve_actor(const std::string& ref, Protocol protocol) {
    ActorLayout layout;
    layout.num_shards = 3;
    layout.num_clients = 1;
    layout.has_tm = protocol == Protocol::Byzcuit;
    return layout.resolve(ref);
}

}  // namespace

size_t find_recorded(const std::vector<RecordedMessage>& log, MsgKind kind, ActorId origin, TxnId txn,
                     size_t skip) {
    for (size_t i = 0; i < log.size(); ++i) {
        if (log[i].msg.kind != kind || log[i].origin != origin) continue;
        if (txn != 0 && (!log[i].msg.txn || log[i].msg.txn->id != txn)) continue;
        if (skip > 0) {
            --skip;
            continue;
        }
        return i;
    }
    throw std::out_of_range("recorded message not found: " + std::string(to_string(kind)));
}

bool has_recorded(const std::vector<RecordedMessage>& log, MsgKind kind, ActorId origin, TxnId txn) {
    try {
        find_recorded(log, kind, origin, txn);
        return true;
    } catch (const std::out_of_range&) {
        return false;
    }
}

namespace {

Elicitation extract(RunOutcome run, std::initializer_list<std::pair<MsgKind, ActorId>> wanted,
                    const std::vector<std::string>& restored) {
    Elicitation e;
    TxnId txn = run.txn_ids.at("T");
    for (const auto& [kind, origin] : wanted) {
        if (!has_recorded(run.recording, kind, origin, txn)) {
            e.error = "elicitation raced incorrectly: expected " + std::string(to_string(kind)) +
                      " from actor " + std::to_string(origin) + "; retry with a tighter gap";
            e.run = std::move(run);
            return e;
        }
        e.recorded.push_back(run.recording[find_recorded(run.recording, kind, origin, txn)]);
    }
    for (const auto& name : restored) {
        if (run.state_of(name) != "active") {
            e.error = "recipe did not restore " + name;
            e.run = std::move(run);
            return e;
        }
    }
    e.ok = true;
    e.run = std::move(run);
    return e;
}

}  // namespace

Elicitation elicit_sbac_vote(ShardId target_shard, bool want_pre_accept, Tick gap) {
    ShardId other = target_shard == 0 ? 1 : 0;
    std::string x_target = target_shard == 0 ? "x1" : "x2";
    std::string x_other = other == 0 ? "x1" : "x2";
    auto s = blank(Protocol::Sbac, "elicit-sbac");
    add_object(s, "x1", 0, true);
    add_object(s, "x2", 1, true);
    if (want_pre_accept) {
        // Lock the sibling input so the target shard's pre-accept belongs to
        // an instance that ultimately aborts.
        add_object(s, "xa", target_shard, false);
        s.transactions.push_back(tx("Tp", {x_other, "xa"}, {{"w", other}}, 0));
    } else {
        add_object(s, "xa", other, false);
        s.transactions.push_back(tx("Tp", {x_target, "xa"}, {{"w", target_shard}}, 0));
    }
    s.transactions.push_back(canonical_t(gap));
    auto run = run_scenario(s);
    MsgKind kind = want_pre_accept ? MsgKind::SbacPreAccept : MsgKind::SbacPreAbort;
    return extract(std::move(run), {{kind, target_shard}}, {"x1", "x2"});
}

Elicitation elicit_sbac_accept(ShardId from_shard) {
    auto s = blank(Protocol::Sbac, "elicit-sbac-accept");
    add_object(s, "x1", 0, true);
    add_object(s, "x2", 1, true);
    s.transactions.push_back(canonical_t(0));
    auto run = run_scenario(s);
    return extract(std::move(run), {{MsgKind::SbacAccept, from_shard}}, {});
}

Elicitation elicit_atomix_vote(ShardId target_shard, bool want_pre_accept, Tick gap) {
    ShardId other = target_shard == 0 ? 1 : 0;
    std::string x_target = target_shard == 0 ? "x1" : "x2";
    std::string x_other = other == 0 ? "x1" : "x2";
    auto s = blank(Protocol::Atomix, "elicit-atomix");
    add_object(s, "x1", 0, true);
    add_object(s, "x2", 1, true);
    add_object(s, "xa", 2, false);
    // Temporarily spend one input through a doomed sibling; the client's
    // aborts put everything back.
    std::string spent = want_pre_accept ? x_other : x_target;
    s.transactions.push_back(tx("Tp", {spent, "xa"}, {{"w", other}}, 0));
    s.transactions.push_back(canonical_t(gap));
    auto run = run_scenario(s);
    MsgKind kind = want_pre_accept ? MsgKind::AtomixPreAccept : MsgKind::AtomixPreAbort;
    return extract(std::move(run), {{kind, target_shard}}, {"x1", "x2"});
}

Elicitation elicit_atomix_accept() {
    auto s = blank(Protocol::Atomix, "elicit-atomix-accept");
    add_object(s, "x1", 0, true);
    add_object(s, "x2", 1, true);
    s.transactions.push_back(canonical_t(0));
    auto run = run_scenario(s);
    return extract(std::move(run), {{MsgKind::AtomixAccept, kClient}}, {});
}

Elicitation elicit_atomix_abort() {
    // The pre-accept recipe makes the client abort T with a proof in hand.
    auto s = blank(Protocol::Atomix, "elicit-atomix-abort");
    add_object(s, "x1", 0, true);
    add_object(s, "x2", 1, true);
    add_object(s, "xa", 2, false);
    s.transactions.push_back(tx("Tp", {"x2", "xa"}, {{"w", 1}}, 0));
    s.transactions.push_back(canonical_t(1));
    auto run = run_scenario(s);
    return extract(std::move(run), {{MsgKind::AtomixAbort, kClient}}, {"x1", "x2"});
}

Elicitation elicit_byzcuit_vote(ShardId target_shard, bool want_pre_accept, Tick gap) {
    ShardId other = target_shard == 0 ? 1 : 0;
    std::string x_target = target_shard == 0 ? "x1" : "x2";
    std::string x_other = other == 0 ? "x1" : "x2";
    auto s = blank(Protocol::Byzcuit, "elicit-byzcuit");
    add_object(s, "x1", 0, true);
    add_object(s, "x2", 1, true);
    if (want_pre_accept) {
        add_object(s, "xa", target_shard, false);
        s.transactions.push_back(tx("Tp", {x_other, "xa"}, {{"w", other}}, 0));
    } else {
        add_object(s, "xa", other, false);
        s.transactions.push_back(tx("Tp", {x_target, "xa"}, {{"w", target_shard}}, 0));
    }
    s.transactions.push_back(canonical_t(gap));
    auto run = run_scenario(s);
    MsgKind kind = want_pre_accept ? MsgKind::ByzPreAccept : MsgKind::ByzPreAbort;
    return extract(std::move(run), {{kind, target_shard}}, {"x1", "x2"});
}

int rows_in_table(int table) {
    switch (table) {
        case 1: return 9;
        case 2: return 8;
        case 3: return 10;
        case 4: return 4;
        default: return 0;
    }
}

bool row_is_highlighted(int table, int row) {
    switch (table) {
        case 1: return row == 1 || row == 5 || row == 7 || row == 9;
        case 2: return row == 1 || row == 5;
        case 3: return row == 1 || row == 5 || row == 7 || row == 9;
        case 4: return row == 1 || row == 3;
        default: return false;
    }
}

Protocol native_protocol(int table) { return table <= 2 ? Protocol::Sbac : Protocol::Atomix; }

namespace {

struct RowPlan {
    ScenarioScript script;
    std::vector<RecordedMessage> loaded;
    TableExpectation expect;
};

void expect_states(TableExpectation& e, std::initializer_list<std::pair<const char*, const char*>> states) {
    for (const auto& [name, state] : states) e.objects[name] = state;
}

void append_recordings(RowPlan& plan, const Elicitation& e) {
    if (!e.ok) throw std::runtime_error("elicitation failed: " + e.error);
    plan.loaded.insert(plan.loaded.end(), e.recorded.begin(), e.recorded.end());
}

// ---- Table I: replays against the first phase of sbac ----

RowPlan plan_table1(int row) {
    RowPlan plan;
    plan.script = blank(Protocol::Sbac, "table1-row" + std::to_string(row));
    auto& s = plan.script;
    auto& e = plan.expect;
    add_object(s, "x1", 0, true);
    add_object(s, "x2", 1, true);

    auto lock_x1 = tx("Tp", {"x1", "xa2"}, {{"w1", 0}}, 0);
    auto lock_x2 = tx("Tq", {"x2", "xa1"}, {{"w2", 1}}, 0);

    switch (row) {
        case 1:
            s.transactions = {canonical_t(0)};
            e.row_class = Classification::ConsistentCommit;
            expect_states(e, {{"x1", "inactive"}, {"x2", "inactive"}, {"y1", "active"}, {"y2", "active"},
                              {"y3", "active"}});
            e.actions = {{"shard:0", ActionKind::VotePreAccept, "T", ""},
                         {"shard:1", ActionKind::VotePreAccept, "T", ""},
                         {"shard:0", ActionKind::Lock, "T", "x1"},
                         {"shard:0", ActionKind::DecideCommit, "T", ""},
                         {"shard:1", ActionKind::DecideCommit, "T", ""},
                         {"shard:0", ActionKind::CreateOutput, "T", "y1"},
                         {"shard:1", ActionKind::CreateOutput, "T", "y2"},
                         {"shard:2", ActionKind::CreateOutput, "T", "y3"}};
            break;
        case 2:
            append_recordings(plan, elicit_sbac_vote(0, false));
            s.transactions = {canonical_t(0)};
            s.injections = {{0, "shard:1", 2}};
            e.row_class = Classification::Inconsistent;
            expect_states(e, {{"x1", "inactive"}, {"y1", "active"}, {"x2", "active"}, {"y2", "absent"},
                              {"y3", "active"}});
            e.actions = {{"shard:0", ActionKind::DecideCommit, "T", ""},
                         {"shard:1", ActionKind::DecideAbort, "T", ""},
                         {"shard:1", ActionKind::Unlock, "T", "x2"},
                         {"shard:2", ActionKind::CreateOutput, "T", "y3"}};
            break;
        case 3:
            append_recordings(plan, elicit_sbac_vote(1, false));
            s.transactions = {canonical_t(0)};
            s.injections = {{0, "shard:0", 2}};
            e.row_class = Classification::Inconsistent;
            expect_states(e, {{"x1", "active"}, {"y1", "absent"}, {"x2", "inactive"}, {"y2", "active"},
                              {"y3", "active"}});
            e.actions = {{"shard:0", ActionKind::DecideAbort, "T", ""},
                         {"shard:0", ActionKind::Unlock, "T", "x1"},
                         {"shard:1", ActionKind::DecideCommit, "T", ""},
                         {"shard:2", ActionKind::CreateOutput, "T", "y3"}};
            break;
        case 4:
            append_recordings(plan, elicit_sbac_vote(0, false));
            append_recordings(plan, elicit_sbac_vote(1, false));
            s.transactions = {canonical_t(0)};
            s.injections = {{0, "shard:1", 2}, {1, "shard:0", 2}};
            e.row_class = Classification::AvailabilityLoss;
            expect_states(e, {{"x1", "active"}, {"x2", "active"}, {"y1", "absent"}, {"y2", "absent"},
                              {"y3", "absent"}});
            e.actions = {{"shard:0", ActionKind::DecideAbort, "T", ""},
                         {"shard:1", ActionKind::DecideAbort, "T", ""},
                         {"shard:0", ActionKind::Unlock, "T", "x1"},
                         {"shard:1", ActionKind::Unlock, "T", "x2"}};
            break;
        case 5:
        case 6:
            add_object(s, "xa2", 1, false);
            s.transactions = {lock_x1, canonical_t(1)};
            if (row == 5) {
                e.row_class = Classification::ConsistentAbort;
                expect_states(e, {{"x1", "active"}, {"x2", "active"}, {"y1", "absent"}, {"y2", "absent"},
                                  {"y3", "absent"}, {"w1", "absent"}});
                e.actions = {{"shard:0", ActionKind::VotePreAbort, "T", ""},
                             {"shard:1", ActionKind::VotePreAccept, "T", ""},
                             {"shard:0", ActionKind::DecideAbort, "T", ""},
                             {"shard:1", ActionKind::DecideAbort, "T", ""},
                             {"shard:1", ActionKind::Unlock, "T", "x2"}};
            } else {
                append_recordings(plan, elicit_sbac_vote(0, true));
                s.injections = {{0, "shard:1", 3}};
                e.row_class = Classification::Inconsistent;
                expect_states(e, {{"x1", "active"}, {"x2", "inactive"}, {"y1", "absent"}, {"y2", "active"},
                                  {"y3", "active"}, {"w1", "absent"}});
                e.actions = {{"shard:0", ActionKind::VotePreAbort, "T", ""},
                             {"shard:0", ActionKind::DecideAbort, "T", ""},
                             {"shard:1", ActionKind::DecideCommit, "T", ""},
                             {"shard:2", ActionKind::CreateOutput, "T", "y3"}};
            }
            break;
        case 7:
        case 8:
            add_object(s, "xa1", 0, false);
            s.transactions = {lock_x2, canonical_t(1)};
            if (row == 7) {
                e.row_class = Classification::ConsistentAbort;
                expect_states(e, {{"x1", "active"}, {"x2", "active"}, {"y1", "absent"}, {"y2", "absent"},
                                  {"y3", "absent"}});
                e.actions = {{"shard:0", ActionKind::VotePreAccept, "T", ""},
                             {"shard:1", ActionKind::VotePreAbort, "T", ""},
                             {"shard:0", ActionKind::Unlock, "T", "x1"}};
            } else {
                append_recordings(plan, elicit_sbac_vote(1, true));
                s.injections = {{0, "shard:0", 3}};
                e.row_class = Classification::Inconsistent;
                expect_states(e, {{"x1", "inactive"}, {"y1", "active"}, {"x2", "active"}, {"y2", "absent"},
                                  {"y3", "active"}});
                e.actions = {{"shard:0", ActionKind::DecideCommit, "T", ""},
                             {"shard:1", ActionKind::DecideAbort, "T", ""},
                             {"shard:2", ActionKind::CreateOutput, "T", "y3"}};
            }
            break;
        case 9:
            add_object(s, "xa1", 0, false);
            add_object(s, "xa2", 1, false);
            s.transactions = {lock_x1, lock_x2, canonical_t(1)};
            e.row_class = Classification::ConsistentAbort;
            expect_states(e, {{"x1", "active"}, {"x2", "active"}, {"y1", "absent"}, {"y2", "absent"},
                              {"y3", "absent"}});
            e.actions = {{"shard:0", ActionKind::VotePreAbort, "T", ""},
                         {"shard:1", ActionKind::VotePreAbort, "T", ""}};
            break;
        default: throw std::invalid_argument("table 1 has rows 1..9");
    }
    return plan;
}

// ---- Table II: replays against the second phase of sbac ----

RowPlan plan_table2(int row) {
    RowPlan plan;
    plan.script = blank(Protocol::Sbac, "table2-row" + std::to_string(row));
    auto& s = plan.script;
    auto& e = plan.expect;

    switch (row) {
        case 1:
            add_object(s, "x1", 0, true);
            add_object(s, "x2", 1, true);
            s.transactions = {canonical_t(0)};
            e.row_class = Classification::ConsistentCommit;
            expect_states(e, {{"x1", "inactive"}, {"x2", "inactive"}, {"y1", "active"}, {"y2", "active"},
                              {"y3", "active"}});
            e.actions = {{"shard:2", ActionKind::CreateOutput, "T", "y3"}};
            break;
        case 2:
        case 3:
        case 4: {
            // Commit, spend y3, then replay the recorded Accept so shard 2
            // recreates the spent output.
            add_object(s, "x1", 0, true);
            add_object(s, "x2", 1, true);
            s.transactions = {canonical_t(0), tx("T2", {"y3"}, {{"z3", 2}}, 6)};
            auto dry = run_scenario(s);
            TxnId txn = dry.txn_ids.at("T");
            size_t from0 = find_recorded(dry.recording, MsgKind::SbacAccept, 0, txn);
            size_t from1 = find_recorded(dry.recording, MsgKind::SbacAccept, 1, txn);
            if (row == 2) s.injections = {{from0, "shard:2", 12}};
            if (row == 3) s.injections = {{from1, "shard:2", 12}};
            if (row == 4) s.injections = {{from0, "shard:2", 12}, {from1, "shard:2", 13}};
            e.row_class = Classification::Inconsistent;
            e.class_txn = "T2";
            expect_states(e, {{"x1", "inactive"}, {"x2", "inactive"}, {"y1", "active"}, {"y2", "active"},
                              {"y3", "active"}, {"z3", "active"}});
            e.actions = {{"shard:2", ActionKind::Inactivate, "T2", "y3"},
                         {"shard:2", ActionKind::CreateOutput, "T2", "z3"},
                         {"shard:2", ActionKind::CreateOutput, "T", "y3"}};
            break;
        }
        case 5:
            add_object(s, "x1", 0, false);
            add_object(s, "x2", 1, true);
            s.transactions = {canonical_t(0)};
            e.row_class = Classification::ConsistentAbort;
            expect_states(e, {{"x1", "inactive"}, {"x2", "active"}, {"y1", "absent"}, {"y2", "absent"},
                              {"y3", "absent"}});
            e.actions = {{"shard:0", ActionKind::VotePreAbort, "T", ""},
                         {"shard:0", ActionKind::DecideAbort, "T", ""},
                         {"shard:1", ActionKind::DecideAbort, "T", ""},
                         {"shard:1", ActionKind::Unlock, "T", "x2"}};
            break;
        case 6:
        case 7:
        case 8:
            add_object(s, "x1", 0, false);
            add_object(s, "x2", 1, true);
            s.transactions = {canonical_t(0)};
            if (row == 6 || row == 8) append_recordings(plan, elicit_sbac_accept(0));
            if (row == 7 || row == 8) append_recordings(plan, elicit_sbac_accept(1));
            if (row == 6 || row == 7) s.injections = {{0, "shard:2", 8}};
            else s.injections = {{0, "shard:2", 8}, {1, "shard:2", 9}};
            e.row_class = Classification::Inconsistent;
            expect_states(e, {{"x1", "inactive"}, {"x2", "active"}, {"y1", "absent"}, {"y2", "absent"},
                              {"y3", "active"}});
            e.actions = {{"shard:0", ActionKind::DecideAbort, "T", ""},
                         {"shard:2", ActionKind::CreateOutput, "T", "y3"}};
            break;
        default: throw std::invalid_argument("table 2 has rows 1..8");
    }
    return plan;
}

// ---- Table III: replays against the first phase of atomix ----

RowPlan plan_table3(int row) {
    RowPlan plan;
    plan.script = blank(Protocol::Atomix, "table3-row" + std::to_string(row));
    auto& s = plan.script;
    auto& e = plan.expect;
    // Rows 1-4 start from two active inputs; 5/6 have x1 spent; 7/8 have x2
    // spent; 9/10 have both spent.
    bool x1 = row <= 4 || row == 7 || row == 8;
    bool x2 = row <= 6;
    add_object(s, "x1", 0, x1);
    add_object(s, "x2", 1, x2);
    s.transactions = {canonical_t(0)};

    auto reactivate_both = [&e]() {
        e.actions = {{"shard:0", ActionKind::Inactivate, "T", "x1"},
                     {"shard:1", ActionKind::Inactivate, "T", "x2"},
                     {"client:0", ActionKind::ClientAbort, "T", ""},
                     {"shard:0", ActionKind::Reactivate, "T", "x1"},
                     {"shard:1", ActionKind::Reactivate, "T", "x2"}};
    };

    switch (row) {
        case 1:
            e.row_class = Classification::ConsistentCommit;
            expect_states(e, {{"x1", "inactive"}, {"x2", "inactive"}, {"y1", "active"}, {"y2", "active"},
                              {"y3", "active"}});
            e.actions = {{"shard:0", ActionKind::Inactivate, "T", "x1"},
                         {"shard:1", ActionKind::Inactivate, "T", "x2"},
                         {"client:0", ActionKind::ClientAccept, "T", ""},
                         {"shard:0", ActionKind::CreateOutput, "T", "y1"},
                         {"shard:1", ActionKind::CreateOutput, "T", "y2"},
                         {"shard:2", ActionKind::CreateOutput, "T", "y3"}};
            break;
        case 2:
            append_recordings(plan, elicit_atomix_vote(0, false));
            s.injections = {{0, "client:0", 2}};
            e.row_class = Classification::AvailabilityLoss;
            expect_states(e, {{"x1", "active"}, {"x2", "active"}, {"y1", "absent"}, {"y2", "absent"},
                              {"y3", "absent"}});
            reactivate_both();
            break;
        case 3:
            append_recordings(plan, elicit_atomix_vote(1, false));
            s.injections = {{0, "client:0", 2}};
            e.row_class = Classification::AvailabilityLoss;
            expect_states(e, {{"x1", "active"}, {"x2", "active"}, {"y1", "absent"}, {"y2", "absent"},
                              {"y3", "absent"}});
            reactivate_both();
            break;
        case 4:
            append_recordings(plan, elicit_atomix_vote(0, false));
            append_recordings(plan, elicit_atomix_vote(1, false));
            s.injections = {{0, "client:0", 2}, {1, "client:0", 2}};
            e.row_class = Classification::AvailabilityLoss;
            expect_states(e, {{"x1", "active"}, {"x2", "active"}, {"y1", "absent"}, {"y2", "absent"},
                              {"y3", "absent"}});
            reactivate_both();
            break;
        case 5:
            e.row_class = Classification::ConsistentAbort;
            expect_states(e, {{"x1", "inactive"}, {"x2", "active"}, {"y1", "absent"}, {"y2", "absent"},
                              {"y3", "absent"}});
            e.actions = {{"shard:0", ActionKind::VotePreAbort, "T", ""},
                         {"shard:1", ActionKind::Inactivate, "T", "x2"},
                         {"client:0", ActionKind::ClientAbort, "T", ""},
                         {"shard:1", ActionKind::Reactivate, "T", "x2"}};
            break;
        case 6:
            append_recordings(plan, elicit_atomix_vote(0, true));
            s.injections = {{0, "client:0", 2}};
            e.row_class = Classification::Inconsistent;
            expect_states(e, {{"x1", "inactive"}, {"x2", "inactive"}, {"y1", "active"}, {"y2", "active"},
                              {"y3", "active"}});
            e.actions = {{"shard:0", ActionKind::VotePreAbort, "T", ""},
                         {"client:0", ActionKind::ClientAccept, "T", ""},
                         {"shard:0", ActionKind::CreateOutput, "T", "y1"},
                         {"shard:1", ActionKind::CreateOutput, "T", "y2"},
                         {"shard:2", ActionKind::CreateOutput, "T", "y3"}};
            break;
        case 7:
            e.row_class = Classification::ConsistentAbort;
            expect_states(e, {{"x1", "active"}, {"x2", "inactive"}, {"y1", "absent"}, {"y2", "absent"},
                              {"y3", "absent"}});
            e.actions = {{"shard:0", ActionKind::Inactivate, "T", "x1"},
                         {"shard:1", ActionKind::VotePreAbort, "T", ""},
                         {"client:0", ActionKind::ClientAbort, "T", ""},
                         {"shard:0", ActionKind::Reactivate, "T", "x1"}};
            break;
        case 8:
            append_recordings(plan, elicit_atomix_vote(1, true));
            s.injections = {{0, "client:0", 2}};
            e.row_class = Classification::Inconsistent;
            expect_states(e, {{"x1", "inactive"}, {"x2", "inactive"}, {"y1", "active"}, {"y2", "active"},
                              {"y3", "active"}});
            e.actions = {{"shard:1", ActionKind::VotePreAbort, "T", ""},
                         {"client:0", ActionKind::ClientAccept, "T", ""},
                         {"shard:2", ActionKind::CreateOutput, "T", "y3"}};
            break;
        case 9:
            e.row_class = Classification::ConsistentAbort;
            expect_states(e, {{"x1", "inactive"}, {"x2", "inactive"}, {"y1", "absent"}, {"y2", "absent"},
                              {"y3", "absent"}});
            e.actions = {{"shard:0", ActionKind::VotePreAbort, "T", ""},
                         {"shard:1", ActionKind::VotePreAbort, "T", ""},
                         {"client:0", ActionKind::ClientAbort, "T", ""}};
            break;
        case 10:
            append_recordings(plan, elicit_atomix_vote(0, true));
            append_recordings(plan, elicit_atomix_vote(1, true));
            s.injections = {{0, "client:0", 2}, {1, "client:0", 2}};
            e.row_class = Classification::Inconsistent;
            expect_states(e, {{"x1", "inactive"}, {"x2", "inactive"}, {"y1", "active"}, {"y2", "active"},
                              {"y3", "active"}});
            e.actions = {{"client:0", ActionKind::ClientAccept, "T", ""},
                         {"shard:0", ActionKind::CreateOutput, "T", "y1"},
                         {"shard:1", ActionKind::CreateOutput, "T", "y2"},
                         {"shard:2", ActionKind::CreateOutput, "T", "y3"}};
            break;
        default: throw std::invalid_argument("table 3 has rows 1..10");
    }
    return plan;
}

// ---- Table IV: replays against the second phase of atomix ----

RowPlan plan_table4(int row) {
    RowPlan plan;
    plan.script = blank(Protocol::Atomix, "table4-row" + std::to_string(row));
    auto& s = plan.script;
    auto& e = plan.expect;

    switch (row) {
        case 1:
            add_object(s, "x1", 0, true);
            add_object(s, "x2", 1, true);
            s.transactions = {canonical_t(0)};
            e.row_class = Classification::ConsistentCommit;
            expect_states(e, {{"x1", "inactive"}, {"x2", "inactive"}, {"y1", "active"}, {"y2", "active"},
                              {"y3", "active"}});
            e.actions = {{"client:0", ActionKind::ClientAccept, "T", ""}};
            break;
        case 2:
            add_object(s, "x1", 0, true);
            add_object(s, "x2", 1, true);
            s.transactions = {canonical_t(0)};
            append_recordings(plan, elicit_atomix_abort());
            s.injections = {{0, "shard:0", 8}, {0, "shard:1", 9}};
            e.row_class = Classification::Inconsistent;
            expect_states(e, {{"x1", "active"}, {"x2", "active"}, {"y1", "active"}, {"y2", "active"},
                              {"y3", "active"}});
            e.actions = {{"client:0", ActionKind::ClientAccept, "T", ""},
                         {"shard:0", ActionKind::Reactivate, "T", "x1"},
                         {"shard:1", ActionKind::Reactivate, "T", "x2"}};
            break;
        case 3:
            // A correct client abort; both inactivations get rolled back.
            // Realized with the doomed-sibling recipe, since a two-input
            // instance whose shards both pre-accept can only commit.
            add_object(s, "x1", 0, true);
            add_object(s, "x2", 1, true);
            add_object(s, "xa", 2, false);
            s.transactions = {tx("Tp", {"x2", "xa"}, {{"w", 1}}, 0), canonical_t(1)};
            e.row_class = Classification::ConsistentAbort;
            expect_states(e, {{"x1", "active"}, {"x2", "active"}, {"y1", "absent"}, {"y2", "absent"},
                              {"y3", "absent"}, {"w", "absent"}});
            e.actions = {{"client:0", ActionKind::ClientAbort, "T", ""},
                         {"shard:0", ActionKind::Reactivate, "T", "x1"},
                         {"shard:1", ActionKind::Reactivate, "", "x2"}};
            break;
        case 4:
            add_object(s, "x1", 0, true);
            add_object(s, "x2", 1, false);
            s.transactions = {canonical_t(0)};
            append_recordings(plan, elicit_atomix_accept());
            s.injections = {{0, "shard:0", 8}, {0, "shard:1", 9}, {0, "shard:2", 10}};
            e.row_class = Classification::Inconsistent;
            expect_states(e, {{"x1", "active"}, {"x2", "inactive"}, {"y1", "active"}, {"y2", "active"},
                              {"y3", "active"}});
            e.actions = {{"client:0", ActionKind::ClientAbort, "T", ""},
                         {"shard:0", ActionKind::Reactivate, "T", "x1"},
                         {"shard:0", ActionKind::CreateOutput, "T", "y1"},
                         {"shard:1", ActionKind::CreateOutput, "T", "y2"},
                         {"shard:2", ActionKind::CreateOutput, "T", "y3"}};
            break;
        default: throw std::invalid_argument("table 4 has rows 1..4");
    }
    return plan;
}

// ---- Byzcuit analogs: the same replay intents in one continuous world ----

size_t resolve_recorded(const ScenarioScript& script, MsgKind kind, ActorId origin, const std::string& txn,
                        size_t skip = 0) {
    RunOptions opts;
    opts.compute_counterfactual = false;
    auto dry = run_scenario(script, nullptr, opts);
    return find_recorded(dry.recording, kind, origin, dry.txn_ids.at(txn), skip);
}

// Victim resubmission of T after a prefix that aborted an instance of it;
// stale phase-1 votes are replayed at the fresh instance's vote tick.
RowPlan byz_stale_vote_plan(int table, int row, bool inject_s0, bool inject_s1) {
    RowPlan plan;
    plan.script = blank(Protocol::Byzcuit,
                        "table" + std::to_string(table) + "-row" + std::to_string(row) + "-byzcuit");
    auto& s = plan.script;
    add_object(s, "x1", 0, true);
    add_object(s, "x2", 1, true);
    add_object(s, "xa1", 0, false);
    add_object(s, "xa2", 1, false);
    s.transactions = {tx("Tp", {"x1", "xa2"}, {{"w1", 0}}, 0), tx("Tq", {"x2", "xa1"}, {{"w2", 1}}, 0),
                      canonical_t(1), canonical_t(10)};
    MsgKind kind = MsgKind::ByzPreAbort;
    if (inject_s0) s.injections.push_back({resolve_recorded(s, kind, 0, "T"), "tm:0", 12});
    if (inject_s1) s.injections.push_back({resolve_recorded(s, kind, 1, "T"), "tm:0", 12});
    plan.expect.row_class = Classification::ConsistentCommit;
    return plan;
}

// Victim instance genuinely aborts over a held input while a stale
// pre-accept from an earlier instance is replayed at it.
RowPlan byz_stale_preaccept_plan(int table, int row, ShardId from) {
    RowPlan plan;
    plan.script = blank(Protocol::Byzcuit,
                        "table" + std::to_string(table) + "-row" + std::to_string(row) + "-byzcuit");
    auto& s = plan.script;
    add_object(s, "x1", 0, true);
    add_object(s, "x2", 1, true);
    add_object(s, "xa1", 0, false);
    add_object(s, "xa2", 1, false);
    // Tp frees the target shard in the first instance (eliciting its
    // pre-accept); Tp2 holds the victim instance's other input.
    if (from == 0) {
        s.transactions = {tx("Tp", {"x2", "xa1"}, {{"w2", 1}}, 0), canonical_t(1),
                          tx("Tp2", {"x1", "xa2"}, {{"w1", 0}}, 9), canonical_t(10)};
    } else {
        s.transactions = {tx("Tp", {"x1", "xa2"}, {{"w1", 0}}, 0), canonical_t(1),
                          tx("Tp2", {"x2", "xa1"}, {{"w2", 1}}, 9), canonical_t(10)};
    }
    s.injections.push_back({resolve_recorded(s, MsgKind::ByzPreAccept, from, "T"), "tm:0", 12});
    plan.expect.row_class = Classification::ConsistentAbort;
    return plan;
}

// Decision replay after completion: commit, spend an output, replay Accept.
RowPlan byz_decision_replay_plan(int table, int row, int copies) {
    RowPlan plan;
    plan.script = blank(Protocol::Byzcuit,
                        "table" + std::to_string(table) + "-row" + std::to_string(row) + "-byzcuit");
    auto& s = plan.script;
    add_object(s, "x1", 0, true);
    add_object(s, "x2", 1, true);
    s.transactions = {canonical_t(0), tx("T2", {"y3"}, {{"z3", 2}}, 8)};
    size_t idx = resolve_recorded(s, MsgKind::ByzAccept, kTm, "T");
    for (int c = 0; c < copies; ++c) s.injections.push_back({idx, "shard:2", 14 + static_cast<Tick>(c)});
    plan.expect.row_class = Classification::ConsistentCommit;
    return plan;
}

// Replayed Abort from an aborted prior instance against a committing victim,
// both inside and after the victim's phase-2 window.
RowPlan byz_stale_abort_plan(int table, int row) {
    RowPlan plan;
    plan.script = blank(Protocol::Byzcuit,
                        "table" + std::to_string(table) + "-row" + std::to_string(row) + "-byzcuit");
    auto& s = plan.script;
    add_object(s, "x1", 0, true);
    add_object(s, "x2", 1, true);
    add_object(s, "xa2", 1, false);
    s.transactions = {tx("Tp", {"x1", "xa2"}, {{"w1", 0}}, 0), canonical_t(1), canonical_t(10)};
    size_t idx = resolve_recorded(s, MsgKind::ByzAbort, kTm, "T");
    s.injections = {{idx, "shard:0", 13}, {idx, "shard:1", 16}};
    plan.expect.row_class = Classification::ConsistentCommit;
    return plan;
}

// Replayed Accept against a resubmitted, already-committed transaction.
RowPlan byz_accept_replay_plan(int table, int row) {
    RowPlan plan;
    plan.script = blank(Protocol::Byzcuit,
                        "table" + std::to_string(table) + "-row" + std::to_string(row) + "-byzcuit");
    auto& s = plan.script;
    add_object(s, "x1", 0, true);
    add_object(s, "x2", 1, true);
    s.transactions = {canonical_t(0), canonical_t(8)};
    size_t idx = resolve_recorded(s, MsgKind::ByzAccept, kTm, "T");
    s.injections = {{idx, "shard:0", 12}, {idx, "shard:2", 13}};
    plan.expect.row_class = Classification::ConsistentCommit;
    return plan;
}

// Baseline byzcuit run shaped like the row's correct execution.
RowPlan byz_baseline_plan(int table, int row, bool commit_shape) {
    RowPlan plan;
    plan.script = blank(Protocol::Byzcuit,
                        "table" + std::to_string(table) + "-row" + std::to_string(row) + "-byzcuit");
    auto& s = plan.script;
    add_object(s, "x1", 0, commit_shape);
    add_object(s, "x2", 1, true);
    s.transactions = {canonical_t(0)};
    plan.expect.row_class =
        commit_shape ? Classification::ConsistentCommit : Classification::ConsistentAbort;
    return plan;
}

RowPlan plan_byzcuit(int table, int row) {
    switch (table) {
        case 1:
        case 3:
            switch (row) {
                case 1: return byz_baseline_plan(table, row, true);
                case 2: return byz_stale_vote_plan(table, row, true, false);
                case 3: return byz_stale_vote_plan(table, row, false, true);
                case 4: return byz_stale_vote_plan(table, row, true, true);
                case 5: return byz_baseline_plan(table, row, false);
                case 6: return byz_stale_preaccept_plan(table, row, 0);
                case 7: return byz_baseline_plan(table, row, false);
                case 8: return byz_stale_preaccept_plan(table, row, 1);
                case 9: return byz_baseline_plan(table, row, false);
                case 10: return byz_stale_preaccept_plan(table, row, 0);
                default: break;
            }
            break;
        case 2:
            switch (row) {
                case 1: return byz_baseline_plan(table, row, true);
                case 2:
                case 3: return byz_decision_replay_plan(table, row, 1);
                case 4: return byz_decision_replay_plan(table, row, 2);
                case 5: return byz_baseline_plan(table, row, false);
                case 6:
                case 7: return byz_accept_replay_plan(table, row);
                case 8: return byz_accept_replay_plan(table, row);
                default: break;
            }
            break;
        case 4:
            switch (row) {
                case 1: return byz_baseline_plan(table, row, true);
                case 2: return byz_stale_abort_plan(table, row);
                case 3: return byz_baseline_plan(table, row, false);
                case 4: return byz_accept_replay_plan(table, row);
                default: break;
            }
            break;
        default: break;
    }
    throw std::invalid_argument("no byzcuit analog for this table row");
}

void check(std::vector<AssertionResult>& out, const std::string& name, bool pass,
           const std::string& detail = "") {
    out.push_back({name, pass, pass ? "" : detail});
}

}  // namespace

TableAttackOutcome run_table_attack(int table, int row, Protocol protocol) {
    if (table < 1 || table > 4 || row < 1 || row > rows_in_table(table))
        throw std::invalid_argument("unknown table row");
    if (protocol != Protocol::Byzcuit && protocol != native_protocol(table))
        throw std::invalid_argument("row/protocol mismatch: table " + std::to_string(table) + " is a " +
                                    std::string(to_string(native_protocol(table))) + " table");

    TableAttackOutcome out;
    out.table = table;
    out.row = row;
    out.protocol = protocol;
    out.highlighted = row_is_highlighted(table, row);

    if (protocol == Protocol::Byzcuit) {
        RowPlan plan = plan_byzcuit(table, row);
        out.run = run_scenario(plan.script);

        ScenarioScript stripped = plan.script;
        stripped.injections.clear();
        auto clean = run_scenario(stripped);

        check(out.checks, "no_inconsistent_state", !out.run.any_inconsistent());
        check(out.checks, "replays_changed_nothing",
              out.run.named_world_fingerprint() == clean.named_world_fingerprint(),
              "attack world diverged from the replay-free world");
        check(out.checks, "session_log_stale", out.run.lemma1_ok, out.run.lemma1_detail);
        auto verdict = out.run.verdict_of("T");
        check(out.checks, "victim_outcome",
              verdict && verdict->outcome == plan.expect.row_class,
              verdict ? std::string("got ") + to_string(verdict->outcome) : "missing verdict");
        bool all_decided = true;
        for (const auto& [txn, _] : out.run.verdicts)
            if (!out.run.decided(txn)) all_decided = false;
        check(out.checks, "all_decided", all_decided);
        out.matched = all_pass(out.checks);
        return out;
    }

    RowPlan plan;
    switch (table) {
        case 1: plan = plan_table1(row); break;
        case 2: plan = plan_table2(row); break;
        case 3: plan = plan_table3(row); break;
        case 4: plan = plan_table4(row); break;
    }
    out.run = run_scenario(plan.script, plan.loaded.empty() ? nullptr : &plan.loaded);

    for (const auto& [object, state] : plan.expect.objects) {
        check(out.checks, "object:" + object, out.run.state_of(object) == state,
              "expected " + state + ", got " + out.run.state_of(object));
    }
    auto verdict = out.run.verdict_of(plan.expect.class_txn);
    check(out.checks, "classification:" + plan.expect.class_txn,
          verdict && verdict->outcome == plan.expect.row_class,
          verdict ? std::string("expected ") + to_string(plan.expect.row_class) + ", got " +
                        to_string(verdict->outcome) + (verdict->detail.empty() ? "" : " (" + verdict->detail + ")")
                  : "missing verdict");
    for (const auto& action : plan.expect.actions) {
        ActorId actor = resolve_actor(action.actor, protocol);
        TxnId txn = action.txn.empty() ? 0 : out.run.txn_ids.at(action.txn);
        ObjectId obj{};
        bool want_obj = !action.object.empty();
        if (want_obj) obj = out.run.object_ids.at(action.object);
        bool found = false;
        for (const auto& entry : out.run.log) {
            if (entry.actor != actor || entry.action != action.action) continue;
            if (txn != 0 && entry.txn != txn) continue;
            if (want_obj && !(entry.object == obj)) continue;
            found = true;
            break;
        }
        check(out.checks,
              "action:" + action.actor + ":" + to_string(action.action) +
                  (action.object.empty() ? "" : ":" + action.object),
              found, "transcribed shard action not observed");
    }
    out.matched = all_pass(out.checks);
    return out;
}

}  // namespace shardsim
