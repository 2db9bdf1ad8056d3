#pragma once

#include "shardsim/report.hpp"
#include "shardsim/runner.hpp"

namespace shardsim {

// Locate a recorded message by kind, origin and transaction name.
size_t find_recorded(const std::vector<RecordedMessage>& log, MsgKind kind, ActorId origin, TxnId txn,
                     size_t skip = 0);
bool has_recorded(const std::vector<RecordedMessage>& log, MsgKind kind, ActorId origin, TxnId txn);

// A recording run that coaxes one target message out of the system and
// leaves the world as it found it.
struct Elicitation {
    bool ok = false;
    std::string error;
    RunOutcome run;
    std::vector<RecordedMessage> recorded;  // the extracted target messages
};

// Two-transaction recipes: a doomed sibling transaction locks (sbac) or
// temporarily spends (atomix) one input so the target shard's vote for the
// canonical transaction can be recorded from an instance that fully aborts.
Elicitation elicit_sbac_vote(ShardId target_shard, bool want_pre_accept, Tick gap = 1);
Elicitation elicit_sbac_accept(ShardId from_shard);
Elicitation elicit_atomix_vote(ShardId target_shard, bool want_pre_accept, Tick gap = 1);
Elicitation elicit_atomix_accept();
Elicitation elicit_atomix_abort();
// Same recipe against byzcuit; recording succeeds but replays die later.
Elicitation elicit_byzcuit_vote(ShardId target_shard, bool want_pre_accept, Tick gap = 1);

struct ExpectedAction {
    std::string actor;   // "shard:0", "client:0", ...
    ActionKind action = ActionKind::VotePreAccept;
    std::string txn;     // empty = any transaction
    std::string object;  // empty = no object constraint
};

struct TableExpectation {
    Classification row_class = Classification::ConsistentCommit;
    std::string class_txn = "T";  // transaction carrying the row classification
    std::map<std::string, std::string> objects;
    std::vector<ExpectedAction> actions;
};

struct TableAttackOutcome {
    int table = 0;
    int row = 0;
    Protocol protocol = Protocol::Sbac;
    bool highlighted = false;
    RunOutcome run;
    std::vector<AssertionResult> checks;
    bool matched = false;
};

int rows_in_table(int table);
bool row_is_highlighted(int table, int row);
Protocol native_protocol(int table);

// Reproduce one table row: recording runs (elicitations) feed the attack
// run's loaded log, injections realize the marked replays, and the outcome
// is checked against the row's transcription. Running a row under byzcuit
// instead replays the analogous messages into one continuous world and
// checks that the replays change nothing.
TableAttackOutcome run_table_attack(int table, int row, Protocol protocol);

}  // namespace shardsim
