#pragma once

#include <memory>

#include "shardsim/types.hpp"

namespace shardsim {

enum class MsgKind : uint8_t {
    SubmitTx = 0,
    SbacPreAccept = 1,
    SbacPreAbort = 2,
    SbacAccept = 3,
    SbacAbort = 4,
    AtomixPreAccept = 5,
    AtomixPreAbort = 6,
    AtomixAccept = 7,
    AtomixAbort = 8,
    ByzPreAccept = 9,
    ByzPreAbort = 10,
    ByzAccept = 11,
    ByzAbort = 12,
    VoteRequest = 13,
    Notify = 14,
    Timer = 15,  // world-internal scheduling; never recorded or replayed
};

const char* to_string(MsgKind k);

enum class SenderRole : uint8_t { Client = 0, Shard = 1, TxManager = 2, Internal = 3 };

struct Message {
    MsgKind kind = MsgKind::Timer;
    SenderRole role = SenderRole::Internal;
    ShardId sender_shard = 0;  // meaningful when role == Shard
    std::shared_ptr<const Transaction> txn;
    SeqNo tx_seq = 0;  // s_T for byzcuit traffic
    QuorumCert cert;   // attestation of the emitting shard
    std::vector<VoteCert> votes;
    bool committed = false;  // Notify payload

    TxnId txn_id() const { return txn ? txn->id : 0; }
};

bool is_vote(MsgKind k);
bool is_decision(MsgKind k);
bool is_protocol_message(MsgKind k);  // everything but Timer

bool same_payload(const Message& a, const Message& b);

}  // namespace shardsim
