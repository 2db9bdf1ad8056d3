#pragma once

#include "shardsim/oracle.hpp"
#include "shardsim/protocol_base.hpp"

namespace shardsim {

// One submission of a transaction. The same transaction may be submitted
// again after its instance concluded; each instance is assessed on its own.
struct SubmissionInstance {
    std::shared_ptr<const Transaction> txn;  // byzcuit: the augmented payload of this instance
    SeqNo tx_seq = 0;
    ActorId client = 0;
    Tick tick = 0;
    Snapshot world_before;
};

struct SubmissionLog {
    std::map<TxnId, std::vector<SubmissionInstance>> instances;

    void note(const std::vector<ShardActorBase*>& shards, std::shared_ptr<const Transaction> txn,
              SeqNo tx_seq, ActorId client, Tick tick);
    const SubmissionInstance* find_latest(TxnId id) const {
        auto it = instances.find(id);
        if (it == instances.end() || it->second.empty()) return nullptr;
        return &it->second.back();
    }
};

struct PlannedSubmission {
    std::shared_ptr<const Transaction> txn;
    Tick submit_tick = 0;
    std::optional<SeqNo> tx_seq_override;  // adversarial byzcuit client
};

// Input shards vote to each other; every input shard tallies the first vote
// it sees per peer and reaches its own phase-2 decision. Output-only shards
// create outputs on any Accept, with no replay check.
class SbacShard : public ShardActorBase {
  public:
    using ShardActorBase::ShardActorBase;
    void on_message(World& world, const Event& ev) override;

  private:
    struct Pending {
        std::shared_ptr<const Transaction> txn;
        ActorId client = 0;
        bool have_client = false;
        bool voted = false;
        bool own_pre_accept = false;
        std::map<ShardId, bool> votes;  // first vote received per shard wins
    };

    void phase1(World& world, const Event& ev);
    void on_vote(World& world, const Event& ev);
    void maybe_decide(World& world, TxnId txn_id);
    void output_apply(World& world, const Event& ev);
    Message vote_message(const Pending& p) const;

    std::map<TxnId, Pending> pending_;
};

// Submits transactions to input shards and watches for the first phase-2
// decision naming each of them.
class SbacClient : public Actor {
  public:
    SbacClient(ActorId self, ShardConfig cfg, std::vector<ShardActorBase*> shards, SubmissionLog* log,
               std::vector<PlannedSubmission> planned)
        : self_(self), cfg_(std::move(cfg)), shards_(std::move(shards)), log_(log), planned_(std::move(planned)) {}

    void on_message(World& world, const Event& ev) override;
    void schedule(World& world);

  private:
    ActorId self_;
    ShardConfig cfg_;
    std::vector<ShardActorBase*> shards_;
    SubmissionLog* log_;
    std::vector<PlannedSubmission> planned_;
    std::set<TxnId> concluded_;
};

}  // namespace shardsim
