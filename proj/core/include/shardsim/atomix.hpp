#pragma once

#include "shardsim/sbac.hpp"

namespace shardsim {

// Client-led commit: phase-1 inactivation is immediately durable (no Locked
// state) and decisions are applied by shards with no session check.
class AtomixShard : public ShardActorBase {
  public:
    using ShardActorBase::ShardActorBase;
    void on_message(World& world, const Event& ev) override;

  private:
    void phase1(World& world, const Event& ev);
    void apply_accept(World& world, const Event& ev);
    void apply_abort(World& world, const Event& ev);
};

class AtomixClient : public Actor {
  public:
    AtomixClient(ActorId self, ShardConfig cfg, std::vector<ShardActorBase*> shards, SubmissionLog* log,
                 std::vector<PlannedSubmission> planned)
        : self_(self), cfg_(std::move(cfg)), shards_(std::move(shards)), log_(log), planned_(std::move(planned)) {
        for (const auto& plan : planned_) known_.insert(plan.txn->id);
    }

    void on_message(World& world, const Event& ev) override;
    void schedule(World& world);

  private:
    struct Pending {
        std::shared_ptr<const Transaction> txn;
        std::map<ShardId, VoteCert> votes;  // first vote per shard wins
        std::set<ShardId> saw_pre_accept;   // every shard that claimed a pre-accept
    };
    struct Concluded {
        bool accepted = false;
        std::shared_ptr<const Transaction> txn;
        std::vector<VoteCert> abort_proofs;
        std::set<ShardId> abort_sent_to;
    };

    void decide(World& world, TxnId txn_id);
    void send_abort(World& world, Concluded& c, ShardId to);

    ActorId self_;
    ShardConfig cfg_;
    std::vector<ShardActorBase*> shards_;
    SubmissionLog* log_;
    std::vector<PlannedSubmission> planned_;
    std::set<TxnId> known_;  // an honest client tallies votes only for its own transactions
    std::map<TxnId, Pending> pending_;
    std::map<TxnId, Concluded> concluded_;
};

}  // namespace shardsim
