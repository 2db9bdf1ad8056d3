#pragma once

#include "shardsim/sbac.hpp"

namespace shardsim {

struct DummyExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Forces every output-only shard of the transaction into phase 1 by spending
// one of its dummy objects; each consumed dummy gains a replacement spec in
// the outputs so the pool size is restored on commit.
Transaction attach_dummies(const Transaction& base, const std::vector<ShardActorBase*>& shards,
                           World& world, uint32_t num_shards);

// The client-side submission step: attach dummies, compute s_T from the
// queried sequence numbers (unless overridden), then send (T, s_T) to every
// concerned shard. Returns the pair actually sent.
std::pair<std::shared_ptr<const Transaction>, SeqNo> byz_submit_now(
    World& world, SubmissionLog& log, const std::vector<ShardActorBase*>& shards, const ShardConfig& cfg,
    ActorId client, const std::shared_ptr<const Transaction>& base, std::optional<SeqNo> tx_seq_override = {});

class ByzShard : public ShardActorBase {
  public:
    ByzShard(ShardId shard, ShardConfig cfg, ActorId tm) : ShardActorBase(shard, std::move(cfg)), tm_(tm) {}

    void on_message(World& world, const Event& ev) override;

    // Mints an unchanged copy of the object with a fresh id and seq 0.
    ObjectId clone_object(World& world, const ObjectId& id);

    bool has_cached(TxnId txn, SeqNo tx_seq) const { return cache_.contains({txn, tx_seq}); }
    size_t cache_size() const { return cache_.size(); }

  private:
    using Pair = std::pair<TxnId, SeqNo>;

    struct CacheEntry {
        std::shared_ptr<const Transaction> txn;
        ActorId client = 0;
    };

    void phase1(World& world, std::shared_ptr<const Transaction> txn, SeqNo tx_seq, ActorId client,
                ActorId vote_target);
    void on_submit(World& world, const Event& ev);
    void on_vote_request(World& world, const Event& ev);
    void on_decision(World& world, const Event& ev, bool accept);
    void maybe_auto_clone(World& world, const ObjectId& id);
    void notify_if_responsible(World& world, const CacheEntry& entry, TxnId txn, SeqNo tx_seq, bool committed);

    ActorId tm_;
    std::map<Pair, CacheEntry> cache_;       // (T, s_T) pairs in flight
    std::map<Pair, Message> persisted_votes_;  // own phase-1 vote, re-emitted verbatim
};

// Vote collection and decision dissemination; deterministic in the vote
// multiset so concurrent managers reach the same decision.
class ByzTm : public Actor {
  public:
    ByzTm(ActorId self, ShardConfig cfg) : self_(self), cfg_(std::move(cfg)) {}

    void on_message(World& world, const Event& ev) override;

  protected:
    using Pair = std::pair<TxnId, SeqNo>;

    struct Round {
        std::shared_ptr<const Transaction> txn;
        std::map<ShardId, VoteCert> votes;  // first cert-valid vote per shard
        bool decided = false;
    };

    void on_vote(World& world, const Event& ev);
    void maybe_decide(World& world, const Pair& pair);

    ActorId self_;
    ShardConfig cfg_;
    std::map<Pair, Round> rounds_;
};

// Anyone resuming the TM role: queries persisted votes and re-runs the
// decision. Safe to race with the original TM or other takeovers.
class ByzTakeover : public ByzTm {
  public:
    ByzTakeover(ActorId self, ShardConfig cfg, SubmissionLog* log, TxnId txn, Tick fire_at)
        : ByzTm(self, std::move(cfg)), log_(log), txn_(txn), fire_at_(fire_at) {}

    void schedule(World& world);
    void on_message(World& world, const Event& ev) override;

  private:
    SubmissionLog* log_;
    TxnId txn_;
    Tick fire_at_;
};

class ByzClient : public Actor {
  public:
    ByzClient(ActorId self, ShardConfig cfg, std::vector<ShardActorBase*> shards, SubmissionLog* log,
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
};

}  // namespace shardsim
