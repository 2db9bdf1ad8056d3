#include "shardsim/byzcuit.hpp"

#include <algorithm>

namespace shardsim {

Transaction attach_dummies(const Transaction& base, const std::vector<ShardActorBase*>& shards,
                           World& world, uint32_t num_shards) {
    Transaction txn = base;
    for (ShardId s : output_only_shards(base, num_shards)) {
        const ObjectRecord* lowest = nullptr;
        for (const auto& [id, rec] : shards[s]->objects()) {
            if (!id.dummy || !rec.active()) continue;
            if (!lowest || id < lowest->id) lowest = &rec;
        }
        if (!lowest) throw DummyExhausted("no active dummy on shard " + std::to_string(s));
        txn.inputs.push_back(lowest->id);
        txn.outputs.push_back(OutputSpec{make_dummy_id(s, world.mint_raw()), s});
    }
    return txn;
}

void ByzShard::on_message(World& world, const Event& ev) {
    switch (ev.msg.kind) {
        case MsgKind::SubmitTx: on_submit(world, ev); break;
        case MsgKind::VoteRequest: on_vote_request(world, ev); break;
        case MsgKind::ByzAccept: on_decision(world, ev, true); break;
        case MsgKind::ByzAbort: on_decision(world, ev, false); break;
        default: break;
    }
}

void ByzShard::on_submit(World& world, const Event& ev) {
    if (!ev.msg.txn) return;
    Pair pair{ev.msg.txn->id, ev.msg.tx_seq};
    if (auto it = persisted_votes_.find(pair); it != persisted_votes_.end()) {
        // Duplicate pair: the vote is already on record, re-emit it verbatim.
        world.send(shard_, tm_, it->second);
        return;
    }
    phase1(world, ev.msg.txn, ev.msg.tx_seq, ev.origin, tm_);
}

void ByzShard::on_vote_request(World& world, const Event& ev) {
    if (!ev.msg.txn) return;
    Pair pair{ev.msg.txn->id, ev.msg.tx_seq};
    if (auto it = persisted_votes_.find(pair); it != persisted_votes_.end()) {
        world.send(shard_, ev.origin, it->second);
        return;
    }
    // The transaction never reached this shard; the acting TM delivers it.
    phase1(world, ev.msg.txn, ev.msg.tx_seq, ev.origin, ev.origin);
}

void ByzShard::phase1(World& world, std::shared_ptr<const Transaction> txn, SeqNo tx_seq, ActorId client,
                      ActorId vote_target) {
    auto locals = local_inputs(*txn);
    if (locals.empty()) {
        world.not_concerned_deliveries++;
        return;
    }
    Pair pair{txn->id, tx_seq};
    cache_[pair] = CacheEntry{txn, client};

    bool ok = true;
    for (const auto& in : locals) {
        const ObjectRecord* rec = find_object(in);
        if (!rec || !rec->active() || tx_seq < rec->seq) {
            ok = false;
            break;
        }
    }
    VoteCert vc;
    vc.shard = shard_;
    vc.pre_accept = ok;
    vc.tx_seq = tx_seq;
    for (const auto& in : locals) {
        const ObjectRecord* rec = find_object(in);
        vc.input_seqs.emplace_back(in, rec ? rec->seq : 0);
    }
    vc.cert = cert_for(txn->id, tx_seq, ok ? MsgKind::ByzPreAccept : MsgKind::ByzPreAbort);

    if (ok) {
        for (const auto& in : locals) {
            ObjectRecord& rec = objects_[in];
            rec.state = ObjectStateKind::Locked;
            rec.locked_by = txn->id;
            rec.locked_tx_seq = tx_seq;
            world.log_action(shard_, txn->id, tx_seq, ActionKind::Lock, in);
        }
    }
    world.log_action(shard_, txn->id, tx_seq, ok ? ActionKind::VotePreAccept : ActionKind::VotePreAbort);

    Message vote;
    vote.kind = ok ? MsgKind::ByzPreAccept : MsgKind::ByzPreAbort;
    vote.role = SenderRole::Shard;
    vote.sender_shard = shard_;
    vote.txn = txn;
    vote.tx_seq = tx_seq;
    vote.cert = vc.cert;
    vote.votes.push_back(std::move(vc));
    persisted_votes_[pair] = vote;
    world.send(shard_, vote_target, vote);
}

void ByzShard::on_decision(World& world, const Event& ev, bool accept) {
    if (!ev.msg.txn) return;
    const Transaction& txn = *ev.msg.txn;
    SeqNo tx_seq = ev.msg.tx_seq;
    Pair pair{txn.id, tx_seq};
    auto cit = cache_.find(pair);
    if (cit == cache_.end()) {
        // No cached (T, s_T): a replay from outside the protocol window.
        world.log_action(shard_, txn.id, tx_seq, ActionKind::IgnoreReplay);
        return;
    }

    auto concerned = concerned_shards(txn, cfg_.num_shards);
    bool well_formed = true;
    if (accept) {
        // One cert-valid pre-accept per concerned shard, all for this s_T,
        // and s_T at least the maximum sequence number they attested to.
        SeqNo max_attested = 0;
        for (ShardId s : concerned) {
            auto it = std::find_if(ev.msg.votes.begin(), ev.msg.votes.end(), [&](const VoteCert& v) {
                return v.shard == s && v.pre_accept && v.tx_seq == tx_seq && validate_cert(v.cert, cfg_);
            });
            if (it == ev.msg.votes.end()) {
                well_formed = false;
                break;
            }
            for (const auto& [oid, seq] : it->input_seqs) max_attested = std::max(max_attested, seq);
        }
        if (well_formed && tx_seq < max_attested) well_formed = false;
    } else {
        well_formed = std::any_of(ev.msg.votes.begin(), ev.msg.votes.end(), [&](const VoteCert& v) {
            return !v.pre_accept && v.tx_seq == tx_seq && validate_cert(v.cert, cfg_);
        });
    }
    if (!well_formed) {
        world.log_action(shard_, txn.id, tx_seq, ActionKind::IgnoreMalformed);
        return;
    }

    CacheEntry entry = cit->second;
    if (accept) {
        for (const auto& in : local_inputs(txn)) {
            ObjectRecord& rec = objects_[in];
            rec.state = ObjectStateKind::Inactive;
            world.log_action(shard_, txn.id, tx_seq, ActionKind::Inactivate, in);
        }
        for (const auto& spec : local_outputs(txn)) {
            put_object(ObjectRecord{spec.id, ObjectStateKind::Active, 0, shard_});
            world.log_action(shard_, txn.id, tx_seq, ActionKind::CreateOutput, spec.id);
        }
    } else {
        for (const auto& in : local_inputs(txn)) {
            auto oit = objects_.find(in);
            if (oit == objects_.end()) continue;
            ObjectRecord& rec = oit->second;
            if (rec.state == ObjectStateKind::Locked) {
                if (rec.locked_by != txn.id || rec.locked_tx_seq != tx_seq) continue;  // another session
                rec.state = ObjectStateKind::Active;
                world.log_action(shard_, txn.id, tx_seq, ActionKind::Unlock, in);
            }
            if (rec.seq < tx_seq + 1) {
                rec.seq = tx_seq + 1;
                world.log_action(shard_, txn.id, tx_seq, ActionKind::BumpSeq, in);
            }
            maybe_auto_clone(world, in);
        }
    }
    cache_.erase(pair);
    world.log_action(shard_, txn.id, tx_seq, accept ? ActionKind::ApplyCommit : ActionKind::ApplyAbort);
    notify_if_responsible(world, entry, txn.id, tx_seq, accept);
}

void ByzShard::maybe_auto_clone(World& world, const ObjectId& id) {
    const ObjectRecord* rec = find_object(id);
    if (!rec || !rec->active()) return;
    if (rec->seq + cfg_.clone_margin < cfg_.overflow_threshold) return;
    clone_object(world, id);
}

ObjectId ByzShard::clone_object(World& world, const ObjectId& id) {
    auto it = objects_.find(id);
    if (it == objects_.end()) throw std::logic_error("clone of unknown object");
    ObjectRecord& rec = it->second;
    if (rec.state != ObjectStateKind::Active) throw std::logic_error("clone of a locked or inactive object");
    ObjectId fresh = id.dummy ? make_dummy_id(shard_, world.mint_raw())
                              : make_object_id(world.mint_raw() * cfg_.num_shards + shard_);
    rec.state = ObjectStateKind::Inactive;
    put_object(ObjectRecord{fresh, ObjectStateKind::Active, 0, shard_});
    world.log_action(shard_, 0, 0, ActionKind::Clone, fresh);
    return fresh;
}

void ByzShard::notify_if_responsible(World& world, const CacheEntry& entry, TxnId txn, SeqNo tx_seq,
                                     bool committed) {
    if (!entry.txn || entry.txn->inputs.empty()) return;
    if (shard_of(entry.txn->inputs.front(), cfg_.num_shards) != shard_) return;
    Message note;
    note.kind = MsgKind::Notify;
    note.role = SenderRole::Shard;
    note.sender_shard = shard_;
    note.txn = entry.txn;
    note.tx_seq = tx_seq;
    note.committed = committed;
    world.send(shard_, entry.client, note);
    world.log_action(shard_, txn, tx_seq, ActionKind::Notify);
}

void ByzTm::on_message(World& world, const Event& ev) {
    if (ev.msg.kind == MsgKind::ByzPreAccept || ev.msg.kind == MsgKind::ByzPreAbort) on_vote(world, ev);
}

void ByzTm::on_vote(World& world, const Event& ev) {
    if (!ev.msg.txn || ev.msg.votes.empty()) return;
    const VoteCert& vc = ev.msg.votes.front();
    if (!validate_cert(vc.cert, cfg_)) return;  // below the f+1 threshold
    Pair pair{ev.msg.txn->id, ev.msg.tx_seq};
    Round& round = rounds_[pair];
    if (round.decided) return;
    if (!round.txn) round.txn = ev.msg.txn;
    round.votes.emplace(vc.shard, vc);
    maybe_decide(world, pair);
}

void ByzTm::maybe_decide(World& world, const Pair& pair) {
    Round& round = rounds_.at(pair);
    auto concerned = concerned_shards(*round.txn, cfg_.num_shards);
    for (ShardId s : concerned)
        if (!round.votes.contains(s)) return;

    bool commit = std::all_of(concerned.begin(), concerned.end(),
                              [&](ShardId s) { return round.votes.at(s).pre_accept; });
    Message decision;
    decision.kind = commit ? MsgKind::ByzAccept : MsgKind::ByzAbort;
    decision.role = SenderRole::TxManager;
    decision.txn = round.txn;
    decision.tx_seq = pair.second;
    if (commit) {
        for (ShardId s : concerned) decision.votes.push_back(round.votes.at(s));
    } else {
        for (ShardId s : concerned) {
            const VoteCert& v = round.votes.at(s);
            if (!v.pre_accept) decision.votes.push_back(v);
        }
    }
    world.log_action(self_, pair.first, pair.second, commit ? ActionKind::TmAccept : ActionKind::TmAbort);
    for (ShardId s : concerned) world.send(self_, s, decision);
    round.decided = true;
}

void ByzTakeover::schedule(World& world) {
    Message timer;
    timer.kind = MsgKind::Timer;
    world.submit(self_, self_, std::move(timer), fire_at_);
}

void ByzTakeover::on_message(World& world, const Event& ev) {
    if (ev.msg.kind == MsgKind::Timer) {
        const SubmissionInstance* sub = log_->find_latest(txn_);
        if (!sub) return;  // nothing was ever submitted; nothing to resume
        Message req;
        req.kind = MsgKind::VoteRequest;
        req.role = SenderRole::TxManager;
        req.txn = sub->txn;
        req.tx_seq = sub->tx_seq;
        for (ShardId s : concerned_shards(*sub->txn, cfg_.num_shards)) world.send(self_, s, req);
        return;
    }
    ByzTm::on_message(world, ev);
}

void ByzClient::schedule(World& world) {
    for (size_t i = 0; i < planned_.size(); ++i) {
        Message timer;
        timer.kind = MsgKind::Timer;
        timer.tx_seq = i;
        world.submit(self_, self_, std::move(timer), planned_[i].submit_tick);
    }
}

std::pair<std::shared_ptr<const Transaction>, SeqNo> byz_submit_now(
    World& world, SubmissionLog& log, const std::vector<ShardActorBase*>& shards, const ShardConfig& cfg,
    ActorId client, const std::shared_ptr<const Transaction>& base, std::optional<SeqNo> tx_seq_override) {
    auto augmented = std::make_shared<Transaction>(attach_dummies(*base, shards, world, cfg.num_shards));

    // Clients learn each object's sequence number when they query for it.
    std::vector<SeqNo> seqs;
    for (const auto& in : augmented->inputs) {
        const ObjectRecord* rec = shards[shard_of(in, cfg.num_shards)]->find_object(in);
        seqs.push_back(rec ? rec->seq : 0);
    }
    SeqNo tx_seq = tx_seq_override ? *tx_seq_override : tx_sequence_number(seqs);
    log.note(shards, augmented, tx_seq, client, world.now());

    Message submit;
    submit.kind = MsgKind::SubmitTx;
    submit.role = SenderRole::Client;
    submit.txn = augmented;
    submit.tx_seq = tx_seq;
    for (ShardId s : concerned_shards(*augmented, cfg.num_shards)) world.send(client, s, submit);
    return {augmented, tx_seq};
}

void ByzClient::on_message(World& world, const Event& ev) {
    if (ev.msg.kind != MsgKind::Timer) return;  // Notify is terminal for the client
    const auto& plan = planned_.at(static_cast<size_t>(ev.msg.tx_seq));
    byz_submit_now(world, *log_, shards_, cfg_, self_, plan.txn, plan.tx_seq_override);
}

}  // namespace shardsim
