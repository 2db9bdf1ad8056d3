#include "shardsim/sbac.hpp"

#include <algorithm>

namespace shardsim {

void SubmissionLog::note(const std::vector<ShardActorBase*>& shards, std::shared_ptr<const Transaction> txn,
                         SeqNo tx_seq, ActorId client, Tick tick) {
    SubmissionInstance inst;
    inst.txn = std::move(txn);
    inst.tx_seq = tx_seq;
    inst.client = client;
    inst.tick = tick;
    inst.world_before = take_snapshot(shards);
    instances[inst.txn->id].push_back(std::move(inst));
}

void SbacShard::on_message(World& world, const Event& ev) {
    switch (ev.msg.kind) {
        case MsgKind::SubmitTx: phase1(world, ev); break;
        case MsgKind::SbacPreAccept:
        case MsgKind::SbacPreAbort: on_vote(world, ev); break;
        case MsgKind::SbacAccept: output_apply(world, ev); break;
        case MsgKind::SbacAbort: break;  // no action on abort at any shard that did not self-decide
        default: break;
    }
}

Message SbacShard::vote_message(const Pending& p) const {
    Message msg;
    msg.kind = p.own_pre_accept ? MsgKind::SbacPreAccept : MsgKind::SbacPreAbort;
    msg.role = SenderRole::Shard;
    msg.sender_shard = shard_;
    msg.txn = p.txn;
    msg.cert = cert_for(p.txn->id, 0, msg.kind);
    return msg;
}

void SbacShard::phase1(World& world, const Event& ev) {
    const auto& txn = ev.msg.txn;
    if (!txn) return;
    auto locals = local_inputs(*txn);
    if (locals.empty()) {
        world.not_concerned_deliveries++;
        return;
    }
    auto it = pending_.find(txn->id);
    if (it != pending_.end() && it->second.voted) return;  // duplicate submission
    Pending& p = pending_[txn->id];
    p.txn = txn;
    p.client = ev.origin;
    p.have_client = true;

    bool ok = true;
    for (const auto& in : locals) {
        const ObjectRecord* rec = find_object(in);
        if (!rec || !rec->active()) {
            ok = false;
            break;
        }
    }
    if (ok) {
        for (const auto& in : locals) {
            ObjectRecord& rec = objects_[in];
            rec.state = ObjectStateKind::Locked;
            rec.locked_by = txn->id;
            rec.locked_tx_seq = 0;
            world.log_action(shard_, txn->id, 0, ActionKind::Lock, in);
        }
    }
    p.voted = true;
    p.own_pre_accept = ok;
    p.votes.emplace(shard_, ok);
    world.log_action(shard_, txn->id, 0, ok ? ActionKind::VotePreAccept : ActionKind::VotePreAbort);

    Message vote = vote_message(p);
    for (ShardId peer : input_shards(*txn, cfg_.num_shards)) {
        if (peer == shard_) continue;
        world.send(shard_, peer, vote);
    }
    maybe_decide(world, txn->id);
}

void SbacShard::on_vote(World& world, const Event& ev) {
    const auto& txn = ev.msg.txn;
    if (!txn) return;
    Pending& p = pending_[txn->id];
    if (!p.txn) p.txn = txn;
    p.votes.emplace(ev.msg.sender_shard, ev.msg.kind == MsgKind::SbacPreAccept);
    maybe_decide(world, txn->id);
}

void SbacShard::maybe_decide(World& world, TxnId txn_id) {
    auto it = pending_.find(txn_id);
    if (it == pending_.end()) return;
    Pending& p = it->second;
    if (!p.voted || !p.txn) return;
    auto in_shards = input_shards(*p.txn, cfg_.num_shards);
    for (ShardId s : in_shards)
        if (!p.votes.contains(s)) return;

    bool commit = std::all_of(in_shards.begin(), in_shards.end(), [&](ShardId s) { return p.votes.at(s); });
    auto txn = p.txn;
    ActorId client = p.client;
    bool have_client = p.have_client;

    world.log_action(shard_, txn_id, 0, commit ? ActionKind::DecideCommit : ActionKind::DecideAbort);
    if (commit) {
        for (const auto& in : local_inputs(*txn)) {
            ObjectRecord& rec = objects_[in];
            rec.state = ObjectStateKind::Inactive;
            world.log_action(shard_, txn_id, 0, ActionKind::Inactivate, in);
        }
        for (const auto& spec : local_outputs(*txn)) {
            put_object(ObjectRecord{spec.id, ObjectStateKind::Active, 0, shard_});
            world.log_action(shard_, txn_id, 0, ActionKind::CreateOutput, spec.id);
        }
    } else {
        for (const auto& in : local_inputs(*txn)) {
            auto oit = objects_.find(in);
            if (oit == objects_.end()) continue;
            ObjectRecord& rec = oit->second;
            if (rec.state == ObjectStateKind::Locked && rec.locked_by == txn_id) {
                rec.state = ObjectStateKind::Active;
                world.log_action(shard_, txn_id, 0, ActionKind::Unlock, in);
            }
        }
    }

    Message decision;
    decision.kind = commit ? MsgKind::SbacAccept : MsgKind::SbacAbort;
    decision.role = SenderRole::Shard;
    decision.sender_shard = shard_;
    decision.txn = txn;
    decision.cert = cert_for(txn_id, 0, decision.kind);
    if (have_client) world.send(shard_, client, decision);
    for (ShardId out : output_only_shards(*txn, cfg_.num_shards)) world.send(shard_, out, decision);

    // No record of the concluded instance is kept; a later submission of the
    // same transaction starts from scratch.
    pending_.erase(txn_id);
}

void SbacShard::output_apply(World& world, const Event& ev) {
    const auto& txn = ev.msg.txn;
    if (!txn) return;
    if (!local_inputs(*txn).empty()) return;  // input shards decide for themselves
    auto specs = local_outputs(*txn);
    if (specs.empty()) {
        world.not_concerned_deliveries++;
        return;
    }
    // Created unconditionally: inactive objects leave no record to check
    // against, so a replayed Accept recreates a spent output.
    for (const auto& spec : specs) {
        put_object(ObjectRecord{spec.id, ObjectStateKind::Active, 0, shard_});
        world.log_action(shard_, txn->id, 0, ActionKind::CreateOutput, spec.id);
    }
}

void SbacClient::schedule(World& world) {
    for (size_t i = 0; i < planned_.size(); ++i) {
        Message timer;
        timer.kind = MsgKind::Timer;
        timer.tx_seq = i;
        world.submit(self_, self_, std::move(timer), planned_[i].submit_tick);
    }
}

void SbacClient::on_message(World& world, const Event& ev) {
    if (ev.msg.kind == MsgKind::Timer) {
        const auto& plan = planned_.at(static_cast<size_t>(ev.msg.tx_seq));
        log_->note(shards_, plan.txn, 0, self_, world.now());
        Message submit;
        submit.kind = MsgKind::SubmitTx;
        submit.role = SenderRole::Client;
        submit.txn = plan.txn;
        for (ShardId s : input_shards(*plan.txn, cfg_.num_shards)) world.send(self_, s, submit);
        return;
    }
    if (ev.msg.kind == MsgKind::SbacAccept || ev.msg.kind == MsgKind::SbacAbort) {
        if (!ev.msg.txn) return;
        if (concluded_.insert(ev.msg.txn->id).second) {
            bool commit = ev.msg.kind == MsgKind::SbacAccept;
            world.log_action(self_, ev.msg.txn->id, 0,
                             commit ? ActionKind::ClientAccept : ActionKind::ClientAbort);
        }
    }
}

}  // namespace shardsim
