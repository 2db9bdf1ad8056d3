#include "shardsim/atomix.hpp"

#include <algorithm>

namespace shardsim {

void AtomixShard::on_message(World& world, const Event& ev) {
    switch (ev.msg.kind) {
        case MsgKind::SubmitTx: phase1(world, ev); break;
        case MsgKind::AtomixAccept: apply_accept(world, ev); break;
        case MsgKind::AtomixAbort: apply_abort(world, ev); break;
        default: break;
    }
}

void AtomixShard::phase1(World& world, const Event& ev) {
    const auto& txn = ev.msg.txn;
    if (!txn) return;
    auto locals = local_inputs(*txn);
    if (locals.empty()) {
        world.not_concerned_deliveries++;
        return;
    }
    bool ok = true;
    for (const auto& in : locals) {
        const ObjectRecord* rec = find_object(in);
        if (!rec || !rec->active()) {
            ok = false;
            break;
        }
    }
    VoteCert vc;
    vc.shard = shard_;
    vc.pre_accept = ok;
    vc.tx_seq = 0;
    for (const auto& in : locals) {
        const ObjectRecord* rec = find_object(in);
        vc.input_seqs.emplace_back(in, rec ? rec->seq : 0);
    }
    vc.cert = cert_for(txn->id, 0, ok ? MsgKind::AtomixPreAccept : MsgKind::AtomixPreAbort);

    if (ok) {
        // Optimistic: the write is durable now; only a client Abort undoes it.
        for (const auto& in : locals) {
            objects_[in].state = ObjectStateKind::Inactive;
            world.log_action(shard_, txn->id, 0, ActionKind::Inactivate, in);
        }
    }
    world.log_action(shard_, txn->id, 0, ok ? ActionKind::VotePreAccept : ActionKind::VotePreAbort);

    Message vote;
    vote.kind = ok ? MsgKind::AtomixPreAccept : MsgKind::AtomixPreAbort;
    vote.role = SenderRole::Shard;
    vote.sender_shard = shard_;
    vote.txn = txn;
    vote.cert = vc.cert;
    vote.votes.push_back(std::move(vc));
    world.send(shard_, ev.origin, vote);
}

void AtomixShard::apply_accept(World& world, const Event& ev) {
    const auto& txn = ev.msg.txn;
    if (!txn) return;
    auto specs = local_outputs(*txn);
    if (specs.empty()) {
        world.not_concerned_deliveries++;
        return;
    }
    // Well-formed means one cert-valid proof-of-accept per input shard;
    // freshness is not checked anywhere.
    for (ShardId s : input_shards(*txn, cfg_.num_shards)) {
        auto it = std::find_if(ev.msg.votes.begin(), ev.msg.votes.end(), [&](const VoteCert& v) {
            return v.shard == s && v.pre_accept && validate_cert(v.cert, cfg_);
        });
        if (it == ev.msg.votes.end()) {
            world.log_action(shard_, txn->id, 0, ActionKind::IgnoreMalformed);
            return;
        }
    }
    for (const auto& spec : specs) {
        put_object(ObjectRecord{spec.id, ObjectStateKind::Active, 0, shard_});
        world.log_action(shard_, txn->id, 0, ActionKind::CreateOutput, spec.id);
    }
}

void AtomixShard::apply_abort(World& world, const Event& ev) {
    const auto& txn = ev.msg.txn;
    if (!txn) return;
    bool proof = std::any_of(ev.msg.votes.begin(), ev.msg.votes.end(), [&](const VoteCert& v) {
        return !v.pre_accept && validate_cert(v.cert, cfg_);
    });
    if (!proof) {
        world.log_action(shard_, txn->id, 0, ActionKind::IgnoreMalformed);
        return;
    }
    // Re-activation does not check whether this transaction inactivated the
    // object, or whether it is even pending.
    for (const auto& in : local_inputs(*txn)) {
        auto it = objects_.find(in);
        if (it == objects_.end()) continue;
        if (it->second.state != ObjectStateKind::Active) {
            it->second.state = ObjectStateKind::Active;
            world.log_action(shard_, txn->id, 0, ActionKind::Reactivate, in);
        }
    }
}

void AtomixClient::schedule(World& world) {
    for (size_t i = 0; i < planned_.size(); ++i) {
        Message timer;
        timer.kind = MsgKind::Timer;
        timer.tx_seq = i;
        world.submit(self_, self_, std::move(timer), planned_[i].submit_tick);
    }
}

void AtomixClient::on_message(World& world, const Event& ev) {
    if (ev.msg.kind == MsgKind::Timer) {
        const auto& plan = planned_.at(static_cast<size_t>(ev.msg.tx_seq));
        log_->note(shards_, plan.txn, 0, self_, world.now());
        // A resubmission opens a fresh attempt; votes tally from scratch.
        concluded_.erase(plan.txn->id);
        pending_[plan.txn->id] = Pending{};
        pending_[plan.txn->id].txn = plan.txn;
        Message submit;
        submit.kind = MsgKind::SubmitTx;
        submit.role = SenderRole::Client;
        submit.txn = plan.txn;
        for (ShardId s : input_shards(*plan.txn, cfg_.num_shards)) world.send(self_, s, submit);
        return;
    }
    if (ev.msg.kind != MsgKind::AtomixPreAccept && ev.msg.kind != MsgKind::AtomixPreAbort) return;
    if (!ev.msg.txn || ev.msg.votes.empty()) return;
    TxnId id = ev.msg.txn->id;
    if (!known_.contains(id)) return;

    const VoteCert& vc = ev.msg.votes.front();
    if (auto cit = concluded_.find(id); cit != concluded_.end()) {
        // A pre-accept landing after an abort decision still gets rolled
        // back, so late (or raced-out) voters re-activate their inputs.
        if (!cit->second.accepted && vc.pre_accept) send_abort(world, cit->second, vc.shard);
        return;
    }
    auto pit = pending_.find(id);
    if (pit == pending_.end()) return;
    pit->second.votes.emplace(vc.shard, vc);
    if (vc.pre_accept) pit->second.saw_pre_accept.insert(vc.shard);
    decide(world, id);
}

void AtomixClient::decide(World& world, TxnId txn_id) {
    Pending& p = pending_.at(txn_id);
    auto in_shards = input_shards(*p.txn, cfg_.num_shards);
    for (ShardId s : in_shards)
        if (!p.votes.contains(s)) return;

    bool commit = std::all_of(in_shards.begin(), in_shards.end(),
                              [&](ShardId s) { return p.votes.at(s).pre_accept; });
    Concluded c;
    c.accepted = commit;
    c.txn = p.txn;
    world.log_action(self_, txn_id, 0, commit ? ActionKind::ClientAccept : ActionKind::ClientAbort);
    if (commit) {
        Message accept;
        accept.kind = MsgKind::AtomixAccept;
        accept.role = SenderRole::Client;
        accept.txn = p.txn;
        for (ShardId s : in_shards) accept.votes.push_back(p.votes.at(s));
        std::set<ShardId> out_shards;
        for (const auto& spec : p.txn->outputs) out_shards.insert(spec.shard);
        for (ShardId s : out_shards) world.send(self_, s, accept);
    } else {
        for (const auto& [shard, vote] : p.votes)
            if (!vote.pre_accept) c.abort_proofs.push_back(vote);
        // Roll back every shard that claimed a pre-accept, even one whose
        // counted (first-received) vote was an abort.
        for (ShardId s : p.saw_pre_accept) send_abort(world, c, s);
    }
    concluded_[txn_id] = std::move(c);
    pending_.erase(txn_id);
}

void AtomixClient::send_abort(World& world, Concluded& c, ShardId to) {
    if (!c.abort_sent_to.insert(to).second) return;
    Message abort;
    abort.kind = MsgKind::AtomixAbort;
    abort.role = SenderRole::Client;
    abort.txn = c.txn;
    abort.votes = c.abort_proofs;
    world.send(self_, to, abort);
}

}  // namespace shardsim
