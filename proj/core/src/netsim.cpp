#include "shardsim/netsim.hpp"

namespace shardsim {

const char* to_string(ActionKind k) {
    switch (k) {
        case ActionKind::VotePreAccept: return "pre_accept";
        case ActionKind::VotePreAbort: return "pre_abort";
        case ActionKind::DecideCommit: return "decide_commit";
        case ActionKind::DecideAbort: return "decide_abort";
        case ActionKind::ApplyCommit: return "apply_commit";
        case ActionKind::ApplyAbort: return "apply_abort";
        case ActionKind::CreateOutput: return "create_output";
        case ActionKind::Inactivate: return "inactivate";
        case ActionKind::Reactivate: return "reactivate";
        case ActionKind::Lock: return "lock";
        case ActionKind::Unlock: return "unlock";
        case ActionKind::BumpSeq: return "bump_seq";
        case ActionKind::Clone: return "clone";
        case ActionKind::ClientAccept: return "client_accept";
        case ActionKind::ClientAbort: return "client_abort";
        case ActionKind::TmAccept: return "tm_accept";
        case ActionKind::TmAbort: return "tm_abort";
        case ActionKind::Notify: return "notify";
        case ActionKind::IgnoreReplay: return "ignore_replay";
        case ActionKind::IgnoreMalformed: return "ignore_malformed";
    }
    return "?";
}

bool RecordFilter::matches(ActorId origin, ActorId target, MsgKind kind) const {
    if (kind == MsgKind::Timer) return false;
    if (record_all) return true;
    if (!kinds.empty() && !kinds.contains(kind)) return false;
    if (!origins.empty() && !origins.contains(origin)) return false;
    if (!targets.empty() && !targets.contains(target)) return false;
    return true;
}

ActorId World::add_actor(std::unique_ptr<Actor> actor) {
    actors_.push_back(std::move(actor));
    return static_cast<ActorId>(actors_.size() - 1);
}

bool World::crashed(ActorId actor) const {
    auto it = crash_tick_.find(actor);
    return it != crash_tick_.end() && now_ >= it->second;
}

Tick World::delay_for(ActorId origin, ActorId target, MsgKind kind) const {
    Tick add = 0;
    for (const auto& rule : policy.delays) {
        if (rule.origin && *rule.origin != origin) continue;
        if (rule.target && *rule.target != target) continue;
        if (rule.kind && *rule.kind != kind) continue;
        add += rule.add;
    }
    return add;
}

void World::send(ActorId origin, ActorId target, Message msg, Tick extra_delay) {
    Tick at = now_ + 1 + extra_delay + delay_for(origin, target, msg.kind);
    submit(origin, target, std::move(msg), at);
}

void World::submit(ActorId origin, ActorId target, Message msg, Tick deliver_at, bool injected) {
    if (deliver_at < now_) throw SchedulingError("event scheduled in the past");
    if (target >= actors_.size()) throw SchedulingError("unknown target actor");
    Event ev;
    ev.deliver_at = deliver_at;
    ev.seq_no = next_seq_++;
    ev.origin = origin;
    ev.target = target;
    ev.injected = injected;
    ev.msg = std::move(msg);
    if (!injected && is_protocol_message(ev.msg.kind)) {
        stats.emitted[ev.msg.kind]++;
        stats.total_genuine++;
        if (policy.record.matches(origin, target, ev.msg.kind)) {
            recording_.push_back(RecordedMessage{origin, target, now_, ev.msg});
            std::vector<uint8_t> bytes;
            if (!policy.templates.empty()) bytes = encode_message(ev.msg);
            queue_.insert(std::move(ev));
            flush_ready_injections();
            if (!policy.templates.empty()) fire_templates(origin, bytes);
            return;
        }
    } else if (injected) {
        stats.injected++;
    }
    queue_.insert(std::move(ev));
}

void World::load_recording(std::vector<RecordedMessage> prior) {
    recording_ = std::move(prior);
    flush_ready_injections();
}

void World::inject_replay(size_t recorded_index, ActorId target, Tick deliver_at) {
    if (recorded_index >= recording_.size()) throw SchedulingError("unknown recorded message index");
    const auto& rec = recording_[recorded_index];
    // Byte-identical copy: round-trip through the canonical encoding.
    Message copy = decode_message(encode_message(rec.msg));
    submit(rec.origin, target, std::move(copy), deliver_at, /*injected=*/true);
}

void World::flush_ready_injections() {
    if (injection_done_.size() < policy.injections.size())
        injection_done_.resize(policy.injections.size(), false);
    for (size_t i = 0; i < policy.injections.size(); ++i) {
        if (injection_done_[i]) continue;
        const auto& inj = policy.injections[i];
        if (inj.recorded_index >= recording_.size()) continue;
        injection_done_[i] = true;
        inject_replay(inj.recorded_index, inj.target, inj.deliver_at);
    }
}

void World::fire_templates(ActorId origin, const std::vector<uint8_t>& bytes) {
    if (template_done_.size() < policy.templates.size()) template_done_.resize(policy.templates.size(), false);
    for (size_t i = 0; i < policy.templates.size(); ++i) {
        if (template_done_[i]) continue;
        const auto& tpl = policy.templates[i];
        if (tpl.origin != origin || tpl.payload != bytes) continue;
        template_done_[i] = true;
        Message copy = decode_message(tpl.payload);
        submit(origin, tpl.target, std::move(copy), std::max(tpl.deliver_at, now_ + 1), /*injected=*/true);
    }
}

std::optional<Event> World::step() {
    flush_ready_injections();
    if (queue_.empty()) return std::nullopt;
    Event ev = *queue_.begin();
    queue_.erase(queue_.begin());
    now_ = ev.deliver_at;
    events_delivered_++;
    if (!crashed(ev.target)) {
        actors_[ev.target]->on_message(*this, ev);
    }
    return ev;
}

void World::run_to_quiescence(uint64_t max_events) {
    uint64_t steps = 0;
    while (step()) {
        if (++steps > max_events) throw SchedulingError("event budget exhausted; runaway scenario");
    }
}

void World::log_action(ActorId actor, TxnId txn, SeqNo tx_seq, ActionKind action, ObjectId obj) {
    DecisionEntry entry{now_, actor, txn, tx_seq, action, obj};
    decision_log_.push_back(entry);
    if (on_action) on_action(*this, decision_log_.back());
}

}  // namespace shardsim
