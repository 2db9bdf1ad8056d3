#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>

#include "shardsim/codec.hpp"
#include "shardsim/message.hpp"

namespace shardsim {

struct SchedulingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Event {
    Tick deliver_at = 0;
    uint64_t seq_no = 0;  // global monotone counter; ties at a tick break by it
    ActorId origin = 0;
    ActorId target = 0;
    bool injected = false;
    Message msg;
};

struct EventOrder {
    bool operator()(const Event& a, const Event& b) const {
        if (a.deliver_at != b.deliver_at) return a.deliver_at < b.deliver_at;
        return a.seq_no < b.seq_no;
    }
};

// Predicate over (origin, target, message kind); empty sets mean "any".
struct RecordFilter {
    bool record_all = true;
    std::set<MsgKind> kinds;
    std::set<ActorId> origins;
    std::set<ActorId> targets;

    bool matches(ActorId origin, ActorId target, MsgKind kind) const;
};

struct Injection {
    size_t recorded_index = 0;
    ActorId target = 0;
    Tick deliver_at = 0;
};

// Same-run replay: fires the first time the run records a message with this
// origin and exact payload, delivering the copy at max(deliver_at, now + 1).
// A run that diverges before emitting the message never fires the template,
// which is what replay fidelity demands: the adversary cannot inject a
// message no history ever produced.
struct TemplateInjection {
    ActorId origin = 0;
    std::vector<uint8_t> payload;
    ActorId target = 0;
    Tick deliver_at = 0;
};

struct DelayRule {
    std::optional<ActorId> origin;
    std::optional<ActorId> target;
    std::optional<MsgKind> kind;
    Tick add = 0;
};

struct AdversaryPolicy {
    RecordFilter record;
    std::vector<Injection> injections;
    std::vector<TemplateInjection> templates;
    std::vector<DelayRule> delays;
};

// What a shard/client/TM did, for the oracle and the table transcriptions.
enum class ActionKind : uint8_t {
    VotePreAccept,
    VotePreAbort,
    DecideCommit,   // sbac shard-local phase-2 decision
    DecideAbort,
    ApplyCommit,    // decision applied to local objects
    ApplyAbort,
    CreateOutput,
    Inactivate,
    Reactivate,
    Lock,
    Unlock,
    BumpSeq,
    Clone,
    ClientAccept,
    ClientAbort,
    TmAccept,
    TmAbort,
    Notify,
    IgnoreReplay,   // byzcuit: decision without a cached (T, s_T)
    IgnoreMalformed,
};

const char* to_string(ActionKind k);

struct DecisionEntry {
    Tick tick = 0;
    ActorId actor = 0;
    TxnId txn = 0;
    SeqNo tx_seq = 0;
    ActionKind action = ActionKind::VotePreAccept;
    ObjectId object;  // meaningful for object-level actions
};

struct MessageStats {
    std::map<MsgKind, uint64_t> emitted;  // genuine emissions
    uint64_t injected = 0;
    uint64_t total_genuine = 0;

    uint64_t of(MsgKind k) const {
        auto it = emitted.find(k);
        return it == emitted.end() ? 0 : it->second;
    }
};

class World;

class Actor {
  public:
    virtual ~Actor() = default;
    virtual void on_message(World& world, const Event& ev) = 0;
};

class World {
  public:
    explicit World(ShardConfig cfg) : cfg_(std::move(cfg)) {}

    const ShardConfig& config() const { return cfg_; }
    Tick now() const { return now_; }

    ActorId add_actor(std::unique_ptr<Actor> actor);
    Actor* actor(ActorId id) { return actors_.at(id).get(); }
    size_t actor_count() const { return actors_.size(); }

    // Enqueue a genuine message. Emission time is now(); the message is
    // recorded here if the adversary's filter matches.
    void send(ActorId origin, ActorId target, Message msg, Tick extra_delay = 0);
    // Enqueue with an explicit delivery tick (scenario seeding).
    void submit(ActorId origin, ActorId target, Message msg, Tick deliver_at, bool injected = false);

    // Deliver the least event; nullopt when quiescent.
    std::optional<Event> step();
    void run_to_quiescence(uint64_t max_events = 1'000'000);

    AdversaryPolicy policy;

    const std::vector<RecordedMessage>& recording() const { return recording_; }
    void load_recording(std::vector<RecordedMessage> prior);
    // Replay a recorded message: byte-identical copy, adversary-chosen target
    // and delivery tick. Earlier ticks (or earlier enqueue at the same tick)
    // beat the genuine message, which realizes the race.
    void inject_replay(size_t recorded_index, ActorId target, Tick deliver_at);

    void crash_at(ActorId actor, Tick tick) { crash_tick_[actor] = tick; }
    bool crashed(ActorId actor) const;

    void log_action(ActorId actor, TxnId txn, SeqNo tx_seq, ActionKind action, ObjectId obj = {});
    const std::vector<DecisionEntry>& decision_log() const { return decision_log_; }

    MessageStats stats;
    uint64_t events_delivered() const { return events_delivered_; }
    uint64_t not_concerned_deliveries = 0;  // adversarial deliveries shrugged off by actors

    uint64_t mint_raw() { return next_raw_id_++; }

    // Every completed terminal decision application, polled by run monitors.
    std::function<void(World&, const DecisionEntry&)> on_action;

  private:
    void flush_ready_injections();
    void fire_templates(ActorId origin, const std::vector<uint8_t>& bytes);
    Tick delay_for(ActorId origin, ActorId target, MsgKind kind) const;

    ShardConfig cfg_;
    Tick now_ = 0;
    uint64_t next_seq_ = 0;
    uint64_t events_delivered_ = 0;
    uint64_t next_raw_id_ = 1ull << 44;  // minted ids sit above the name-hash band
    std::set<Event, EventOrder> queue_;
    std::vector<std::unique_ptr<Actor>> actors_;
    std::vector<RecordedMessage> recording_;
    std::vector<bool> injection_done_;
    std::vector<bool> template_done_;
    std::map<ActorId, Tick> crash_tick_;
    std::vector<DecisionEntry> decision_log_;
};

}  // namespace shardsim
