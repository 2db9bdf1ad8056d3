#include "shardsim/scenario.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace shardsim {

using json = nlohmann::ordered_json;

namespace {

std::optional<MsgKind> kind_from_string(const std::string& s) {
    for (int k = 0; k <= static_cast<int>(MsgKind::Timer); ++k) {
        auto kind = static_cast<MsgKind>(k);
        if (s == to_string(kind)) return kind;
    }
    return std::nullopt;
}

std::optional<ObjectStateKind> state_from_string(const std::string& s) {
    if (s == "active") return ObjectStateKind::Active;
    if (s == "inactive") return ObjectStateKind::Inactive;
    if (s == "locked") return ObjectStateKind::Locked;
    return std::nullopt;
}

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw SchemaError("scenario field '" + field + "': " + why);
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        fail(key, "wrong type");
    }
}

}  // namespace

ShardConfig ScenarioScript::shard_config() const {
    ShardConfig cfg;
    cfg.num_shards = num_shards;
    cfg.nodes_per_shard = nodes_per_shard;
    cfg.max_faulty = f;
    cfg.overflow_threshold = overflow_threshold;
    cfg.clone_margin = clone_margin;
    cfg.dummy_pool_size = dummy_pool_size;
    return cfg;
}

ScenarioScript parse_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("scenario is not valid JSON: ") + e.what());
    }
    ScenarioScript s;
    s.name = get_or<std::string>(j, "name", "scenario");
    auto proto = protocol_from_string(get_or<std::string>(j, "protocol", ""));
    if (!proto) fail("protocol", "must be one of sbac|atomix|byzcuit");
    s.protocol = *proto;
    s.num_shards = get_or<uint32_t>(j, "num_shards", 3);
    if (s.num_shards < 1) fail("num_shards", "must be >= 1");
    s.nodes_per_shard = get_or<uint32_t>(j, "nodes_per_shard", 4);
    s.f = get_or<uint32_t>(j, "f", 1);
    if (s.nodes_per_shard < 3 * s.f + 1) fail("f", "shards need at least 3f+1 nodes");
    s.overflow_threshold = get_or<SeqNo>(j, "overflow_threshold", 1ull << 16);
    s.clone_margin = get_or<SeqNo>(j, "clone_margin", 1);
    s.dummy_pool_size = get_or<uint32_t>(j, "dummy_pool_size", 8);
    s.num_clients = get_or<uint32_t>(j, "num_clients", 1);
    s.seed = get_or<uint64_t>(j, "seed", 0);
    s.recording_in = get_or<std::string>(j, "recording_in", "");
    s.recording_out = get_or<std::string>(j, "recording_out", "");

    std::set<std::string> names;
    if (j.contains("objects")) {
        for (const auto& o : j.at("objects")) {
            ScenarioObject obj;
            obj.name = get_or<std::string>(o, "name", "");
            if (obj.name.empty()) fail("objects[].name", "required");
            if (!names.insert(obj.name).second) fail("objects[].name", "duplicate id " + obj.name);
            obj.shard = get_or<ShardId>(o, "shard", 0);
            if (obj.shard >= s.num_shards) fail("objects[].shard", "out of range for " + obj.name);
            auto st = state_from_string(get_or<std::string>(o, "state", "active"));
            if (!st || *st == ObjectStateKind::Locked) fail("objects[].state", "must be active|inactive");
            obj.state = *st;
            obj.seq = get_or<SeqNo>(o, "seq", 0);
            s.objects.push_back(obj);
        }
    }
    if (j.contains("transactions")) {
        // A repeated transaction name means a resubmission of the same
        // transaction; its structure must match the first declaration.
        std::map<std::string, size_t> tx_names;
        for (const auto& t : j.at("transactions")) {
            ScenarioTx tx;
            tx.name = get_or<std::string>(t, "name", "");
            if (tx.name.empty()) fail("transactions[].name", "required");
            bool resubmission = tx_names.contains(tx.name);
            if (!t.contains("inputs") || t.at("inputs").empty())
                fail("transactions[].inputs", "must be nonempty for " + tx.name);
            for (const auto& in : t.at("inputs")) {
                std::string ref = in.get<std::string>();
                if (!names.contains(ref)) fail("transactions[].inputs", "undeclared object " + ref);
                tx.inputs.push_back(ref);
            }
            if (t.contains("outputs")) {
                for (const auto& o : t.at("outputs")) {
                    ScenarioOutput out;
                    out.name = get_or<std::string>(o, "name", "");
                    if (out.name.empty()) fail("transactions[].outputs[].name", "required");
                    if (!resubmission && !names.insert(out.name).second)
                        fail("transactions[].outputs[].name", "duplicate id " + out.name);
                    out.shard = get_or<ShardId>(o, "shard", 0);
                    if (out.shard >= s.num_shards) fail("transactions[].outputs[].shard", "out of range");
                    tx.outputs.push_back(out);
                }
            }
            if (resubmission) {
                const ScenarioTx& first = s.transactions[tx_names.at(tx.name)];
                bool same = first.inputs == tx.inputs && first.outputs.size() == tx.outputs.size();
                for (size_t i = 0; same && i < tx.outputs.size(); ++i)
                    same = first.outputs[i].name == tx.outputs[i].name &&
                           first.outputs[i].shard == tx.outputs[i].shard;
                if (!same) fail("transactions[].name", "resubmission of " + tx.name + " differs structurally");
            } else {
                tx_names[tx.name] = s.transactions.size();
            }
            tx.submit_tick = get_or<Tick>(t, "submit_tick", 0);
            tx.client = get_or<uint32_t>(t, "client", 0);
            if (tx.client >= s.num_clients) fail("transactions[].client", "out of range");
            if (t.contains("tx_seq_override") && !t.at("tx_seq_override").is_null())
                tx.tx_seq_override = t.at("tx_seq_override").get<SeqNo>();
            s.transactions.push_back(tx);
        }
    }
    if (j.contains("adversary")) {
        const auto& a = j.at("adversary");
        if (a.contains("record")) {
            const auto& r = a.at("record");
            s.record.all = get_or<bool>(r, "all", !(r.contains("kinds") || r.contains("origins") || r.contains("targets")));
            for (const char* key : {"kinds", "origins", "targets"}) {
                if (!r.contains(key)) continue;
                for (const auto& v : r.at(key)) {
                    std::string str = v.get<std::string>();
                    if (std::string(key) == "kinds" && !kind_from_string(str)) fail("record.kinds", "unknown kind " + str);
                    if (std::string(key) == "kinds") s.record.kinds.push_back(str);
                    else if (std::string(key) == "origins") s.record.origins.push_back(str);
                    else s.record.targets.push_back(str);
                }
                s.record.all = false;
            }
        }
        if (a.contains("injections")) {
            for (const auto& i : a.at("injections")) {
                ScenarioInjection inj;
                inj.recorded_index = get_or<size_t>(i, "recorded", 0);
                inj.target = get_or<std::string>(i, "target", "");
                if (inj.target.empty()) fail("injections[].target", "required");
                inj.at = get_or<Tick>(i, "at", 0);
                s.injections.push_back(inj);
            }
        }
        if (a.contains("delays")) {
            for (const auto& d : a.at("delays")) {
                ScenarioDelay delay;
                if (d.contains("origin")) delay.origin = d.at("origin").get<std::string>();
                if (d.contains("target")) delay.target = d.at("target").get<std::string>();
                if (d.contains("kind")) {
                    std::string ks = d.at("kind").get<std::string>();
                    if (!kind_from_string(ks)) fail("delays[].kind", "unknown kind " + ks);
                    delay.kind = ks;
                }
                delay.add = get_or<Tick>(d, "add", 0);
                s.delays.push_back(delay);
            }
        }
    }
    if (j.contains("crashes")) {
        for (const auto& c : j.at("crashes")) {
            ScenarioCrash crash;
            crash.actor = get_or<std::string>(c, "actor", "");
            if (crash.actor.empty()) fail("crashes[].actor", "required");
            crash.at = get_or<Tick>(c, "at", 0);
            s.crashes.push_back(crash);
        }
    }
    if (j.contains("takeovers")) {
        for (const auto& t : j.at("takeovers")) {
            ScenarioTakeover takeover;
            takeover.txn = get_or<std::string>(t, "txn", "");
            takeover.fire_at = get_or<Tick>(t, "fire_at", 0);
            s.takeovers.push_back(takeover);
        }
    }
    if (j.contains("expect") && !j.at("expect").is_null()) {
        ScenarioExpect e;
        const auto& ex = j.at("expect");
        if (ex.contains("classifications"))
            for (auto& [k, v] : ex.at("classifications").items()) e.classifications[k] = v.get<std::string>();
        if (ex.contains("objects"))
            for (auto& [k, v] : ex.at("objects").items()) e.objects[k] = v.get<std::string>();
        s.expect = e;
    }
    return s;
}

std::string scenario_to_json(const ScenarioScript& s) {
    json j;
    j["version"] = 1;
    j["name"] = s.name;
    j["protocol"] = to_string(s.protocol);
    j["num_shards"] = s.num_shards;
    j["nodes_per_shard"] = s.nodes_per_shard;
    j["f"] = s.f;
    j["overflow_threshold"] = s.overflow_threshold;
    j["clone_margin"] = s.clone_margin;
    j["dummy_pool_size"] = s.dummy_pool_size;
    j["num_clients"] = s.num_clients;
    j["seed"] = s.seed;
    j["objects"] = json::array();
    for (const auto& o : s.objects)
        j["objects"].push_back({{"name", o.name}, {"shard", o.shard}, {"state", to_string(o.state)}, {"seq", o.seq}});
    j["transactions"] = json::array();
    for (const auto& t : s.transactions) {
        json tx;
        tx["name"] = t.name;
        tx["inputs"] = t.inputs;
        tx["outputs"] = json::array();
        for (const auto& o : t.outputs) tx["outputs"].push_back({{"name", o.name}, {"shard", o.shard}});
        tx["submit_tick"] = t.submit_tick;
        tx["client"] = t.client;
        if (t.tx_seq_override) tx["tx_seq_override"] = *t.tx_seq_override;
        j["transactions"].push_back(tx);
    }
    json adv;
    if (!s.record.all) {
        json r;
        if (!s.record.kinds.empty()) r["kinds"] = s.record.kinds;
        if (!s.record.origins.empty()) r["origins"] = s.record.origins;
        if (!s.record.targets.empty()) r["targets"] = s.record.targets;
        adv["record"] = r;
    }
    if (!s.injections.empty()) {
        adv["injections"] = json::array();
        for (const auto& i : s.injections)
            adv["injections"].push_back({{"recorded", i.recorded_index}, {"target", i.target}, {"at", i.at}});
    }
    if (!s.delays.empty()) {
        adv["delays"] = json::array();
        for (const auto& d : s.delays) {
            json dj;
            if (d.origin) dj["origin"] = *d.origin;
            if (d.target) dj["target"] = *d.target;
            if (d.kind) dj["kind"] = *d.kind;
            dj["add"] = d.add;
            adv["delays"].push_back(dj);
        }
    }
    if (!adv.is_null() && !adv.empty()) j["adversary"] = adv;
    if (!s.crashes.empty()) {
        j["crashes"] = json::array();
        for (const auto& c : s.crashes) j["crashes"].push_back({{"actor", c.actor}, {"at", c.at}});
    }
    if (!s.takeovers.empty()) {
        j["takeovers"] = json::array();
        for (const auto& t : s.takeovers) j["takeovers"].push_back({{"txn", t.txn}, {"fire_at", t.fire_at}});
    }
    if (!s.recording_in.empty()) j["recording_in"] = s.recording_in;
    if (!s.recording_out.empty()) j["recording_out"] = s.recording_out;
    if (s.expect) {
        json e;
        e["classifications"] = s.expect->classifications;
        e["objects"] = s.expect->objects;
        j["expect"] = e;
    }
    return j.dump(2) + "\n";
}

ScenarioScript load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open scenario file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

ActorId ActorLayout::resolve(const std::string& ref) const {
    auto colon = ref.find(':');
    std::string kind = ref.substr(0, colon);
    uint32_t index = 0;
    if (colon != std::string::npos) index = static_cast<uint32_t>(std::stoul(ref.substr(colon + 1)));
    if (kind == "shard" && index < num_shards) return shard(index);
    if (kind == "client" && index < num_clients) return client(index);
    if (kind == "tm" && has_tm && index == 0) return tm();
    if (kind == "takeover" && index < num_takeovers) return takeover(index);
    throw SchemaError("unknown actor reference: " + ref);
}

std::string ActorLayout::describe(ActorId id) const {
    if (id < num_shards) return "shard:" + std::to_string(id);
    if (id < num_shards + num_clients) return "client:" + std::to_string(id - num_shards);
    if (has_tm && id == tm()) return "tm:0";
    return "takeover:" + std::to_string(id - num_shards - num_clients - (has_tm ? 1 : 0));
}

std::string SimInstance::object_name(const ObjectId& id) const {
    auto it = object_names.find(id);
    if (it != object_names.end()) return it->second;
    if (id.dummy) {
        uint64_t counter = id.raw & ((1ull << kDummyShardShift) - 1);
        uint64_t shard = id.raw >> kDummyShardShift;
        return "d" + std::to_string(shard) + "." + std::to_string(counter);
    }
    return "obj." + std::to_string(id.raw);
}

std::string SimInstance::txn_name(TxnId id) const {
    auto it = txn_names.find(id);
    return it == txn_names.end() ? "txn." + std::to_string(id) : it->second;
}

std::unique_ptr<SimInstance> build_sim(const ScenarioScript& script, const std::vector<RecordedMessage>* loaded_log) {
    auto sim = std::make_unique<SimInstance>();
    sim->cfg = script.shard_config();
    sim->protocol = script.protocol;
    sim->layout.num_shards = script.num_shards;
    sim->layout.num_clients = script.num_clients;
    sim->layout.has_tm = script.protocol == Protocol::Byzcuit;
    sim->layout.num_takeovers = static_cast<uint32_t>(script.takeovers.size());
    sim->world = std::make_unique<World>(sim->cfg);
    World& world = *sim->world;

    // Shards first so actor id == shard id.
    for (ShardId s = 0; s < script.num_shards; ++s) {
        std::unique_ptr<ShardActorBase> actor;
        switch (script.protocol) {
            case Protocol::Sbac: actor = std::make_unique<SbacShard>(s, sim->cfg); break;
            case Protocol::Atomix: actor = std::make_unique<AtomixShard>(s, sim->cfg); break;
            case Protocol::Byzcuit: actor = std::make_unique<ByzShard>(s, sim->cfg, sim->layout.tm()); break;
        }
        sim->shards.push_back(actor.get());
        world.add_actor(std::move(actor));
    }

    // Ids derive from object names so a message recorded in one world refers
    // to the same objects in any other world that declares those names. The
    // low bits keep the id congruent to its shard for shard_of.
    auto assign_id = [&](const std::string& name, ShardId shard) {
        uint64_t h = fnv1a(reinterpret_cast<const uint8_t*>(name.data()), name.size());
        ObjectId id = make_object_id((h % (1ull << 40)) * script.num_shards + shard);
        if (auto it = sim->object_names.find(id); it != sim->object_names.end() && it->second != name)
            throw SchemaError("object id collision between " + name + " and " + it->second);
        sim->object_ids[name] = id;
        sim->object_names[id] = name;
        return id;
    };
    for (const auto& obj : script.objects) {
        ObjectId id = assign_id(obj.name, obj.shard);
        sim->shards[obj.shard]->put_object(ObjectRecord{id, obj.state, obj.seq, obj.shard});
    }
    for (const auto& tx : script.transactions)
        for (const auto& out : tx.outputs)
            if (!sim->object_ids.contains(out.name)) assign_id(out.name, out.shard);

    if (script.protocol == Protocol::Byzcuit) {
        for (ShardId s = 0; s < script.num_shards; ++s)
            for (uint32_t k = 0; k < sim->cfg.dummy_pool_size; ++k)
                sim->shards[s]->put_object(ObjectRecord{make_dummy_id(s, k), ObjectStateKind::Active, 0, s});
    }

    // Transactions, grouped per client. Ids are name-derived for the same
    // cross-world stability as objects.
    std::vector<std::vector<PlannedSubmission>> plans(script.num_clients);
    for (const auto& tx : script.transactions) {
        auto txn = std::make_shared<Transaction>();
        txn->id = fnv1a(reinterpret_cast<const uint8_t*>(tx.name.data()), tx.name.size()) | 1;
        if (auto it = sim->txn_names.find(txn->id); it != sim->txn_names.end() && it->second != tx.name)
            throw SchemaError("transaction id collision between " + tx.name + " and " + it->second);
        sim->txn_ids[tx.name] = txn->id;
        sim->txn_names[txn->id] = tx.name;
        for (const auto& in : tx.inputs) txn->inputs.push_back(sim->object_ids.at(in));
        for (const auto& out : tx.outputs) txn->outputs.push_back(OutputSpec{sim->object_ids.at(out.name), out.shard});
        std::string why;
        if (!transaction_well_formed(*txn, script.num_shards, &why))
            throw SchemaError("transaction " + tx.name + " malformed: " + why);
        plans[tx.client].push_back(PlannedSubmission{txn, tx.submit_tick, tx.tx_seq_override});
    }

    for (uint32_t c = 0; c < script.num_clients; ++c) {
        ActorId self = sim->layout.client(c);
        switch (script.protocol) {
            case Protocol::Sbac: {
                auto client = std::make_unique<SbacClient>(self, sim->cfg, sim->shards, &sim->submissions, plans[c]);
                auto* raw = client.get();
                world.add_actor(std::move(client));
                raw->schedule(world);
                break;
            }
            case Protocol::Atomix: {
                auto client = std::make_unique<AtomixClient>(self, sim->cfg, sim->shards, &sim->submissions, plans[c]);
                auto* raw = client.get();
                world.add_actor(std::move(client));
                raw->schedule(world);
                break;
            }
            case Protocol::Byzcuit: {
                auto client = std::make_unique<ByzClient>(self, sim->cfg, sim->shards, &sim->submissions, plans[c]);
                auto* raw = client.get();
                world.add_actor(std::move(client));
                raw->schedule(world);
                break;
            }
        }
    }

    if (script.protocol == Protocol::Byzcuit) {
        world.add_actor(std::make_unique<ByzTm>(sim->layout.tm(), sim->cfg));
        uint32_t k = 0;
        for (const auto& t : script.takeovers) {
            auto it = sim->txn_ids.find(t.txn);
            if (it == sim->txn_ids.end()) throw SchemaError("takeover references unknown txn " + t.txn);
            auto actor = std::make_unique<ByzTakeover>(sim->layout.takeover(k), sim->cfg, &sim->submissions,
                                                       it->second, t.fire_at);
            auto* raw = actor.get();
            world.add_actor(std::move(actor));
            raw->schedule(world);
            ++k;
        }
    } else if (!script.takeovers.empty()) {
        throw SchemaError("takeover actors are a byzcuit feature");
    }

    for (const auto& c : script.crashes) world.crash_at(sim->layout.resolve(c.actor), c.at);

    RecordFilter filter;
    filter.record_all = script.record.all;
    for (const auto& k : script.record.kinds) filter.kinds.insert(*kind_from_string(k));
    for (const auto& o : script.record.origins) filter.origins.insert(sim->layout.resolve(o));
    for (const auto& t : script.record.targets) filter.targets.insert(sim->layout.resolve(t));
    world.policy.record = filter;
    for (const auto& d : script.delays) {
        DelayRule rule;
        if (d.origin) rule.origin = sim->layout.resolve(*d.origin);
        if (d.target) rule.target = sim->layout.resolve(*d.target);
        if (d.kind) rule.kind = *kind_from_string(*d.kind);
        rule.add = d.add;
        world.policy.delays.push_back(rule);
    }
    for (const auto& i : script.injections)
        world.policy.injections.push_back(Injection{i.recorded_index, sim->layout.resolve(i.target), i.at});

    if (loaded_log) world.load_recording(*loaded_log);
    else if (!script.recording_in.empty()) world.load_recording(load_recording_log(script.recording_in));

    sim->initial = take_snapshot(sim->shards);
    return sim;
}

}  // namespace shardsim
