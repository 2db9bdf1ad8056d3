#pragma once

#include "shardsim/report.hpp"

namespace shardsim {

struct BenchConfig {
    Protocol protocol = Protocol::Byzcuit;
    uint32_t min_shards = 2;
    uint32_t max_shards = 10;
    uint32_t txs = 36;  // total transactions in each scaling row
};

struct BenchRow {
    uint32_t shards = 0;
    uint32_t commits = 0;
    uint64_t protocol_messages = 0;
    uint64_t events = 0;
    Tick quiescence = 0;
    double commits_per_tick = 0;
    double commits_per_kevent = 0;
};

struct BenchReport {
    Protocol protocol = Protocol::Sbac;
    // Exact message-complexity counts for one fault-free commit over
    // n = 2..5 concerned shards.
    std::vector<std::pair<uint32_t, uint64_t>> commit_messages;
    std::vector<BenchRow> scaling;
    std::vector<BenchRow> dummy_impact;  // byzcuit: dummies forced on every transaction
    std::vector<AssertionResult> assertions;

    bool pass() const { return all_pass(assertions); }
};

// Count the protocol messages of one fault-free commit with n concerned
// shards (inputs spread over n shards; no dummies needed).
uint64_t commit_message_count(Protocol protocol, uint32_t concerned);
// Phase-1 vote count of the same run (sbac: the n(n-1) shard-to-shard votes).
uint64_t phase1_vote_count(Protocol protocol, uint32_t concerned);

BenchReport run_bench(const BenchConfig& config);

std::string render_bench_report(const BenchReport& report);

}  // namespace shardsim
