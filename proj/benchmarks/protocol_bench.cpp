#include <benchmark/benchmark.h>

#include "shardsim/sweep.hpp"

using namespace shardsim;

namespace {

ScenarioScript commit_script(Protocol protocol, uint32_t shards) {
    ScenarioScript s;
    s.protocol = protocol;
    s.num_shards = shards;
    ScenarioTx t;
    t.name = "T";
    for (uint32_t i = 0; i < shards; ++i) {
        s.objects.push_back({"a" + std::to_string(i), i, ObjectStateKind::Active, 0});
        t.inputs.push_back("a" + std::to_string(i));
        t.outputs.push_back({"b" + std::to_string(i), i});
    }
    s.transactions = {t};
    return s;
}

void BM_CommitRun(benchmark::State& state, Protocol protocol) {
    auto script = commit_script(protocol, static_cast<uint32_t>(state.range(0)));
    for (auto _ : state) {
        auto run = run_scenario(script);
        benchmark::DoNotOptimize(run.events);
    }
    state.SetItemsProcessed(state.iterations());
}

void BM_SweepWorldRun(benchmark::State& state, Protocol protocol) {
    auto script = sweep_script(protocol);
    RunOptions options;
    options.compute_counterfactual = false;
    for (auto _ : state) {
        auto run = run_scenario(script, nullptr, options);
        benchmark::DoNotOptimize(run.events);
    }
    state.SetItemsProcessed(state.iterations());
}

void BM_MessageCodec(benchmark::State& state) {
    auto script = commit_script(Protocol::Byzcuit, 3);
    auto run = run_scenario(script);
    for (auto _ : state) {
        for (const auto& rec : run.recording) {
            auto bytes = encode_message(rec.msg);
            auto back = decode_message(bytes);
            benchmark::DoNotOptimize(back.tx_seq);
        }
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(run.recording.size()));
}

void BM_TableAttack(benchmark::State& state) {
    for (auto _ : state) {
        auto outcome = run_table_attack(1, 6, Protocol::Sbac);
        benchmark::DoNotOptimize(outcome.matched);
    }
    state.SetItemsProcessed(state.iterations());
}

}  // namespace

BENCHMARK_CAPTURE(BM_CommitRun, sbac, Protocol::Sbac)->Arg(2)->Arg(5);
BENCHMARK_CAPTURE(BM_CommitRun, atomix, Protocol::Atomix)->Arg(2)->Arg(5);
BENCHMARK_CAPTURE(BM_CommitRun, byzcuit, Protocol::Byzcuit)->Arg(2)->Arg(5);
BENCHMARK_CAPTURE(BM_SweepWorldRun, sbac, Protocol::Sbac);
BENCHMARK_CAPTURE(BM_SweepWorldRun, byzcuit, Protocol::Byzcuit);
BENCHMARK(BM_MessageCodec);
BENCHMARK(BM_TableAttack);

BENCHMARK_MAIN();
