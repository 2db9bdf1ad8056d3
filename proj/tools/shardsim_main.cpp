#include <iostream>

#include "CLI11.hpp"
#include "shardsim/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"deterministic cross-shard atomic commit simulator"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, protocol;
    std::optional<uint64_t> seed;

    auto* run = app.add_subcommand("run", "run a scenario file and write its report");
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--out", out_path, "report output path");
    uint64_t seed_value = 0;
    auto* seed_opt = run->add_option("--seed", seed_value, "seed recorded in the report");

    int table = 1, row = 1;
    auto* attack = app.add_subcommand("attack", "reproduce one replay-attack table row");
    attack->add_option("--table", table, "table 1..4")->required();
    attack->add_option("--row", row, "row within the table")->required();
    attack->add_option("--protocol", protocol, "sbac|atomix|byzcuit")->required();
    attack->add_option("--out", out_path, "report output path");

    uint32_t max_shards = 3, max_injections = 2;
    auto* sweep = app.add_subcommand("sweep", "exhaustive replay-schedule search");
    sweep->add_option("--protocol", protocol, "sbac|atomix|byzcuit")->required();
    sweep->add_option("--max-shards", max_shards, "shard bound (guarded at 3)");
    sweep->add_option("--max-injections", max_injections, "injections per schedule (guarded at 2)");
    sweep->add_option("--out", out_path, "summary output path");

    std::string shard_range = "2..10";
    uint32_t txs = 36;
    auto* bench = app.add_subcommand("bench", "message-complexity and scaling-shape checks");
    bench->add_option("--protocol", protocol, "sbac|atomix|byzcuit")->required();
    bench->add_option("--shards", shard_range, "shard range A..B (default 2..10)");
    bench->add_option("--txs", txs, "transactions per scaling row");
    bench->add_option("--out", out_path, "report output path");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        if (seed_opt->count() > 0) seed = seed_value;
        return shardsim::cmd_run(scenario_path, out_path, seed, std::cout, std::cerr);
    }
    if (attack->parsed()) return shardsim::cmd_attack(table, row, protocol, out_path, std::cout, std::cerr);
    if (sweep->parsed())
        return shardsim::cmd_sweep(protocol, max_shards, max_injections, out_path, std::cout, std::cerr);
    if (bench->parsed()) {
        uint32_t lo = 2, hi = 10;
        auto dots = shard_range.find("..");
        try {
            if (dots == std::string::npos) {
                lo = hi = static_cast<uint32_t>(std::stoul(shard_range));
            } else {
                lo = static_cast<uint32_t>(std::stoul(shard_range.substr(0, dots)));
                hi = static_cast<uint32_t>(std::stoul(shard_range.substr(dots + 2)));
            }
        } catch (const std::exception&) {
            std::cerr << "usage error: bad shard range '" << shard_range << "'\n";
            return shardsim::kExitUsage;
        }
        return shardsim::cmd_bench(protocol, lo, hi, txs, out_path, std::cout, std::cerr);
    }
    return shardsim::kExitUsage;
}
