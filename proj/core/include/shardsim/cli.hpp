#pragma once

#include <iostream>

#include "shardsim/attacks.hpp"
#include "shardsim/simbench.hpp"
#include "shardsim/sweep.hpp"

namespace shardsim {

// Exit codes: 0 pass, 1 assertion failure, 2 usage/schema error.
constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

int cmd_run(const std::string& scenario_path, const std::string& out_path, std::optional<uint64_t> seed,
            std::ostream& out, std::ostream& err);

int cmd_attack(int table, int row, const std::string& protocol, const std::string& out_path,
               std::ostream& out, std::ostream& err);

int cmd_sweep(const std::string& protocol, uint32_t max_shards, uint32_t max_injections,
              const std::string& out_path, std::ostream& out, std::ostream& err);

int cmd_bench(const std::string& protocol, uint32_t min_shards, uint32_t max_shards, uint32_t txs,
              const std::string& out_path, std::ostream& out, std::ostream& err);

}  // namespace shardsim
