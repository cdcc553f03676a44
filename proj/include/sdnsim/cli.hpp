#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace sdnsim::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitRuleDiagnostics = 3;

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed_override,
            const std::optional<std::string>& out_path, std::ostream& out, std::ostream& err);

int cmd_demo(const std::string& name, std::ostream& out, std::ostream& err);

// var_defs entries look like NAME=10.0.0.20 (value may also be a CIDR or
// "any").
int cmd_rules_check(const std::string& rules_path, const std::vector<std::string>& var_defs,
                    std::ostream& out, std::ostream& err);

int cmd_topo_show(const std::string& scenario_path, std::ostream& out, std::ostream& err);

}  // namespace sdnsim::cli
