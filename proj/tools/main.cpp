#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sdnsim/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Discrete-event SDN flood-attack simulator with victim-side rule detection"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> out_path;
    auto* run = app.add_subcommand("run", "Run a scenario file and emit the report document");
    run->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    run->add_option("--seed", seed_override, "Override the scenario seed");
    run->add_option("--out", out_path, "Write the report here instead of stdout");

    std::string demo_name;
    auto* demo = app.add_subcommand("demo", "Run a built-in scenario and print its timeline");
    demo->add_option("name", demo_name, "icmp-flood, syn-flood, or benign")->required();

    std::string rules_path;
    std::vector<std::string> var_defs;
    auto* rules = app.add_subcommand("rules", "Ruleset utilities");
    auto* rules_check = rules->add_subcommand("check", "Parse a rules file and report diagnostics");
    rules_check->add_option("path", rules_path, "Rules file")->required();
    rules_check->add_option("--var", var_defs, "Rule variable, NAME=VALUE (repeatable)");
    rules->require_subcommand(1);

    std::string topo_scenario_path;
    auto* topo = app.add_subcommand("topo", "Topology utilities");
    auto* topo_show = topo->add_subcommand("show", "Print nodes, roles, and links of a scenario");
    topo_show->add_option("--scenario", topo_scenario_path, "Scenario JSON file")->required();
    topo->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() != 0) {
            std::cerr << "error: " << e.what() << "\n";
            return sdnsim::cli::kExitIo;
        }
        return app.exit(e);  // --help and friends
    }

    if (run->parsed()) {
        return sdnsim::cli::cmd_run(scenario_path, seed_override, out_path, std::cout, std::cerr);
    }
    if (demo->parsed()) {
        return sdnsim::cli::cmd_demo(demo_name, std::cout, std::cerr);
    }
    if (rules_check->parsed()) {
        return sdnsim::cli::cmd_rules_check(rules_path, var_defs, std::cout, std::cerr);
    }
    if (topo_show->parsed()) {
        return sdnsim::cli::cmd_topo_show(topo_scenario_path, std::cout, std::cerr);
    }
    std::cerr << "error: no subcommand\n";
    return sdnsim::cli::kExitIo;
}
