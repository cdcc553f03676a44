#include "sdnsim/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "sdnsim/engine.hpp"
#include "sdnsim/errors.hpp"
#include "sdnsim/scenario_io.hpp"

namespace sdnsim::cli {

namespace {

std::string fmt(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

std::string summary_line(const SimulationReport& report) {
    double peak_cpu = 0, peak_mem = 0;
    for (const auto& s : report.resource_timeline) {
        peak_cpu = std::max(peak_cpu, *std::max_element(s.core_util.begin(), s.core_util.end()));
        peak_mem = std::max(peak_mem, s.mem);
    }
    std::string latency = report.detection_latency_s ? fmt(*report.detection_latency_s, 3) : "-";
    return std::string("detected=") + (report.first_alert_time ? "true" : "false") +
           " latency_s=" + latency + " peak_cpu=" + fmt(peak_cpu, 1) + " peak_mem=" + fmt(peak_mem, 1) +
           " alerts=" + std::to_string(report.alerts.size());
}

std::string lifecycle_line(const LifecycleEvent& e) {
    std::string line = "t=" + format_seconds(e.at) + " " + e.event;
    if (!e.detail.empty()) line += " " + e.detail;
    return line;
}

}  // namespace

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed_override,
            const std::optional<std::string>& out_path, std::ostream& out, std::ostream& err) {
    try {
        ScenarioLoad load = load_scenario_file(scenario_path);
        if (seed_override) load.scenario.seed = *seed_override;
        if (!load.violations.empty()) {
            for (const auto& v : load.violations) err << "error: " << v << "\n";
            return kExitValidation;
        }
        const SimulationReport report = run_scenario(load.scenario);
        const std::string doc = report_to_string(report);
        if (out_path) {
            std::ofstream f(*out_path, std::ios::binary);
            if (!f) {
                err << "error: cannot write " << *out_path << "\n";
                return kExitIo;
            }
            f << doc;
            out << summary_line(report) << "\n";
        } else {
            out << doc;
            err << summary_line(report) << "\n";
        }
        return kExitOk;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

int cmd_demo(const std::string& name, std::ostream& out, std::ostream& err) {
    Scenario scenario;
    try {
        scenario = make_demo_scenario(name);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    }
    const SimulationReport report = run_scenario(scenario);

    // Timeline: lifecycle markers and alert lines merged by time.
    std::size_t li = 0, ai = 0;
    while (li < report.lifecycle.size() || ai < report.alerts.size()) {
        const bool take_lifecycle =
            ai >= report.alerts.size() ||
            (li < report.lifecycle.size() && report.lifecycle[li].at <= report.alerts[ai].at);
        if (take_lifecycle) {
            out << lifecycle_line(report.lifecycle[li++]) << "\n";
        } else {
            out << render_alert(report.alerts[ai++]) << "\n";
        }
    }
    out << summary_line(report) << "\n";
    return kExitOk;
}

int cmd_rules_check(const std::string& rules_path, const std::vector<std::string>& var_defs,
                    std::ostream& out, std::ostream& err) {
    VarMap vars;
    try {
        for (const auto& def : var_defs) {
            const auto eq = def.find('=');
            if (eq == std::string::npos || eq == 0) {
                throw ValidationError("--var expects NAME=VALUE, got \"" + def + "\"");
            }
            vars[def.substr(0, eq)] = parse_address_value(def.substr(0, eq), def.substr(eq + 1));
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    std::ifstream in(rules_path);
    if (!in) {
        err << "error: cannot read rules file " << rules_path << "\n";
        return kExitIo;
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const RulesetParse parsed = parse_ruleset(text, vars);
    for (const auto& d : parsed.diagnostics) {
        err << "error: " << rules_path << ":" << d.line << ": " << d.message << "\n";
    }
    if (!parsed.diagnostics.empty()) return kExitRuleDiagnostics;
    if (parsed.rules.empty()) {
        out << "warning: no rules in " << rules_path << "\n";
    } else {
        out << "ok: " << parsed.rules.size() << " rules, no diagnostics\n";
    }
    return kExitOk;
}

int cmd_topo_show(const std::string& scenario_path, std::ostream& out, std::ostream& err) {
    try {
        const ScenarioLoad load = load_scenario_file(scenario_path);
        if (!load.violations.empty()) {
            for (const auto& v : load.violations) err << "error: " << v << "\n";
            return kExitValidation;
        }
        const TopologyGraph& topo = load.scenario.topo;
        for (const auto& node : topo.nodes) {
            if (node.is_switch()) {
                out << node.name << " switch\n";
            } else {
                out << node.name << " host " << topo.host_addrs.at(node).render() << " "
                    << host_role_name(topo.roles.at(node)) << "\n";
            }
        }
        for (const auto& link : topo.links) {
            out << link.a.node.name << ":" << link.a.port << " <-> " << link.b.node.name << ":"
                << link.b.port << " " << link.latency_us << "\n";
        }
        return kExitOk;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

}  // namespace sdnsim::cli
