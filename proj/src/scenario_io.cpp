#include "sdnsim/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sdnsim/errors.hpp"

namespace sdnsim {

namespace {

const char* const kDefaultRuleset =
    "# Flood-detection defaults. Thresholds are calibrated so the stock flood\n"
    "# scenarios trip them while background traffic stays far below.\n"
    "alert icmp any any -> $VICTIM any (msg:\"Possible ICMP flood\"; itype:8; "
    "detection_filter:track by_dst, count 11000, seconds 3; sid:1000001; rev:1;)\n"
    "alert tcp any any -> $VICTIM any (msg:\"Possible SYN flood\"; flags:S; "
    "detection_filter:track by_dst, count 24000, seconds 3; sid:1000002; rev:1;)\n";

void require_keys(const nlohmann::json& obj, std::initializer_list<const char*> allowed,
                  const std::string& where) {
    if (!obj.is_object()) throw ValidationError(where + " must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) {
            if (it.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) throw ValidationError("unknown key \"" + it.key() + "\" in " + where);
    }
}

double finite_number(const nlohmann::json& v, const std::string& where) {
    if (!v.is_number()) throw ValidationError(where + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ValidationError(where + " must be finite");
    return d;
}

}  // namespace

AddressSpec parse_address_value(const std::string& name, const std::string& value) {
    if (value == "any") return AddressSpec::any();
    const auto slash = value.find('/');
    if (slash == std::string::npos) {
        auto addr = IpAddr::parse(value);
        if (!addr) throw ValidationError("variable " + name + " has malformed address \"" + value + "\"");
        return AddressSpec::single(*addr);
    }
    auto addr = IpAddr::parse(value.substr(0, slash));
    int prefix = -1;
    try {
        prefix = std::stoi(value.substr(slash + 1));
    } catch (...) {
    }
    if (!addr || prefix < 0 || prefix > 32) {
        throw ValidationError("variable " + name + " has malformed CIDR \"" + value + "\"");
    }
    return AddressSpec::cidr(*addr, prefix);
}

std::string_view default_ruleset_text() { return kDefaultRuleset; }

Scenario scenario_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
    require_keys(doc,
                 {"name", "seed", "duration_s", "topology", "roles", "attack", "c2", "ids",
                  "resources", "background"},
                 "scenario");
    for (const char* k : {"name", "duration_s", "topology", "roles", "ids"}) {
        if (!doc.contains(k)) throw ValidationError(std::string("scenario is missing \"") + k + "\"");
    }

    Scenario s;
    s.name = doc.at("name").get<std::string>();
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_integer() && !doc.at("seed").is_number_unsigned()) {
            throw ValidationError("seed must be an integer");
        }
        s.seed = doc.at("seed").get<std::uint64_t>();
    }
    s.duration_s = finite_number(doc.at("duration_s"), "duration_s");
    s.topo = load_topology(doc.at("topology"));

    const auto& roles = doc.at("roles");
    require_keys(roles, {"zombies", "victim"}, "roles");
    if (!roles.contains("victim")) throw ValidationError("roles is missing \"victim\"");
    for (auto& [host, role] : s.topo.roles) role = HostRole::Normal;
    for (const auto& z : roles.value("zombies", nlohmann::json::array())) {
        s.topo.roles[NodeId::host(z.get<std::string>())] = HostRole::Zombie;
    }
    s.topo.roles[NodeId::host(roles.at("victim").get<std::string>())] = HostRole::Victim;

    if (doc.contains("attack") && !doc.at("attack").is_null()) {
        const auto& a = doc.at("attack");
        require_keys(a,
                     {"kind", "start_s", "duration_s", "rate_pps", "payload_len", "tcp_window",
                      "dport", "ramp_s"},
                     "attack");
        for (const char* k : {"kind", "start_s", "duration_s", "rate_pps", "payload_len"}) {
            if (!a.contains(k)) throw ValidationError(std::string("attack is missing \"") + k + "\"");
        }
        AttackSpec spec;
        const std::string kind = a.at("kind").get<std::string>();
        if (kind == "icmp_flood") spec.kind = AttackKind::IcmpFlood;
        else if (kind == "syn_flood") spec.kind = AttackKind::SynFlood;
        else throw ValidationError("attack.kind must be icmp_flood or syn_flood, got \"" + kind + "\"");
        spec.start = SimTime::from_seconds(finite_number(a.at("start_s"), "attack.start_s"));
        spec.duration_s = finite_number(a.at("duration_s"), "attack.duration_s");
        spec.rate_pps = finite_number(a.at("rate_pps"), "attack.rate_pps");
        const double payload = finite_number(a.at("payload_len"), "attack.payload_len");
        if (payload < 0 || payload > 4e9 || payload != std::floor(payload)) {
            throw ValidationError("attack.payload_len must be a non-negative integer");
        }
        spec.payload_len = static_cast<std::uint32_t>(payload);
        spec.ramp_s = a.contains("ramp_s") ? finite_number(a.at("ramp_s"), "attack.ramp_s") : 0.0;
        if (a.contains("tcp_window")) {
            const double w = finite_number(a.at("tcp_window"), "attack.tcp_window");
            if (w < 0 || w > 65535) throw ValidationError("attack.tcp_window must be in 0..65535");
            spec.tcp_window = static_cast<std::uint16_t>(w);
        }
        if (a.contains("dport")) {
            const double p = finite_number(a.at("dport"), "attack.dport");
            if (p < 0 || p > 65535) throw ValidationError("attack.dport must be in 0..65535");
            spec.dport = static_cast<std::uint16_t>(p);
        }
        spec.target_ip = [&] {
            // Target is always the victim; resolved from roles.
            auto victim = s.topo.victim();
            if (victim && s.topo.host_addrs.count(*victim)) return s.topo.host_addrs.at(*victim);
            return IpAddr{};
        }();
        s.attack = spec;
    }

    if (doc.contains("c2")) {
        require_keys(doc.at("c2"), {"dissemination_delay_s"}, "c2");
        if (doc.at("c2").contains("dissemination_delay_s")) {
            s.c2_delay_s = finite_number(doc.at("c2").at("dissemination_delay_s"),
                                         "c2.dissemination_delay_s");
        }
    }

    const auto& ids = doc.at("ids");
    require_keys(ids, {"rules_file", "vars"}, "ids");
    if (!ids.contains("rules_file")) throw ValidationError("ids is missing \"rules_file\"");
    if (ids.contains("vars")) {
        for (auto it = ids.at("vars").begin(); it != ids.at("vars").end(); ++it) {
            s.ids.vars[it.key()] = parse_address_value(it.key(), it.value().get<std::string>());
        }
    }
    const std::filesystem::path rules_path =
        base_dir / std::filesystem::path(ids.at("rules_file").get<std::string>());
    std::ifstream rules_in(rules_path);
    if (!rules_in) throw IoError("cannot read rules file " + rules_path.string());
    std::stringstream rules_text;
    rules_text << rules_in.rdbuf();
    auto parsed = parse_ruleset(rules_text.str(), s.ids.vars);
    s.ids.rules = std::move(parsed.rules);
    s.ids.diagnostics = std::move(parsed.diagnostics);

    if (doc.contains("resources")) {
        const auto& r = doc.at("resources");
        require_keys(r,
                     {"base_cpu", "base_mem", "cpu_cost_icmp", "cpu_cost_syn", "mem_per_half_open",
                      "half_open_timeout_s"},
                     "resources");
        auto opt = [&](const char* key, double& slot) {
            if (r.contains(key)) slot = finite_number(r.at(key), std::string("resources.") + key);
        };
        opt("base_cpu", s.resources.base_cpu);
        opt("base_mem", s.resources.base_mem);
        opt("cpu_cost_icmp", s.resources.cpu_cost_icmp);
        opt("cpu_cost_syn", s.resources.cpu_cost_syn);
        opt("mem_per_half_open", s.resources.mem_per_half_open);
        opt("half_open_timeout_s", s.resources.half_open_timeout_s);
    }

    if (doc.contains("background")) {
        require_keys(doc.at("background"), {"rate_pps"}, "background");
        if (doc.at("background").contains("rate_pps")) {
            s.background.rate_pps = finite_number(doc.at("background").at("rate_pps"),
                                                  "background.rate_pps");
        }
    }

    return s;
}

ScenarioLoad load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read scenario file " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError("malformed JSON in " + path.string() + ": " + e.what());
    }
    ScenarioLoad load{scenario_from_json(doc, path.parent_path()), {}};
    load.violations = validate_scenario(load.scenario);
    return load;
}

namespace {

Scenario demo_base(std::string name, double duration_s) {
    Scenario s;
    s.name = std::move(name);
    s.seed = 42;
    s.duration_s = duration_s;
    s.topo = build_reference_topology();
    auto parsed = parse_ruleset(kDefaultRuleset,
                                {{"VICTIM", AddressSpec::single(IpAddr::parse("10.0.0.20").value())}});
    s.ids.rules = std::move(parsed.rules);
    s.ids.vars = {{"VICTIM", AddressSpec::single(IpAddr::parse("10.0.0.20").value())}};
    s.ids.diagnostics = std::move(parsed.diagnostics);
    return s;
}

}  // namespace

std::vector<std::string> demo_names() { return {"icmp-flood", "syn-flood", "benign"}; }

Scenario make_demo_scenario(std::string_view name) {
    const IpAddr victim = IpAddr::parse("10.0.0.20").value();
    if (name == "icmp-flood") {
        Scenario s = demo_base("icmp-flood", 30.0);
        AttackSpec a;
        a.kind = AttackKind::IcmpFlood;
        a.target_ip = victim;
        a.rate_pps = 2000;
        a.payload_len = 1500;
        a.start = SimTime::from_seconds(5.0);
        a.duration_s = 20.0;
        a.ramp_s = 1.8;
        s.attack = a;
        return s;
    }
    if (name == "syn-flood") {
        Scenario s = demo_base("syn-flood", 30.0);
        AttackSpec a;
        a.kind = AttackKind::SynFlood;
        a.target_ip = victim;
        a.rate_pps = 8000;
        a.payload_len = 100000;
        a.tcp_window = 64;
        a.dport = 80;
        a.start = SimTime::from_seconds(5.0);
        a.duration_s = 20.0;
        a.ramp_s = 0.8;
        s.attack = a;
        return s;
    }
    if (name == "benign") {
        return demo_base("benign", 60.0);
    }
    throw ValidationError("unknown demo \"" + std::string(name) +
                          "\" (expected icmp-flood, syn-flood, or benign)");
}

namespace {

double as_seconds(SimTime t) { return t.seconds(); }

}  // namespace

nlohmann::ordered_json report_to_json(const SimulationReport& report) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["scenario"] = report.scenario;
    j["seed"] = report.seed;
    j["attack_command_time_s"] =
        report.attack_command_time ? nlohmann::ordered_json(as_seconds(*report.attack_command_time))
                                   : nlohmann::ordered_json(nullptr);
    j["first_alert_time_s"] = report.first_alert_time
                                  ? nlohmann::ordered_json(as_seconds(*report.first_alert_time))
                                  : nlohmann::ordered_json(nullptr);
    j["detection_latency_s"] = report.detection_latency_s
                                   ? nlohmann::ordered_json(*report.detection_latency_s)
                                   : nlohmann::ordered_json(nullptr);

    auto alerts = nlohmann::ordered_json::array();
    for (const auto& a : report.alerts) {
        nlohmann::ordered_json ja;
        ja["t_s"] = as_seconds(a.at);
        ja["sid"] = a.sid;
        ja["rev"] = a.rev;
        ja["msg"] = a.msg;
        ja["proto"] = protocol_name(a.protocol);
        ja["src_ip"] = a.src_ip.render();
        ja["dst_ip"] = a.dst_ip.render();
        ja["track_key"] = a.track_key.render();
        alerts.push_back(std::move(ja));
    }
    j["alerts"] = std::move(alerts);

    auto lifecycle = nlohmann::ordered_json::array();
    for (const auto& e : report.lifecycle) {
        nlohmann::ordered_json je;
        je["t_s"] = as_seconds(e.at);
        je["event"] = e.event;
        if (!e.detail.empty()) je["detail"] = e.detail;
        lifecycle.push_back(std::move(je));
    }
    j["lifecycle"] = std::move(lifecycle);

    auto timeline = nlohmann::ordered_json::array();
    for (const auto& s : report.resource_timeline) {
        nlohmann::ordered_json js;
        js["t_s"] = as_seconds(s.at);
        js["core0"] = s.core_util[0];
        js["core1"] = s.core_util[1];
        js["core2"] = s.core_util[2];
        js["core3"] = s.core_util[3];
        js["mem_pct"] = s.mem;
        js["half_open"] = s.half_open_count;
        timeline.push_back(std::move(js));
    }
    j["resource_timeline"] = std::move(timeline);

    j["controller"] = {{"packet_in_count", report.controller.packet_in_count},
                       {"flow_mods_issued", report.controller.flow_mods_issued}};

    auto switches = nlohmann::ordered_json::array();
    for (const auto& sw : report.switches) {
        nlohmann::ordered_json js;
        js["id"] = sw.id.name;
        js["packets_matched"] = sw.counters.packets_matched;
        js["packets_punted"] = sw.counters.packets_punted;
        js["flows_installed"] = sw.counters.flows_installed;
        js["flows_expired"] = sw.counters.flows_expired;
        switches.push_back(std::move(js));
    }
    j["switches"] = std::move(switches);

    auto zombies = nlohmann::ordered_json::array();
    for (const auto& z : report.zombies) {
        nlohmann::ordered_json jz;
        jz["host"] = z.host.name;
        jz["emitted"] = z.emitted;
        zombies.push_back(std::move(jz));
    }
    j["zombies"] = std::move(zombies);

    j["packets"] = {{"generated", report.packets.generated},
                    {"delivered", report.packets.delivered},
                    {"dropped", report.packets.dropped},
                    {"in_flight_at_end", report.packets.in_flight_at_end}};
    return j;
}

std::string report_to_string(const SimulationReport& report) {
    return report_to_json(report).dump(2) + "\n";
}

}  // namespace sdnsim
