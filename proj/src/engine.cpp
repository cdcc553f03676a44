#include "sdnsim/engine.hpp"

#include <algorithm>
#include <queue>
#include <variant>

#include "sdnsim/errors.hpp"

namespace sdnsim {

namespace {

constexpr std::uint64_t kCoreSaltTag = 0x5DDC5A17D15EA5EDULL;
constexpr std::uint64_t kRngTag = 0xB16B00B5CAFEF00DULL;

struct EvC2Deliver {
    NodeId zombie;
};
struct EvPacketEmit {
    NodeId zombie;
    Packet pkt;
};
struct EvPacketArriveSwitch {
    NodeId sw;
    int in_port;
    Packet pkt;
    bool from_packet_out;
};
struct EvPacketArriveHost {
    NodeId host;
    Packet pkt;
};
// The three control-plane message shapes: punt up, flow-mod down, packet-out down.
struct EvPacketInMsg {
    NodeId sw;
    int in_port;
    Packet pkt;
};
struct EvFlowModMsg {
    NodeId sw;
    FlowEntry entry;
};
struct EvPacketOutMsg {
    NodeId sw;
    int in_port;
    Packet pkt;
};
struct EvFlowExpiryScan {};
struct EvResourceSample {};
struct EvBackgroundEmit {};
struct EvInfect {
    NodeId host;
};
struct EvAttackCommand {};
struct EvAttackEnd {};
struct EvScenarioEnd {};

using EventKind =
    std::variant<EvC2Deliver, EvPacketEmit, EvPacketArriveSwitch, EvPacketArriveHost, EvPacketInMsg,
                 EvFlowModMsg, EvPacketOutMsg, EvFlowExpiryScan, EvResourceSample, EvBackgroundEmit,
                 EvInfect, EvAttackCommand, EvAttackEnd, EvScenarioEnd>;

struct Event {
    SimTime at;
    std::uint64_t seq;  // issue order; total order with `at`
    EventKind kind;
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        return std::tie(a.at.micros, a.seq) > std::tie(b.at.micros, b.seq);
    }
};

bool carries_packet(const EventKind& kind) {
    return std::holds_alternative<EvPacketArriveSwitch>(kind) ||
           std::holds_alternative<EvPacketArriveHost>(kind) ||
           std::holds_alternative<EvPacketInMsg>(kind) ||
           std::holds_alternative<EvPacketOutMsg>(kind);
}

class Runner {
  public:
    explicit Runner(const Scenario& s)
        : s_(s),
          topo_(s.topo),
          controller_(topo_, Duration::from_seconds(s.flow_idle_timeout_s)),
          botmaster_(topo_, Duration::from_seconds(s.c2_delay_s)),
          ids_(s.ids.rules, s.ids.vars),
          victim_(s.resources, splitmix64(s.seed ^ kCoreSaltTag)),
          rng_(splitmix64(s.seed ^ kRngTag)),
          background_(topo_, s.background, rng_),
          ctl_latency_(Duration::from_seconds(s.control_latency_s)) {
        victim_host_ = *topo_.victim();
        for (const auto& sw : topo_.switches()) {
            SwitchState st;
            st.id = sw;
            for (const auto& adj : topo_.neighbors(sw)) st.ports.insert(adj.local_port);
            switches_.emplace(sw, std::move(st));
        }

        report_.scenario = s.name;
        report_.seed = s.seed;

        const SimTime end = SimTime::from_seconds(s.duration_s);
        schedule(end, EvScenarioEnd{});  // seq 0: same-time stragglers never run

        lifecycle(SimTime::zero(), "INFRA_START", "");
        lifecycle(SimTime::zero(), "IDS_ACTIVE", victim_host_.name);

        if (s.attack) {
            for (const auto& [host, at] : infection_plan()) schedule(at, EvInfect{host});
            schedule(s.attack->start, EvAttackCommand{});
        }
        schedule(SimTime::from_seconds(s.flow_expiry_scan_period_s), EvFlowExpiryScan{});
        schedule(SimTime::from_seconds(s.resource_sample_period_s), EvResourceSample{});
        if (background_.enabled()) schedule(SimTime::zero() + background_.gap(), EvBackgroundEmit{});
    }

    SimulationReport run() {
        while (!queue_.empty()) {
            Event ev = queue_.top();
            queue_.pop();
            now_ = ev.at;
            if (std::holds_alternative<EvScenarioEnd>(ev.kind)) {
                lifecycle(now_, "SCENARIO_END", "");
                break;
            }
            std::visit([&](auto& e) { handle(e); }, ev.kind);
        }
        finalize();
        return std::move(report_);
    }

  private:
    void schedule(SimTime at, EventKind kind) {
        queue_.push(Event{at, next_seq_++, std::move(kind)});
    }

    void lifecycle(SimTime at, std::string event, std::string detail) {
        report_.lifecycle.push_back(LifecycleEvent{at, std::move(event), std::move(detail)});
    }

    std::vector<std::pair<NodeId, SimTime>> infection_plan() const {
        if (!s_.infections.empty()) return s_.infections;
        std::vector<NodeId> zombies;
        for (const auto& [host, role] : topo_.roles) {
            if (role == HostRole::Zombie) zombies.push_back(host);
        }
        // Spread infections over the first half to 90% of the pre-attack window.
        std::vector<std::pair<NodeId, SimTime>> plan;
        const double start = s_.attack->start.seconds();
        const double n = static_cast<double>(zombies.size());
        for (std::size_t i = 0; i < zombies.size(); ++i) {
            const double frac = n == 1 ? 0.5 : 0.5 + 0.4 * static_cast<double>(i) / (n - 1);
            plan.emplace_back(zombies[i], SimTime::from_seconds(start * frac));
        }
        return plan;
    }

    void inject_from_host(const NodeId& host, const Packet& pkt) {
        report_.packets.generated++;
        if (pkt.src_ip == pkt.dst_ip) {
            schedule(now_, EvPacketArriveHost{host, pkt});  // loopback, never on the fabric
            return;
        }
        const auto& adj = topo_.neighbors(host);
        if (adj.size() != 1) throw ContractViolation("host " + host.name + " is not single-homed");
        schedule(now_ + Duration::from_micros(adj.front().latency_us),
                 EvPacketArriveSwitch{adj.front().peer.node, adj.front().peer.port, pkt, false});
    }

    void forward_from_switch(const NodeId& sw, int out_port, const Packet& pkt) {
        auto peer = topo_.peer_of(sw, out_port);
        if (!peer) throw ContractViolation("no link on " + sw.name + ":" + std::to_string(out_port));
        const SimTime at = now_ + Duration::from_micros(peer->latency_us);
        if (peer->peer.node.is_host()) {
            schedule(at, EvPacketArriveHost{peer->peer.node, pkt});
        } else {
            schedule(at, EvPacketArriveSwitch{peer->peer.node, peer->peer.port, pkt, false});
        }
    }

    void run_through_switch(const NodeId& sw, int in_port, const Packet& pkt, bool from_packet_out) {
        auto& st = switches_.at(sw);
        const ForwardDecision decision = process_packet(st, pkt, in_port, now_);
        switch (decision.kind) {
            case ForwardDecision::Kind::Forward:
                forward_from_switch(sw, decision.port, pkt);
                break;
            case ForwardDecision::Kind::Drop:
                report_.packets.dropped++;
                break;
            case ForwardDecision::Kind::PacketIn:
                if (from_packet_out) {
                    // A reinjected packet missing again would ping-pong forever.
                    report_.packets.dropped++;
                } else {
                    schedule(now_ + ctl_latency_, EvPacketInMsg{sw, in_port, pkt});
                }
                break;
        }
    }

    void handle(EvPacketArriveSwitch& e) { run_through_switch(e.sw, e.in_port, e.pkt, e.from_packet_out); }

    void handle(EvPacketArriveHost& e) {
        report_.packets.delivered++;
        if (e.host == victim_host_) {
            ids_.process_packet(e.pkt, now_);
            victim_.on_packet_delivered(e.pkt, now_);
        }
    }

    void handle(EvPacketInMsg& e) {
        auto [mods, directive] = controller_.handle_packet_in(e.sw, e.pkt, e.in_port, now_);
        for (auto& mod : mods) {
            schedule(now_ + ctl_latency_, EvFlowModMsg{mod.target, std::move(mod.entry)});
        }
        if (directive.kind == PacketOutDirective::Kind::Reinject) {
            // Scheduled after the flow-mods at the same instant, so the new
            // entries are in place when the packet is re-run.
            schedule(now_ + ctl_latency_, EvPacketOutMsg{directive.at_switch, directive.in_port, e.pkt});
        } else {
            report_.packets.dropped++;
        }
    }

    void handle(EvFlowModMsg& e) {
        e.entry.installed_at = now_;
        e.entry.last_used = now_;
        install_flow(switches_.at(e.sw), std::move(e.entry));
    }

    void handle(EvPacketOutMsg& e) { run_through_switch(e.sw, e.in_port, e.pkt, true); }

    void handle(EvInfect& e) {
        botmaster_.infect(e.host, now_);
        lifecycle(now_, "INFECT", e.host.name);
    }

    void handle(EvAttackCommand&) {
        const auto deliveries = botmaster_.issue_attack(*s_.attack, now_);
        report_.attack_command_time = now_;
        lifecycle(now_, "ATTACK_COMMAND",
                  attack_kind_name(s_.attack->kind) + " -> " + s_.attack->target_ip.render());
        for (const auto& d : deliveries) schedule(d.at, EvC2Deliver{d.zombie});
        schedule(now_ + botmaster_.c2_delay() + Duration::from_seconds(s_.attack->duration_s),
                 EvAttackEnd{});
    }

    void handle(EvC2Deliver& e) {
        botmaster_.deliver_order(e.zombie, now_);
        lifecycle(now_, "C2_DELIVERED", e.zombie.name);
        schedule_next_emission(e.zombie);
    }

    void schedule_next_emission(const NodeId& zombie) {
        auto emission = zombie_next_emission(botmaster_.zombies().at(zombie), *s_.attack, seqs_);
        if (emission) schedule(emission->at, EvPacketEmit{zombie, std::move(emission->pkt)});
    }

    void handle(EvPacketEmit& e) {
        if (!first_attack_packet_seen_) {
            first_attack_packet_seen_ = true;
            lifecycle(now_, "FIRST_ATTACK_PACKET", e.zombie.name);
        }
        inject_from_host(e.zombie, e.pkt);
        schedule_next_emission(e.zombie);
    }

    void handle(EvAttackEnd&) { lifecycle(now_, "ATTACK_END", ""); }

    void handle(EvBackgroundEmit&) {
        if (auto pkt = background_.next(now_, seqs_)) {
            auto host = topo_.host_with_addr(pkt->src_ip);
            inject_from_host(*host, *pkt);
        }
        schedule(now_ + background_.gap(), EvBackgroundEmit{});
    }

    void handle(EvResourceSample&) {
        report_.resource_timeline.push_back(
            victim_.sample_resources(now_, s_.resource_sample_period_s));
        schedule(now_ + Duration::from_seconds(s_.resource_sample_period_s), EvResourceSample{});
    }

    void handle(EvFlowExpiryScan&) {
        for (auto& [id, st] : switches_) expire_flows(st, now_);
        schedule(now_ + Duration::from_seconds(s_.flow_expiry_scan_period_s), EvFlowExpiryScan{});
    }

    void handle(EvScenarioEnd&) {}  // handled in run()

    void finalize() {
        report_.alerts = ids_.alert_log();
        if (!report_.alerts.empty()) {
            report_.first_alert_time = report_.alerts.front().at;
            if (report_.attack_command_time) {
                report_.detection_latency_s =
                    (*report_.first_alert_time - *report_.attack_command_time).seconds();
            }
        }
        for (const auto& sw : topo_.switches()) {
            report_.switches.push_back(SwitchReport{sw, switches_.at(sw).counters});
        }
        for (const auto& [host, z] : botmaster_.zombies()) {
            report_.zombies.push_back(ZombieReport{host, z.emitted_count});
        }
        report_.controller = controller_.stats();
        while (!queue_.empty()) {
            if (carries_packet(queue_.top().kind)) report_.packets.in_flight_at_end++;
            queue_.pop();
        }
    }

    const Scenario& s_;
    const TopologyGraph& topo_;
    std::map<NodeId, SwitchState> switches_;
    Controller controller_;
    Botmaster botmaster_;
    IdsEngine ids_;
    VictimState victim_;
    DetRng rng_;
    BackgroundTraffic background_;
    SeqSource seqs_;
    Duration ctl_latency_;
    NodeId victim_host_;
    std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
    std::uint64_t next_seq_ = 0;
    SimTime now_;
    bool first_attack_packet_seen_ = false;
    SimulationReport report_;
};

}  // namespace

BackgroundTraffic::BackgroundTraffic(const TopologyGraph& topo, BackgroundPolicy policy, DetRng& rng)
    : policy_(policy), rng_(&rng) {
    for (const auto& [host, role] : topo.roles) {
        if (role != HostRole::Normal) continue;
        auto addr = topo.host_addrs.find(host);
        if (addr == topo.host_addrs.end()) continue;
        normals_.push_back(NormalHost{host, addr->second});
    }
}

bool BackgroundTraffic::enabled() const { return policy_.rate_pps > 0 && normals_.size() >= 2; }

Duration BackgroundTraffic::gap() const { return Duration::from_seconds(1.0 / policy_.rate_pps); }

std::optional<Packet> BackgroundTraffic::next(SimTime now, SeqSource& seqs) {
    if (!enabled()) return std::nullopt;
    const std::uint64_t i = rng_->below(normals_.size());
    std::uint64_t j = rng_->below(normals_.size() - 1);
    if (j >= i) ++j;
    const IpAddr src = normals_[i].ip;
    const IpAddr dst = normals_[j].ip;
    if (rng_->coin()) {
        return make_icmp_echo(seqs, src, dst, 64, now);
    }
    const std::uint16_t sport = next_sport_;
    next_sport_ = next_sport_ == 65535 ? 49152 : static_cast<std::uint16_t>(next_sport_ + 1);
    return make_tcp_syn(seqs, src, dst, sport, 80, 65535, 512, now);
}

std::vector<std::string> validate_scenario(const Scenario& s) {
    std::vector<std::string> out;
    auto add = [&](const std::string& v) { out.push_back(v); };

    if (!(s.duration_s > 0) || s.duration_s > 86400) {
        add("duration_s must be in (0, 86400]");
    }
    if (s.c2_delay_s < 0) add("c2 dissemination delay must be >= 0");
    if (s.background.rate_pps < 0 || s.background.rate_pps > 1e6) {
        add("background rate_pps must be in [0, 1e6]");
    }
    if (s.resources.base_cpu < 0 || s.resources.base_cpu > 100) add("resources.base_cpu must be in [0, 100]");
    if (s.resources.base_mem < 0 || s.resources.base_mem > 100) add("resources.base_mem must be in [0, 100]");
    if (s.resources.cpu_cost_icmp < 0) add("resources.cpu_cost_icmp must be >= 0");
    if (s.resources.cpu_cost_syn < 0) add("resources.cpu_cost_syn must be >= 0");
    if (s.resources.mem_per_half_open < 0) add("resources.mem_per_half_open must be >= 0");
    if (!(s.resources.half_open_timeout_s > 0)) add("resources.half_open_timeout_s must be > 0");
    if (!(s.resource_sample_period_s > 0)) add("resource sample period must be > 0");
    if (!(s.flow_expiry_scan_period_s > 0)) add("flow expiry scan period must be > 0");
    if (s.control_latency_s < 0) add("control latency must be >= 0");
    if (!(s.flow_idle_timeout_s > 0)) add("flow idle timeout must be > 0");

    for (const auto& v : validate_topology(s.topo)) add("topology: " + v.message());
    for (const auto& d : s.ids.diagnostics) {
        add("rules: line " + std::to_string(d.line) + ": " + d.message);
    }

    const auto victim = s.topo.victim();
    const IpAddr victim_addr =
        victim ? s.topo.host_addrs.count(*victim) ? s.topo.host_addrs.at(*victim) : IpAddr{} : IpAddr{};

    auto victim_var = s.ids.vars.find("VICTIM");
    if (victim_var != s.ids.vars.end() && victim) {
        if (victim_var->second.kind != AddressSpec::Kind::Single ||
            victim_var->second.addr != victim_addr) {
            add("ids: variable VICTIM does not resolve to the victim address " + victim_addr.render());
        }
    }

    if (s.attack) {
        for (const auto& v : validate_attack_spec(*s.attack)) add("attack: " + v.message());
        if (victim && s.attack->target_ip != victim_addr) {
            add("attack: target " + s.attack->target_ip.render() + " is not the victim address " +
                victim_addr.render());
        }
        if (!(s.attack->start > SimTime::zero())) {
            add("attack: start_s must be > 0 so infections can precede the command");
        }
        if (s.attack->start.seconds() >= s.duration_s) {
            add("attack: start_s is at or after scenario end");
        }
        bool any_zombie = false;
        for (const auto& [host, role] : s.topo.roles) any_zombie |= role == HostRole::Zombie;
        if (!any_zombie) add("attack: no host has role zombie");
        for (const auto& [host, at] : s.infections) {
            if (!s.topo.contains(host)) {
                add("infections: unknown host " + host.name);
            } else if (!(at < s.attack->start)) {
                add("infections: " + host.name + " infected at or after the attack command");
            }
        }
    } else if (!s.infections.empty()) {
        add("infections given without an attack");
    }

    return out;
}

SimulationReport run_scenario(const Scenario& s) {
    const auto violations = validate_scenario(s);
    if (!violations.empty()) {
        std::string what = "scenario does not validate:";
        for (const auto& v : violations) what += "\n  " + v;
        throw ValidationError(what);
    }
    Runner runner(s);
    return runner.run();
}

}  // namespace sdnsim
