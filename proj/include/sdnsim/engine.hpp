#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdnsim/botnet.hpp"
#include "sdnsim/controller.hpp"
#include "sdnsim/dataplane.hpp"
#include "sdnsim/hostmodel.hpp"
#include "sdnsim/ids.hpp"
#include "sdnsim/rng.hpp"
#include "sdnsim/topology.hpp"

namespace sdnsim {

struct BackgroundPolicy {
    double rate_pps = 10.0;  // aggregate, spread over Normal-role host pairs
};

struct IdsConfig {
    std::vector<Rule> rules;
    VarMap vars;
    std::vector<RulesetDiagnostic> diagnostics;  // from loading; must be empty to run
};

// Everything a run needs. Fields not present in the scenario document
// (control-channel latency, flow idle timeout, sampling cadences) keep their
// defaults here and are settable programmatically.
struct Scenario {
    std::string name;
    std::uint64_t seed = 42;
    double duration_s = 0;
    TopologyGraph topo;
    std::optional<AttackSpec> attack;
    double c2_delay_s = 2.0;
    IdsConfig ids;
    CostParams resources;
    BackgroundPolicy background;

    double control_latency_s = 0.0002;  // switch <-> controller, each way
    double flow_idle_timeout_s = 60.0;
    double flow_expiry_scan_period_s = 1.0;
    double resource_sample_period_s = 0.1;

    // When empty, infections are spread over [0.5, 0.9] * attack start.
    std::vector<std::pair<NodeId, SimTime>> infections;
};

struct LifecycleEvent {
    SimTime at;
    std::string event;
    std::string detail;
};

struct SwitchReport {
    NodeId id;
    SwitchCounters counters;
};

struct ZombieReport {
    NodeId host;
    std::uint64_t emitted = 0;
};

struct PacketTotals {
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t in_flight_at_end = 0;
};

struct SimulationReport {
    std::string scenario;
    std::uint64_t seed = 0;
    std::optional<SimTime> attack_command_time;
    std::optional<SimTime> first_alert_time;
    std::optional<double> detection_latency_s;  // first alert - attack command
    std::vector<Alert> alerts;
    std::vector<LifecycleEvent> lifecycle;
    std::vector<ResourceSample> resource_timeline;
    ControllerStats controller;
    std::vector<SwitchReport> switches;
    std::vector<ZombieReport> zombies;
    PacketTotals packets;
};

// Aggregated pre-run checks: topology invariants, ruleset diagnostics, role
// consistency (a VICTIM variable must resolve to the victim's address), the
// attack targeting the victim, and numeric ranges. Empty means runnable.
std::vector<std::string> validate_scenario(const Scenario& s);

// Deterministic single-loop discrete-event run. Throws ValidationError when
// validate_scenario reports problems.
SimulationReport run_scenario(const Scenario& s);

// Legitimate-traffic source: ICMP echoes and small TCP exchanges between
// Normal-role host pairs at a fixed aggregate rate, pair choice drawn from
// the scenario RNG.
class BackgroundTraffic {
  public:
    BackgroundTraffic(const TopologyGraph& topo, BackgroundPolicy policy, DetRng& rng);

    bool enabled() const;
    Duration gap() const;  // 1 / rate
    std::optional<Packet> next(SimTime now, SeqSource& seqs);

  private:
    struct NormalHost {
        NodeId host;
        IpAddr ip;
    };
    std::vector<NormalHost> normals_;
    BackgroundPolicy policy_;
    DetRng* rng_;
    std::uint16_t next_sport_ = 49152;
};

}  // namespace sdnsim
