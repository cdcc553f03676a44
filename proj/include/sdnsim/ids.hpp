#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sdnsim/ip_addr.hpp"
#include "sdnsim/packet.hpp"
#include "sdnsim/sim_time.hpp"

namespace sdnsim {

// Address part of a rule header: any, a single address, a CIDR block, or a
// named variable. Variables are resolved while parsing, so rules coming out
// of parse_rule never carry the Variable form.
struct AddressSpec {
    enum class Kind { Any, Single, Cidr, Variable };

    Kind kind = Kind::Any;
    IpAddr addr{};
    int prefix = 0;  // Cidr only, 0..32
    std::string var;

    static AddressSpec any() { return AddressSpec{}; }
    static AddressSpec single(IpAddr a) { return AddressSpec{Kind::Single, a, 0, {}}; }
    static AddressSpec cidr(IpAddr a, int prefix) { return AddressSpec{Kind::Cidr, a, prefix, {}}; }
    static AddressSpec variable(std::string name) { return AddressSpec{Kind::Variable, {}, 0, std::move(name)}; }

    bool matches(IpAddr a) const;
    bool operator==(const AddressSpec&) const = default;
};

struct PortSpec {
    enum class Kind { Any, Single, Range };

    Kind kind = Kind::Any;
    std::uint16_t lo = 0;
    std::uint16_t hi = 0;

    static PortSpec any() { return PortSpec{}; }
    static PortSpec single(std::uint16_t p) { return PortSpec{Kind::Single, p, p}; }
    static PortSpec range(std::uint16_t lo, std::uint16_t hi) { return PortSpec{Kind::Range, lo, hi}; }

    // A portless packet (ICMP) only satisfies the wildcard.
    bool matches(std::optional<std::uint16_t> port) const;
    bool operator==(const PortSpec&) const = default;
};

enum class RuleAction { Alert, Log, Pass };
enum class RuleProtocol { Icmp, Tcp, Udp, Ip };

// Rate filter: fire once matches exceed `count` within a trailing window of
// `seconds`, tracked per source or destination address.
struct DetectionFilter {
    enum class Track { BySrc, ByDst };

    Track track = Track::ByDst;
    int count = 1;
    int seconds = 1;

    bool operator==(const DetectionFilter&) const = default;
};

struct FlagsTest {
    TcpFlags set;
    bool superset = false;  // false: packet flags equal set; true: set subset of packet flags

    bool operator==(const FlagsTest&) const = default;
};

struct Rule {
    RuleAction action = RuleAction::Alert;
    RuleProtocol protocol = RuleProtocol::Ip;
    AddressSpec src;
    PortSpec src_port;
    AddressSpec dst;
    PortSpec dst_port;
    std::string msg;
    std::int64_t sid = 0;
    std::int64_t rev = 1;
    std::optional<FlagsTest> flags;
    std::optional<int> itype;
    std::optional<std::string> classtype;  // stored, no matching semantics
    std::optional<DetectionFilter> detection_filter;

    bool operator==(const Rule&) const = default;
};

struct RuleParseError : std::runtime_error {
    std::size_t offset;  // byte offset of the offending token within the line
    std::string token;

    RuleParseError(const std::string& message, std::size_t offset_, std::string token_)
        : std::runtime_error(message), offset(offset_), token(std::move(token_)) {}
};

// Raised when a rule spans more than one line.
struct SingleLineViolation : RuleParseError {
    using RuleParseError::RuleParseError;
};

using VarMap = std::map<std::string, AddressSpec>;

// Parses one rule of the form
//   action proto src sport -> dst dport ( key:value; key:value; ... )
// resolving $VARIABLES through `vars`. Throws RuleParseError (or
// SingleLineViolation) naming the byte offset and offending token.
Rule parse_rule(std::string_view line, const VarMap& vars);

struct RulesetDiagnostic {
    int line = 0;  // 1-based
    std::string message;
};

struct RulesetParse {
    std::vector<Rule> rules;
    std::vector<RulesetDiagnostic> diagnostics;
};

// Parses a whole rules file: blank lines and '#' comments skipped, each other
// line parsed independently. Failures (including duplicate sids) become
// diagnostics; every rule that parses is returned regardless.
RulesetParse parse_ruleset(std::string_view document, const VarMap& vars);

// Stateless header/options match; detection_filter state is not consulted.
bool rule_matches(const Rule& rule, const Packet& pkt);

// Canonical single-line rendering; parse_rule(serialize_rule(r)) == r for any
// valid rule.
std::string serialize_rule(const Rule& rule);

struct Alert {
    std::int64_t sid = 0;
    std::int64_t rev = 0;
    std::string msg;
    SimTime at;  // arrival time at the victim of the triggering packet
    IpAddr src_ip;
    IpAddr dst_ip;
    IpAddr track_key;
    Protocol protocol = Protocol::Icmp;
};

// "[**] [sid:rev] msg [**] {PROTO} src -> dst @ t=<seconds>.<micros>"
std::string render_alert(const Alert& a);

// Stateful rule evaluator for one observation point. Feed packets in arrival
// order; time must be non-decreasing across calls.
class IdsEngine {
  public:
    explicit IdsEngine(std::vector<Rule> rules, VarMap vars = {});

    // Runs the packet through the ruleset in order. `pass` short-circuits,
    // `log` records without alerting, `alert` fires immediately or through
    // its detection_filter window. After a filter fires, that (sid, key) is
    // suppressed for the filter's window length.
    std::vector<Alert> process_packet(const Packet& pkt, SimTime now);

    const std::vector<Alert>& alert_log() const { return alert_log_; }
    const std::vector<Rule>& rules() const { return rules_; }
    std::uint64_t packets_processed() const { return packets_processed_; }
    std::uint64_t log_matches() const { return log_matches_; }

  private:
    struct WindowKey {
        std::int64_t sid;
        IpAddr key;
        bool operator==(const WindowKey&) const = default;
    };
    struct WindowKeyHash {
        std::size_t operator()(const WindowKey& k) const {
            return static_cast<std::size_t>((static_cast<std::uint64_t>(k.sid) << 32) ^ k.key.value ^
                                            (static_cast<std::uint64_t>(k.key.value) << 13));
        }
    };

    std::vector<Rule> rules_;
    VarMap vars_;
    std::unordered_map<WindowKey, std::deque<SimTime>, WindowKeyHash> windows_;
    std::unordered_map<WindowKey, SimTime, WindowKeyHash> last_fired_;
    std::vector<Alert> alert_log_;
    std::optional<SimTime> last_now_;
    std::uint64_t packets_processed_ = 0;
    std::uint64_t log_matches_ = 0;
};

}  // namespace sdnsim
