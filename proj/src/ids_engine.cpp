#include <set>

#include "sdnsim/errors.hpp"
#include "sdnsim/ids.hpp"

namespace sdnsim {

std::string render_alert(const Alert& a) {
    std::string out = "[**] [" + std::to_string(a.sid) + ":" + std::to_string(a.rev) + "] " + a.msg +
                      " [**] {" + protocol_name(a.protocol) + "} " + a.src_ip.render() + " -> " +
                      a.dst_ip.render() + " @ t=" + format_seconds(a.at);
    return out;
}

IdsEngine::IdsEngine(std::vector<Rule> rules, VarMap vars)
    : rules_(std::move(rules)), vars_(std::move(vars)) {
    std::set<std::int64_t> sids;
    for (const auto& rule : rules_) {
        if (!sids.insert(rule.sid).second) {
            throw ValidationError("duplicate sid " + std::to_string(rule.sid) + " in ruleset");
        }
    }
}

std::vector<Alert> IdsEngine::process_packet(const Packet& pkt, SimTime now) {
    if (last_now_ && now < *last_now_) {
        throw ContractViolation("IDS packet time went backwards: " + format_seconds(now) +
                                " after " + format_seconds(*last_now_));
    }
    last_now_ = now;
    packets_processed_++;

    std::vector<Alert> fired;
    for (const auto& rule : rules_) {
        if (!rule_matches(rule, pkt)) continue;
        if (rule.action == RuleAction::Pass) break;  // earlier pass shields later rules
        if (rule.action == RuleAction::Log) {
            log_matches_++;
            continue;
        }

        const IpAddr key = rule.detection_filter &&
                                   rule.detection_filter->track == DetectionFilter::Track::BySrc
                               ? pkt.src_ip
                               : pkt.dst_ip;
        auto make_alert = [&] {
            return Alert{rule.sid, rule.rev, rule.msg, now, pkt.src_ip, pkt.dst_ip, key, pkt.protocol};
        };

        if (!rule.detection_filter) {
            fired.push_back(make_alert());
            continue;
        }

        const auto& df = *rule.detection_filter;
        const WindowKey wk{rule.sid, key};
        auto& window = windows_[wk];
        window.push_back(now);
        const std::int64_t cutoff = now.micros - static_cast<std::int64_t>(df.seconds) * 1'000'000;
        while (!window.empty() && window.front().micros < cutoff) window.pop_front();

        if (window.size() >= static_cast<std::size_t>(df.count) + 1) {
            auto lf = last_fired_.find(wk);
            const bool suppressed =
                lf != last_fired_.end() &&
                (now - lf->second).micros < static_cast<std::int64_t>(df.seconds) * 1'000'000;
            if (!suppressed) {
                last_fired_[wk] = now;
                fired.push_back(make_alert());
            }
        }
    }
    alert_log_.insert(alert_log_.end(), fired.begin(), fired.end());
    return fired;
}

}  // namespace sdnsim
