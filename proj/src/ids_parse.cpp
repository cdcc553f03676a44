#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <map>
#include <sstream>

#include "sdnsim/errors.hpp"
#include "sdnsim/ids.hpp"

namespace sdnsim {

bool AddressSpec::matches(IpAddr a) const {
    switch (kind) {
        case Kind::Any: return true;
        case Kind::Single: return a == addr;
        case Kind::Cidr: {
            const std::uint32_t mask = prefix == 0 ? 0u : ~std::uint32_t{0} << (32 - prefix);
            return (a.value & mask) == (addr.value & mask);
        }
        case Kind::Variable: return false;  // unresolved variables never match
    }
    return false;
}

bool PortSpec::matches(std::optional<std::uint16_t> port) const {
    if (kind == Kind::Any) return true;
    if (!port) return false;
    return *port >= lo && *port <= hi;
}

namespace {

[[noreturn]] void fail(const std::string& message, std::size_t offset, std::string token) {
    throw RuleParseError(message + " at offset " + std::to_string(offset), offset, std::move(token));
}

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;

    bool done() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }

    void skip_ws() {
        while (!done() && (peek() == ' ' || peek() == '\t')) ++pos;
    }

    // Whitespace-delimited token; '(' also terminates so "any (msg..." splits.
    struct Token {
        std::string_view text;
        std::size_t offset;
    };
    Token next_token() {
        skip_ws();
        const std::size_t start = pos;
        while (!done() && peek() != ' ' && peek() != '\t' && peek() != '(') ++pos;
        return Token{text.substr(start, pos - start), start};
    }
};

std::optional<std::int64_t> parse_int(std::string_view s) {
    std::int64_t v = 0;
    auto [next, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || next != s.data() + s.size()) return std::nullopt;
    return v;
}

RuleAction parse_action(Cursor::Token tok) {
    if (tok.text == "alert") return RuleAction::Alert;
    if (tok.text == "log") return RuleAction::Log;
    if (tok.text == "pass") return RuleAction::Pass;
    fail("unknown action \"" + std::string(tok.text) + "\"", tok.offset, std::string(tok.text));
}

RuleProtocol parse_protocol(Cursor::Token tok) {
    if (tok.text == "icmp") return RuleProtocol::Icmp;
    if (tok.text == "tcp") return RuleProtocol::Tcp;
    if (tok.text == "udp") return RuleProtocol::Udp;
    if (tok.text == "ip") return RuleProtocol::Ip;
    fail("unknown protocol \"" + std::string(tok.text) + "\"", tok.offset, std::string(tok.text));
}

AddressSpec parse_address(Cursor::Token tok, const VarMap& vars) {
    const std::string token(tok.text);
    if (tok.text.empty()) fail("missing address", tok.offset, token);
    if (tok.text == "any") return AddressSpec::any();
    if (tok.text.front() == '$') {
        const std::string name(tok.text.substr(1));
        auto it = vars.find(name);
        if (it == vars.end()) fail("unresolved variable $" + name, tok.offset, token);
        return it->second;
    }
    if (tok.text.find(',') != std::string_view::npos || tok.text.front() == '[') {
        fail("address lists are unsupported", tok.offset, token);
    }
    const auto slash = tok.text.find('/');
    if (slash == std::string_view::npos) {
        auto addr = IpAddr::parse(tok.text);
        if (!addr) fail("malformed address \"" + token + "\"", tok.offset, token);
        return AddressSpec::single(*addr);
    }
    auto addr = IpAddr::parse(tok.text.substr(0, slash));
    auto prefix = parse_int(tok.text.substr(slash + 1));
    if (!addr || !prefix || *prefix < 0 || *prefix > 32) {
        fail("malformed CIDR \"" + token + "\"", tok.offset, token);
    }
    return AddressSpec::cidr(*addr, static_cast<int>(*prefix));
}

PortSpec parse_port(Cursor::Token tok) {
    const std::string token(tok.text);
    if (tok.text.empty()) fail("missing port", tok.offset, token);
    if (tok.text == "any") return PortSpec::any();
    if (tok.text.find(',') != std::string_view::npos || tok.text.front() == '[') {
        fail("port lists are unsupported", tok.offset, token);
    }
    const auto colon = tok.text.find(':');
    if (colon == std::string_view::npos) {
        auto p = parse_int(tok.text);
        if (!p || *p < 0 || *p > 65535) fail("malformed port \"" + token + "\"", tok.offset, token);
        return PortSpec::single(static_cast<std::uint16_t>(*p));
    }
    auto lo = parse_int(tok.text.substr(0, colon));
    auto hi = parse_int(tok.text.substr(colon + 1));
    if (!lo || !hi || *lo < 0 || *hi > 65535 || *lo > *hi) {
        fail("malformed port range \"" + token + "\"", tok.offset, token);
    }
    return PortSpec::range(static_cast<std::uint16_t>(*lo), static_cast<std::uint16_t>(*hi));
}

struct RawOption {
    std::string key;
    std::optional<std::string> value;
    std::size_t offset;
};

std::string parse_quoted(Cursor& cur, std::size_t key_offset) {
    if (cur.done() || cur.peek() != '"') {
        fail("msg value must be quoted", key_offset, "msg");
    }
    ++cur.pos;
    std::string out;
    while (!cur.done() && cur.peek() != '"') {
        char c = cur.peek();
        if (c == '\\') {
            ++cur.pos;
            if (cur.done()) fail("unterminated escape in msg", cur.pos, "\\");
            const char esc = cur.peek();
            if (esc != '"' && esc != '\\') {
                fail(std::string("unsupported escape \\") + esc + " in msg", cur.pos, std::string(1, esc));
            }
            c = esc;
        }
        out.push_back(c);
        ++cur.pos;
    }
    if (cur.done()) fail("unterminated msg string", cur.pos, "\"");
    ++cur.pos;  // closing quote
    return out;
}

std::vector<RawOption> parse_option_block(Cursor& cur) {
    std::vector<RawOption> options;
    while (true) {
        cur.skip_ws();
        if (cur.done()) fail("missing ')'", cur.pos, "");
        if (cur.peek() == ')') {
            ++cur.pos;
            break;
        }
        const std::size_t key_start = cur.pos;
        while (!cur.done() && (std::isalnum(static_cast<unsigned char>(cur.peek())) || cur.peek() == '_')) {
            ++cur.pos;
        }
        std::string key(cur.text.substr(key_start, cur.pos - key_start));
        if (key.empty()) {
            fail(std::string("expected option key, got '") + cur.peek() + "'", cur.pos,
                 std::string(1, cur.peek()));
        }
        cur.skip_ws();
        RawOption opt{std::move(key), std::nullopt, key_start};
        if (!cur.done() && cur.peek() == ':') {
            ++cur.pos;
            cur.skip_ws();
            if (opt.key == "msg") {
                opt.value = parse_quoted(cur, key_start);
            } else {
                const std::size_t vstart = cur.pos;
                while (!cur.done() && cur.peek() != ';' && cur.peek() != ')') ++cur.pos;
                std::string value(cur.text.substr(vstart, cur.pos - vstart));
                while (!value.empty() && (value.back() == ' ' || value.back() == '\t')) value.pop_back();
                opt.value = std::move(value);
            }
        }
        cur.skip_ws();
        if (cur.done() || cur.peek() != ';') {
            fail("option \"" + opt.key + "\" must end with ';'", cur.pos, opt.key);
        }
        ++cur.pos;
        options.push_back(std::move(opt));
    }
    return options;
}

std::int64_t require_int(const RawOption& opt, std::int64_t lo, std::int64_t hi) {
    if (!opt.value) fail("option \"" + opt.key + "\" requires a value", opt.offset, opt.key);
    auto v = parse_int(*opt.value);
    if (!v || *v < lo || *v > hi) {
        fail("option \"" + opt.key + "\" has malformed value \"" + *opt.value + "\"", opt.offset,
             *opt.value);
    }
    return *v;
}

FlagsTest parse_flags_value(const RawOption& opt) {
    if (!opt.value || opt.value->empty()) {
        fail("option \"flags\" requires a value", opt.offset, opt.key);
    }
    FlagsTest test;
    for (std::size_t i = 0; i < opt.value->size(); ++i) {
        const char c = (*opt.value)[i];
        switch (c) {
            case 'F': test.set.bits |= TcpFlags::Fin; break;
            case 'S': test.set.bits |= TcpFlags::Syn; break;
            case 'R': test.set.bits |= TcpFlags::Rst; break;
            case 'P': test.set.bits |= TcpFlags::Psh; break;
            case 'A': test.set.bits |= TcpFlags::Ack; break;
            case 'U': test.set.bits |= TcpFlags::Urg; break;
            case '+':
                if (i + 1 != opt.value->size()) {
                    fail("'+' must end the flags value", opt.offset, *opt.value);
                }
                test.superset = true;
                break;
            default:
                fail(std::string("unsupported flag '") + c + "'", opt.offset, *opt.value);
        }
    }
    if (test.set.empty()) fail("flags value names no flags", opt.offset, *opt.value);
    return test;
}

DetectionFilter parse_detection_filter_value(const RawOption& opt) {
    if (!opt.value) fail("option \"detection_filter\" requires a value", opt.offset, opt.key);
    std::optional<DetectionFilter::Track> track;
    std::optional<std::int64_t> count, seconds;

    std::stringstream parts(*opt.value);
    std::string part;
    while (std::getline(parts, part, ',')) {
        std::istringstream kv(part);
        std::string key, value, extra;
        kv >> key >> value;
        if (key.empty() || value.empty() || (kv >> extra)) {
            fail("malformed detection_filter part \"" + part + "\"", opt.offset, part);
        }
        if (key == "track") {
            if (track) fail("duplicate detection_filter track", opt.offset, part);
            if (value == "by_src") track = DetectionFilter::Track::BySrc;
            else if (value == "by_dst") track = DetectionFilter::Track::ByDst;
            else fail("track must be by_src or by_dst, got \"" + value + "\"", opt.offset, value);
        } else if (key == "count" || key == "seconds") {
            auto v = parse_int(value);
            if (!v || *v < 1) fail("detection_filter " + key + " must be >= 1", opt.offset, value);
            auto& slot = key == "count" ? count : seconds;
            if (slot) fail("duplicate detection_filter " + key, opt.offset, part);
            slot = *v;
        } else {
            fail("unknown detection_filter key \"" + key + "\"", opt.offset, key);
        }
    }
    if (!track || !count || !seconds) {
        fail("detection_filter needs track, count, and seconds", opt.offset, *opt.value);
    }
    return DetectionFilter{*track, static_cast<int>(*count), static_cast<int>(*seconds)};
}

}  // namespace

Rule parse_rule(std::string_view line, const VarMap& vars) {
    const auto newline = line.find_first_of("\r\n");
    if (newline != std::string_view::npos) {
        throw SingleLineViolation("rule must be a single line; newline at offset " +
                                      std::to_string(newline),
                                  newline, "\\n");
    }

    Cursor cur{line};
    Rule rule;
    rule.action = parse_action(cur.next_token());
    rule.protocol = parse_protocol(cur.next_token());
    rule.src = parse_address(cur.next_token(), vars);
    rule.src_port = parse_port(cur.next_token());

    const auto dir = cur.next_token();
    if (dir.text == "<>") {
        fail("bidirectional direction \"<>\" is unsupported", dir.offset, std::string(dir.text));
    }
    if (dir.text != "->") {
        fail("expected direction \"->\", got \"" + std::string(dir.text) + "\"", dir.offset,
             std::string(dir.text));
    }

    rule.dst = parse_address(cur.next_token(), vars);
    rule.dst_port = parse_port(cur.next_token());

    cur.skip_ws();
    if (cur.done() || cur.peek() != '(') fail("expected '(' to open options", cur.pos, "");
    ++cur.pos;
    const auto options = parse_option_block(cur);
    cur.skip_ws();
    if (!cur.done()) {
        fail("trailing characters after rule", cur.pos, std::string(cur.text.substr(cur.pos)));
    }

    bool saw_msg = false, saw_sid = false, saw_rev = false;
    for (const auto& opt : options) {
        auto once = [&](bool& seen) {
            if (seen) fail("duplicate option \"" + opt.key + "\"", opt.offset, opt.key);
            seen = true;
        };
        if (opt.key == "msg") {
            once(saw_msg);
            if (!opt.value) fail("option \"msg\" requires a value", opt.offset, opt.key);
            rule.msg = *opt.value;
        } else if (opt.key == "sid") {
            once(saw_sid);
            rule.sid = require_int(opt, 1, std::numeric_limits<std::int64_t>::max());
        } else if (opt.key == "rev") {
            once(saw_rev);
            rule.rev = require_int(opt, 1, std::numeric_limits<std::int64_t>::max());
        } else if (opt.key == "itype") {
            if (rule.itype) fail("duplicate option \"itype\"", opt.offset, opt.key);
            rule.itype = static_cast<int>(require_int(opt, 0, 255));
        } else if (opt.key == "flags") {
            if (rule.flags) fail("duplicate option \"flags\"", opt.offset, opt.key);
            rule.flags = parse_flags_value(opt);
        } else if (opt.key == "classtype") {
            if (rule.classtype) fail("duplicate option \"classtype\"", opt.offset, opt.key);
            if (!opt.value || opt.value->empty()) {
                fail("option \"classtype\" requires a value", opt.offset, opt.key);
            }
            rule.classtype = *opt.value;
        } else if (opt.key == "detection_filter") {
            if (rule.detection_filter) {
                fail("duplicate option \"detection_filter\"", opt.offset, opt.key);
            }
            rule.detection_filter = parse_detection_filter_value(opt);
        } else {
            fail("unknown option \"" + opt.key + "\"", opt.offset, opt.key);
        }
    }
    if (!saw_msg) fail("rule is missing required option \"msg\"", line.size(), "");
    if (!saw_sid) fail("rule is missing required option \"sid\"", line.size(), "");
    return rule;
}

RulesetParse parse_ruleset(std::string_view document, const VarMap& vars) {
    RulesetParse out;
    std::map<std::int64_t, int> sid_lines;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= document.size()) {
        const auto eol = document.find('\n', pos);
        std::string_view line = document.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
        pos = eol == std::string_view::npos ? document.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        std::string_view trimmed = line;
        while (!trimmed.empty() && (trimmed.front() == ' ' || trimmed.front() == '\t')) {
            trimmed.remove_prefix(1);
        }
        if (trimmed.empty() || trimmed.front() == '#') continue;

        try {
            Rule rule = parse_rule(line, vars);
            auto [it, fresh] = sid_lines.emplace(rule.sid, line_no);
            if (!fresh) {
                out.diagnostics.push_back(RulesetDiagnostic{
                    line_no, "duplicate sid " + std::to_string(rule.sid) + " (first used on line " +
                                 std::to_string(it->second) + ")"});
            }
            out.rules.push_back(std::move(rule));
        } catch (const RuleParseError& e) {
            out.diagnostics.push_back(RulesetDiagnostic{line_no, e.what()});
        }
    }
    return out;
}

bool rule_matches(const Rule& rule, const Packet& pkt) {
    switch (rule.protocol) {
        case RuleProtocol::Ip: break;
        case RuleProtocol::Icmp:
            if (pkt.protocol != Protocol::Icmp) return false;
            break;
        case RuleProtocol::Tcp:
            if (pkt.protocol != Protocol::Tcp) return false;
            break;
        case RuleProtocol::Udp:
            if (pkt.protocol != Protocol::Udp) return false;
            break;
    }
    if (!rule.src.matches(pkt.src_ip)) return false;
    if (!rule.dst.matches(pkt.dst_ip)) return false;
    if (!rule.src_port.matches(pkt.src_port)) return false;
    if (!rule.dst_port.matches(pkt.dst_port)) return false;
    if (rule.itype && (!pkt.icmp_type || *pkt.icmp_type != *rule.itype)) return false;
    if (rule.flags) {
        if (!pkt.tcp_flags) return false;
        if (rule.flags->superset) {
            if (!pkt.tcp_flags->contains(rule.flags->set)) return false;
        } else {
            if (*pkt.tcp_flags != rule.flags->set) return false;
        }
    }
    return true;
}

namespace {

std::string render_address(const AddressSpec& spec) {
    switch (spec.kind) {
        case AddressSpec::Kind::Any: return "any";
        case AddressSpec::Kind::Single: return spec.addr.render();
        case AddressSpec::Kind::Cidr: return spec.addr.render() + "/" + std::to_string(spec.prefix);
        case AddressSpec::Kind::Variable: return "$" + spec.var;
    }
    return "any";
}

std::string render_port(const PortSpec& spec) {
    switch (spec.kind) {
        case PortSpec::Kind::Any: return "any";
        case PortSpec::Kind::Single: return std::to_string(spec.lo);
        case PortSpec::Kind::Range: return std::to_string(spec.lo) + ":" + std::to_string(spec.hi);
    }
    return "any";
}

std::string escape_msg(const std::string& msg) {
    std::string out;
    for (char c : msg) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

std::string render_flags(const FlagsTest& test) {
    std::string out;
    const std::pair<std::uint8_t, char> order[] = {{TcpFlags::Fin, 'F'}, {TcpFlags::Syn, 'S'},
                                                   {TcpFlags::Rst, 'R'}, {TcpFlags::Psh, 'P'},
                                                   {TcpFlags::Ack, 'A'}, {TcpFlags::Urg, 'U'}};
    for (auto [bit, letter] : order) {
        if (test.set.has(bit)) out.push_back(letter);
    }
    if (test.superset) out.push_back('+');
    return out;
}

const char* action_name(RuleAction a) {
    switch (a) {
        case RuleAction::Alert: return "alert";
        case RuleAction::Log: return "log";
        case RuleAction::Pass: return "pass";
    }
    return "alert";
}

const char* rule_protocol_name(RuleProtocol p) {
    switch (p) {
        case RuleProtocol::Icmp: return "icmp";
        case RuleProtocol::Tcp: return "tcp";
        case RuleProtocol::Udp: return "udp";
        case RuleProtocol::Ip: return "ip";
    }
    return "ip";
}

}  // namespace

std::string serialize_rule(const Rule& rule) {
    std::string out;
    out += action_name(rule.action);
    out += ' ';
    out += rule_protocol_name(rule.protocol);
    out += ' ';
    out += render_address(rule.src) + ' ' + render_port(rule.src_port);
    out += " -> ";
    out += render_address(rule.dst) + ' ' + render_port(rule.dst_port);
    out += " (msg:\"" + escape_msg(rule.msg) + "\";";
    if (rule.itype) out += " itype:" + std::to_string(*rule.itype) + ";";
    if (rule.flags) out += " flags:" + render_flags(*rule.flags) + ";";
    if (rule.classtype) out += " classtype:" + *rule.classtype + ";";
    if (rule.detection_filter) {
        const auto& df = *rule.detection_filter;
        out += " detection_filter:track ";
        out += df.track == DetectionFilter::Track::BySrc ? "by_src" : "by_dst";
        out += ", count " + std::to_string(df.count) + ", seconds " + std::to_string(df.seconds) + ";";
    }
    out += " sid:" + std::to_string(rule.sid) + ";";
    out += " rev:" + std::to_string(rule.rev) + ";)";
    return out;
}

}  // namespace sdnsim
