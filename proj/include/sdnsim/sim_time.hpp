#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>

namespace sdnsim {

// Length of a simulated interval, 1 microsecond resolution.
struct Duration {
    std::int64_t micros = 0;

    static Duration from_seconds(double s) { return Duration{static_cast<std::int64_t>(std::llround(s * 1e6))}; }
    static Duration from_micros(std::int64_t us) { return Duration{us}; }

    double seconds() const { return static_cast<double>(micros) / 1e6; }

    Duration operator+(Duration o) const { return Duration{micros + o.micros}; }
    Duration operator-(Duration o) const { return Duration{micros - o.micros}; }
    auto operator<=>(const Duration&) const = default;
};

// Instant on the simulation clock, measured from scenario start.
struct SimTime {
    std::int64_t micros = 0;

    static SimTime zero() { return SimTime{0}; }
    static SimTime from_seconds(double s) { return SimTime{static_cast<std::int64_t>(std::llround(s * 1e6))}; }
    static SimTime from_micros(std::int64_t us) { return SimTime{us}; }

    double seconds() const { return static_cast<double>(micros) / 1e6; }

    SimTime operator+(Duration d) const { return SimTime{micros + d.micros}; }
    SimTime operator-(Duration d) const { return SimTime{micros - d.micros}; }
    Duration operator-(SimTime o) const { return Duration{micros - o.micros}; }
    auto operator<=>(const SimTime&) const = default;
};

// Renders "<seconds>.<micros>" with the fractional part zero-padded to six
// digits, e.g. 9.001125. Used in alert lines and timelines; format is stable.
std::string format_seconds(SimTime t);

}  // namespace sdnsim
