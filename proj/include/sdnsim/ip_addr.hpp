#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sdnsim {

// IPv4 address. The canonical text form is the dotted quad without leading
// zeros, so parse(render(a)) == a.
struct IpAddr {
    std::uint32_t value = 0;

    static std::optional<IpAddr> parse(std::string_view text);
    std::string render() const;

    auto operator<=>(const IpAddr&) const = default;
};

}  // namespace sdnsim
