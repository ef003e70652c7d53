#include "secidx/limits.hpp"

#include <charconv>
#include <cstdlib>

namespace secidx {

std::optional<std::uint64_t> parse_cap(std::string_view text) {
    auto to_u64 = [](std::string_view s) -> std::optional<std::uint64_t> {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
        return v;
    };
    if (text.starts_with("2^")) {
        auto e = to_u64(text.substr(2));
        if (!e || *e > 62) return std::nullopt;
        return std::uint64_t{1} << *e;
    }
    return to_u64(text);
}

Caps Caps::from_env() {
    Caps caps;
    if (const char* env = std::getenv("SECIDX_CAP")) {
        if (auto v = parse_cap(env)) {
            caps.enumeration = *v;
            caps.verification = *v;
            caps.search_nodes = *v;
        }
    }
    return caps;
}

}  // namespace secidx
