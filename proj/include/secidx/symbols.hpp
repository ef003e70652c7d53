#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "secidx/errors.hpp"
#include "secidx/gf.hpp"

namespace secidx {

/// p^n, throwing CapExceeded when it would exceed `cap` (or overflow).
inline std::uint64_t space_size(std::uint32_t p, std::size_t n, std::uint64_t cap, const char* what) {
    std::uint64_t size = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (size > cap / p) {
            throw CapExceeded(std::string(what) + ": " + std::to_string(p) + "^" + std::to_string(n) +
                              " exceeds cap " + std::to_string(cap));
        }
        size *= p;
    }
    return size;
}

/// Writes the base-p digits of `index` into out, most significant first.
/// Tuples therefore enumerate in lexicographic order.
inline void unpack_index(std::uint64_t index, std::uint32_t p, std::span<Symbol> out) {
    for (std::size_t k = out.size(); k-- > 0;) {
        out[k] = static_cast<Symbol>(index % p);
        index /= p;
    }
}

inline SymbolVec unpack_index(std::uint64_t index, std::uint32_t p, std::size_t n) {
    SymbolVec v(n);
    unpack_index(index, p, v);
    return v;
}

inline std::uint64_t pack_index(std::span<const Symbol> v, std::uint32_t p) {
    std::uint64_t index = 0;
    for (Symbol s : v) index = index * p + s;
    return index;
}

}  // namespace secidx
