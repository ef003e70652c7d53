#pragma once

#include <cstddef>
#include <vector>

#include "secidx/gf.hpp"
#include "secidx/problem.hpp"

namespace secidx {

enum class BlockKind { CommonKey, PrivateKey, Randomness, Message };

/// Column layout of a generation matrix: [K | K_1 .. K_t | W | M_1 .. M_t].
struct BlockLayout {
    std::size_t l_k = 0;
    std::vector<std::size_t> l_ki;
    std::size_t l_w = 0;
    std::vector<std::size_t> l_i;

    static BlockLayout of(const Instance& inst, const KeyProfile& keys);

    std::size_t t() const noexcept { return l_i.size(); }
    /// Columns holding K, every K_i and W.
    std::size_t key_width() const;
    std::size_t msg_width() const;
    std::size_t total() const { return key_width() + msg_width(); }

    std::size_t private_offset(std::size_t i) const;
    std::size_t randomness_offset() const;
    std::size_t msg_offset(std::size_t i) const;

    struct Location {
        BlockKind kind;
        std::size_t receiver;  // for PrivateKey and Message blocks
        std::size_t coord;     // 0-based position inside the block
    };
    Location locate(std::size_t col) const;

    KeyProfile keys() const { return {l_k, l_ki, l_w}; }

    friend bool operator==(const BlockLayout&, const BlockLayout&) = default;
};

/// Generation matrix of a linear secure code, C = pi [K; K_1..K_t; W; M_1..M_t].
struct CodeMatrix {
    FieldMatrix pi;
    BlockLayout layout;

    CodeMatrix() = default;
    /// Throws DimensionError when the column count does not match the layout.
    CodeMatrix(FieldMatrix pi, BlockLayout layout);

    std::size_t length() const noexcept { return pi.rows(); }
    std::uint32_t modulus() const noexcept { return pi.modulus(); }
    FieldMatrix key_part() const { return pi.col_range(0, layout.key_width()); }
    FieldMatrix msg_part() const { return pi.col_range(layout.key_width(), layout.msg_width()); }

    friend bool operator==(const CodeMatrix&, const CodeMatrix&) = default;
};

json code_matrix_to_json(const CodeMatrix& cm);
CodeMatrix code_matrix_from_json(const json& j);

}  // namespace secidx
