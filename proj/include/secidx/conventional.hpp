#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "secidx/gf.hpp"
#include "secidx/limits.hpp"
#include "secidx/problem.hpp"

namespace secidx {

/// Conventional (keyless) linear index code C = G M.
///
/// decoders[i] maps receiver i's observation [C ; side-information symbols]
/// to M_i. Side-information symbols are the concatenated messages of S_i in
/// increasing message order.
struct LinearCode {
    Instance instance;
    FieldMatrix encoder;
    std::vector<FieldMatrix> decoders;

    std::size_t length() const noexcept { return encoder.rows(); }
};

/// Explicit (possibly nonlinear) conventional code over alphabets p^n.
///
/// encoder[m] is the code index for message tuple index m. decoders[i] is
/// indexed by c * |S_i space| + s_i and yields the index of M_i, or -1 for
/// observations that never occur.
struct TableCode {
    Instance instance;
    std::size_t code_len = 0;
    std::vector<std::uint64_t> encoder;
    std::vector<std::vector<std::int64_t>> decoders;
};

struct ZeroErrorFailure {
    SymbolVec messages;
    std::size_t receiver = 0;
};

struct ZeroErrorResult {
    bool pass = true;
    std::optional<ZeroErrorFailure> failure;
};

/// Column indices (in the concatenated message vector) of receiver i's side information.
std::vector<std::size_t> side_info_columns(const Instance& inst, std::size_t receiver);

/// Linear decoders for encoder G, built by solving the stacked system of
/// code rows and side-information unit rows. nullopt if some receiver cannot decode.
std::optional<std::vector<FieldMatrix>> derive_decoders(const Instance& inst, const FieldMatrix& encoder);

/// Builds a LinearCode with derived decoders; nullopt if G is not decodable.
std::optional<LinearCode> make_linear_code(const Instance& inst, const FieldMatrix& encoder);

/// Decoder tables for a table encoder; nullopt if two message tuples that a
/// receiver must tell apart collide.
std::optional<std::vector<std::vector<std::int64_t>>> derive_table_decoders(const Instance& inst, std::size_t code_len,
                                                                              const std::vector<std::uint64_t>& encoder);

/// Exhaustive zero-error check over all p^(sum l_i) message tuples. Reports
/// the first failing (tuple, receiver) in lexicographic order.
ZeroErrorResult verify_zero_error(const LinearCode& code, const Caps& caps = Caps::from_env());
ZeroErrorResult verify_zero_error(const TableCode& code, const Caps& caps = Caps::from_env());

struct SearchStats {
    std::uint64_t nodes = 0;
    /// (length tried, nodes spent) per attempted length
    std::vector<std::pair<std::size_t, std::uint64_t>> per_length;
};

/// A linear code of exactly `len` rows passing verify_zero_error, or nullopt
/// after exhausting all fitting matrices. Messages longer than one symbol are
/// handled by splitting each receiver into one virtual receiver per symbol.
std::optional<LinearCode> find_linear_code(const Instance& inst, std::size_t len, const Caps& caps = Caps::from_env(),
                                           SearchStats* stats = nullptr);

struct MinRankResult {
    std::size_t length = 0;
    LinearCode witness;
    SearchStats stats;
};

/// Smallest l <= max_len admitting a linear code, with a witness.
std::optional<MinRankResult> min_rank(const Instance& inst, std::size_t max_len, const Caps& caps = Caps::from_env());

struct BruteForceResult {
    /// Minimal exponent e such that a zero-error code with |C| = p^e exists.
    std::size_t exponent = 0;
    TableCode witness;
    std::uint64_t nodes = 0;
};

/// Optimal conventional code over all (nonlinear) encoders. The search colors
/// the confusion graph of message tuples with p^e colors for e = 0, 1, ...
BruteForceResult brute_force_optimal(const Instance& inst, const Caps& caps = Caps::from_env());

/// Whether the message tuples can be colored with k colors so that every pair
/// some receiver must distinguish gets different colors. Returns the coloring.
std::optional<std::vector<std::uint64_t>> color_confusion_graph(const Instance& inst, std::uint64_t colors,
                                                                const Caps& caps, std::uint64_t* nodes = nullptr);

}  // namespace secidx
