#pragma once

#include <cstddef>
#include <vector>

#include "secidx/code_matrix.hpp"
#include "secidx/conventional.hpp"
#include "secidx/limits.hpp"
#include "secidx/problem.hpp"

namespace secidx {

/// Row `row` has its leading 1 at coordinate `coord` of a key or randomness
/// block (receiver is meaningful for PrivateKey marks only).
struct Mark {
    std::size_t row = 0;
    BlockKind block = BlockKind::CommonKey;
    std::size_t receiver = 0;
    std::size_t coord = 0;

    friend bool operator==(const Mark&, const Mark&) = default;
};

/// A generation matrix in reduced row echelon form whose pivots all sit in
/// key or randomness columns, with one mark per row.
struct MarkedForm {
    CodeMatrix matrix;
    std::vector<Mark> marks;
};

struct ReduceOptions {
    /// Re-check secrecy and decodability exhaustively after each stage.
    bool reverify = true;
    Caps caps = Caps::from_env();
};

/// Throws SecurityViolation or DecodabilityLost when the code fails the
/// exhaustive verifiers.
void require_secure_code(const Instance& inst, const CodeMatrix& cm, const Caps& caps);

/// Deletes all-zero key and randomness columns and keeps a maximal set of
/// independent rows (greedy from the top).
CodeMatrix minimize(const Instance& inst, const CodeMatrix& cm, const ReduceOptions& opts = {});

/// RREF with marks. Throws SecurityViolation when a pivot lands in a message
/// block, i.e. some public symbol combination involves messages only.
/// Zero rows are dropped.
MarkedForm echelon_mark(const Instance& inst, const CodeMatrix& cm, const ReduceOptions& opts = {});

/// Fixes every unmarked key or randomness coordinate to zero, removing its column.
MarkedForm prune_unmarked_keys(const Instance& inst, const MarkedForm& mf, const ReduceOptions& opts = {});

/// Deletes the rows marked by randomness coordinates together with the
/// randomness columns. Throws DecodabilityLost if a receiver needed them.
MarkedForm drop_private_randomness(const Instance& inst, const MarkedForm& mf, const ReduceOptions& opts = {});

/// minimize, echelon_mark, prune_unmarked_keys, drop_private_randomness.
/// The result has l_k + sum l_ki rows and identity key blocks.
MarkedForm to_standard_form(const Instance& inst, const CodeMatrix& cm, const ReduceOptions& opts = {});

/// Given X recoverable from (AX + BY, CX + DY), a set S of X coordinates with
/// |S| <= rows(C) such that X is recoverable from AX + BY and X(S). Private
/// rows are processed in order; a row that is not needed is discarded,
/// otherwise the lowest coordinate that becomes unrecoverable without it is
/// pinned. Returns S sorted. Throws PreconditionError when X is not
/// recoverable from the full system.
std::vector<std::size_t> pin_subset(const FieldMatrix& a, const FieldMatrix& b, const FieldMatrix& c,
                                    const FieldMatrix& d);

/// Whether X (the first n columns) is determined by the rows of [F | G].
bool recoverable(const FieldMatrix& f, const FieldMatrix& g);

struct Extraction {
    /// Length l_k code on message lengths [l_i - l_ki]_+.
    LinearCode code;
    /// Coordinates of each M_i fixed to zero (sorted, 0-based).
    std::vector<std::vector<std::size_t>> pinned;
};

/// Conventional code hidden in a standard form: pins coordinates of each
/// M_i via pin_subset on the common-key rows and receiver i's private rows,
/// pads the pinned set with the lowest free coordinates up to
/// min(l_i, l_ki), fixes pinned coordinates to zero and keeps the message
/// part of the common-key rows. Throws DecodabilityLost if the result is
/// not zero-error.
Extraction extract_conventional(const Instance& inst, const MarkedForm& mf, const Caps& caps = Caps::from_env());

json marked_form_to_json(const MarkedForm& mf);
MarkedForm marked_form_from_json(const json& j);

}  // namespace secidx
