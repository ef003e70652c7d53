#include "secidx/linreduce.hpp"

#include <algorithm>
#include <numeric>

#include "secidx/errors.hpp"
#include "secidx/secure.hpp"

namespace secidx {

namespace {

// Keeps the columns with keep[c] set, shrinking block widths accordingly.
CodeMatrix keep_columns(const CodeMatrix& cm, const std::vector<bool>& keep) {
    BlockLayout layout = cm.layout;
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < keep.size(); ++c) {
        if (keep[c]) {
            cols.push_back(c);
            continue;
        }
        const auto loc = cm.layout.locate(c);
        switch (loc.kind) {
            case BlockKind::CommonKey: --layout.l_k; break;
            case BlockKind::PrivateKey: --layout.l_ki[loc.receiver]; break;
            case BlockKind::Randomness: --layout.l_w; break;
            case BlockKind::Message: --layout.l_i[loc.receiver]; break;
        }
    }
    return CodeMatrix(cm.pi.select_cols(cols), layout);
}

// Marks read off the leading entry of each row of a matrix already in RREF.
std::vector<Mark> marks_of(const CodeMatrix& cm) {
    std::vector<Mark> marks;
    for (std::size_t r = 0; r < cm.pi.rows(); ++r) {
        std::size_t c = 0;
        while (c < cm.pi.cols() && cm.pi.at(r, c) == 0) ++c;
        if (c == cm.pi.cols()) throw DimensionError("zero row in marked form");
        const auto loc = cm.layout.locate(c);
        if (loc.kind == BlockKind::Message) {
            throw SecurityViolation("row " + std::to_string(r + 1) + " combines message symbols only (pivot in M_" +
                                    std::to_string(loc.receiver + 1) + ")");
        }
        marks.push_back({r, loc.kind, loc.receiver, loc.coord});
    }
    return marks;
}

void maybe_verify(const Instance& inst, const CodeMatrix& cm, const ReduceOptions& opts) {
    if (opts.reverify) require_secure_code(inst, cm, opts.caps);
}

FieldMatrix unit_rows(std::span<const std::size_t> coords, std::size_t cols, std::uint32_t p) {
    FieldMatrix m(coords.size(), cols, p);
    for (std::size_t k = 0; k < coords.size(); ++k) m.set(k, coords[k], 1);
    return m;
}

}  // namespace

void require_secure_code(const Instance& inst, const CodeMatrix& cm, const Caps& caps) {
    auto code = make_linear_secure_code(inst, cm);
    if (!code || !verify_decoding(*code, caps).pass) throw DecodabilityLost("some receiver cannot decode");
    const auto secrecy = verify_perfect_secrecy(*code, caps);
    if (!secrecy.pass) throw SecurityViolation("code is not perfectly secure");
}

CodeMatrix minimize(const Instance& inst, const CodeMatrix& cm, const ReduceOptions& opts) {
    maybe_verify(inst, cm, opts);
    std::vector<bool> keep(cm.pi.cols(), true);
    for (std::size_t c = 0; c < cm.layout.key_width(); ++c) keep[c] = !cm.pi.col_is_zero(c);
    const CodeMatrix narrowed = keep_columns(cm, keep);
    const auto rows = independent_rows(narrowed.pi);
    CodeMatrix out(narrowed.pi.select_rows(rows), narrowed.layout);
    maybe_verify(inst, out, opts);
    return out;
}

MarkedForm echelon_mark(const Instance& inst, const CodeMatrix& cm, const ReduceOptions& opts) {
    const RrefResult r = rref(cm.pi);
    std::vector<std::size_t> nonzero(r.pivots.size());
    std::iota(nonzero.begin(), nonzero.end(), std::size_t{0});
    CodeMatrix reduced(r.matrix.select_rows(nonzero), cm.layout);
    MarkedForm mf{reduced, marks_of(reduced)};
    maybe_verify(inst, mf.matrix, opts);
    return mf;
}

MarkedForm prune_unmarked_keys(const Instance& inst, const MarkedForm& mf, const ReduceOptions& opts) {
    std::vector<bool> keep(mf.matrix.pi.cols(), true);
    for (std::size_t c = 0; c < mf.matrix.layout.key_width(); ++c) keep[c] = false;
    for (const Mark& m : mf.marks) {
        std::size_t col = m.coord;
        if (m.block == BlockKind::PrivateKey) col += mf.matrix.layout.private_offset(m.receiver);
        if (m.block == BlockKind::Randomness) col += mf.matrix.layout.randomness_offset();
        keep[col] = true;
    }
    const CodeMatrix pruned = keep_columns(mf.matrix, keep);
    MarkedForm out{pruned, marks_of(pruned)};
    maybe_verify(inst, out.matrix, opts);
    return out;
}

MarkedForm drop_private_randomness(const Instance& inst, const MarkedForm& mf, const ReduceOptions& opts) {
    std::vector<std::size_t> rows;
    for (const Mark& m : mf.marks) {
        if (m.block != BlockKind::Randomness) rows.push_back(m.row);
    }
    const CodeMatrix& cm = mf.matrix;
    std::vector<bool> keep(cm.pi.cols(), true);
    for (std::size_t k = 0; k < cm.layout.l_w; ++k) keep[cm.layout.randomness_offset() + k] = false;
    const CodeMatrix dropped = keep_columns(CodeMatrix(cm.pi.select_rows(rows), cm.layout), keep);
    MarkedForm out{dropped, marks_of(dropped)};
    if (!make_linear_secure_code(inst, out.matrix)) {
        throw DecodabilityLost("a receiver relied on rows masked by encoder randomness");
    }
    maybe_verify(inst, out.matrix, opts);
    return out;
}

MarkedForm to_standard_form(const Instance& inst, const CodeMatrix& cm, const ReduceOptions& opts) {
    const CodeMatrix minimal = minimize(inst, cm, opts);
    ReduceOptions inner = opts;
    inner.reverify = false;
    MarkedForm mf = echelon_mark(inst, minimal, inner);
    mf = prune_unmarked_keys(inst, mf, inner);
    mf = drop_private_randomness(inst, mf, inner);
    maybe_verify(inst, mf.matrix, opts);
    return mf;
}

bool recoverable(const FieldMatrix& f, const FieldMatrix& g) {
    const std::size_t n = f.cols();
    const FieldMatrix sys = f.hstack(g);
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    const FieldMatrix units = unit_rows(all, sys.cols(), sys.modulus());
    return rank(sys.vstack(units)) == rank(sys);
}

std::vector<std::size_t> pin_subset(const FieldMatrix& a, const FieldMatrix& b, const FieldMatrix& c,
                                    const FieldMatrix& d) {
    if (a.cols() != c.cols() || b.cols() != d.cols() || a.rows() != b.rows() || c.rows() != d.rows()) {
        throw DimensionError("pin_subset: inconsistent block shapes");
    }
    const std::size_t n = a.cols();
    const std::uint32_t p = a.modulus();
    const FieldMatrix pub = a.hstack(b);
    const FieldMatrix priv = c.hstack(d);
    if (!recoverable(a.vstack(c), b.vstack(d))) {
        throw PreconditionError("pin_subset: X is not recoverable from the full system");
    }
    const std::size_t width = pub.cols();
    std::vector<std::size_t> pinned;
    for (std::size_t j = 0; j < priv.rows(); ++j) {
        std::vector<std::size_t> later(priv.rows() - j - 1);
        std::iota(later.begin(), later.end(), j + 1);
        const FieldMatrix without = pub.vstack(unit_rows(pinned, width, p)).vstack(priv.select_rows(later));
        const std::size_t base = rank(without);
        std::optional<std::size_t> lost;
        for (std::size_t x = 0; x < n && !lost; ++x) {
            const std::size_t one[] = {x};
            if (rank(without.vstack(unit_rows(one, width, p))) != base) lost = x;
        }
        if (lost) pinned.push_back(*lost);
    }
    std::sort(pinned.begin(), pinned.end());
    return pinned;
}

Extraction extract_conventional(const Instance& inst, const MarkedForm& mf, const Caps& caps) {
    const CodeMatrix& cm = mf.matrix;
    const BlockLayout& layout = cm.layout;
    if (layout.l_i != inst.msg_len()) throw PreconditionError("standard form does not match the instance");
    if (layout.l_w != 0) throw PreconditionError("standard form must have no encoder randomness");
    if (cm.pi.rows() != layout.key_width() || mf.marks.size() != cm.pi.rows()) {
        throw PreconditionError("standard form must have one row per key symbol");
    }
    std::vector<std::size_t> common_rows;
    std::vector<std::vector<std::size_t>> private_rows(inst.t());
    for (const Mark& m : mf.marks) {
        if (m.block == BlockKind::CommonKey) common_rows.push_back(m.row);
        if (m.block == BlockKind::PrivateKey) private_rows[m.receiver].push_back(m.row);
    }

    Extraction out;
    out.pinned.resize(inst.t());
    std::vector<bool> keep_msg(layout.msg_width(), true);
    for (std::size_t i = 0; i < inst.t(); ++i) {
        std::vector<std::size_t> x_cols;
        std::vector<std::size_t> y_cols;
        for (std::size_t a = 0; a < inst.msg_len(i); ++a) x_cols.push_back(layout.msg_offset(i) + a);
        for (std::size_t j = 0; j < inst.t(); ++j) {
            if (j == i || inst.knows(i, j)) continue;
            for (std::size_t a = 0; a < inst.msg_len(j); ++a) y_cols.push_back(layout.msg_offset(j) + a);
        }
        const FieldMatrix pub = cm.pi.select_rows(common_rows);
        const FieldMatrix priv = cm.pi.select_rows(private_rows[i]);
        auto pins = pin_subset(pub.select_cols(x_cols), pub.select_cols(y_cols), priv.select_cols(x_cols),
                               priv.select_cols(y_cols));
        const std::size_t target = std::min(inst.msg_len(i), layout.l_ki[i]);
        for (std::size_t a = 0; pins.size() < target && a < inst.msg_len(i); ++a) {
            if (!std::binary_search(pins.begin(), pins.end(), a)) {
                pins.insert(std::upper_bound(pins.begin(), pins.end(), a), a);
            }
        }
        for (std::size_t a : pins) keep_msg[layout.msg_offset(i) - layout.key_width() + a] = false;
        out.pinned[i] = std::move(pins);
    }

    std::vector<std::size_t> cols;
    std::vector<std::size_t> reduced(inst.t());
    for (std::size_t i = 0; i < inst.t(); ++i) {
        for (std::size_t a = 0; a < inst.msg_len(i); ++a) {
            if (keep_msg[layout.msg_offset(i) - layout.key_width() + a]) {
                cols.push_back(layout.msg_offset(i) + a);
                ++reduced[i];
            }
        }
    }
    const FieldMatrix g = cm.pi.select_rows(common_rows).select_cols(cols);
    auto code = make_linear_code(inst.with_msg_len(reduced), g);
    if (!code || !verify_zero_error(*code, caps).pass) {
        throw DecodabilityLost("extracted conventional code is not zero-error");
    }
    out.code = std::move(*code);
    return out;
}

namespace {

const char* block_name(BlockKind k) {
    switch (k) {
        case BlockKind::CommonKey: return "K";
        case BlockKind::PrivateKey: return "K_i";
        case BlockKind::Randomness: return "W";
        case BlockKind::Message: return "M_i";
    }
    return "?";
}

}  // namespace

json marked_form_to_json(const MarkedForm& mf) {
    json j = code_matrix_to_json(mf.matrix);
    json marks = json::array();
    for (const Mark& m : mf.marks) {
        json e{{"row", m.row + 1}, {"block", block_name(m.block)}, {"coord", m.coord + 1}};
        if (m.block == BlockKind::PrivateKey) e["receiver"] = m.receiver + 1;
        marks.push_back(std::move(e));
    }
    j["marks"] = std::move(marks);
    return j;
}

MarkedForm marked_form_from_json(const json& j) {
    CodeMatrix cm = code_matrix_from_json(j);
    std::vector<Mark> marks;
    try {
        marks = marks_of(cm);
    } catch (const SecurityViolation& e) {
        throw ParseError(ParseErrorKind::Malformed, std::string("marked form: ") + e.what());
    } catch (const DimensionError& e) {
        throw ParseError(ParseErrorKind::Malformed, std::string("marked form: ") + e.what());
    }
    if (rref(cm.pi).matrix != cm.pi) throw ParseError(ParseErrorKind::Malformed, "marked form: rows are not in RREF");
    return {std::move(cm), std::move(marks)};
}

}  // namespace secidx
