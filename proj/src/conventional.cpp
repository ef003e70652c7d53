#include "secidx/conventional.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <limits>
#include <map>
#include <mutex>

#include "secidx/errors.hpp"
#include "secidx/symbols.hpp"

namespace secidx {

std::vector<std::size_t> side_info_columns(const Instance& inst, std::size_t receiver) {
    std::vector<std::size_t> cols;
    for (std::size_t j : inst.side_info(receiver)) {
        const std::size_t off = inst.offset(j);
        for (std::size_t k = 0; k < inst.msg_len(j); ++k) cols.push_back(off + k);
    }
    return cols;
}

std::optional<std::vector<FieldMatrix>> derive_decoders(const Instance& inst, const FieldMatrix& encoder) {
    if (encoder.cols() != inst.total_len()) throw DimensionError("encoder width does not match total message length");
    if (encoder.modulus() != inst.p()) throw ModulusMismatch("encoder field differs from instance field");
    std::vector<FieldMatrix> decoders;
    for (std::size_t i = 0; i < inst.t(); ++i) {
        const auto side = side_info_columns(inst, i);
        FieldMatrix units(side.size(), inst.total_len(), inst.p());
        for (std::size_t k = 0; k < side.size(); ++k) units.set(k, side[k], 1);
        const FieldMatrix stacked_t = encoder.vstack(units).transpose();
        FieldMatrix dec(inst.msg_len(i), stacked_t.cols(), inst.p());
        for (std::size_t a = 0; a < inst.msg_len(i); ++a) {
            SymbolVec target(inst.total_len(), 0);
            target[inst.offset(i) + a] = 1;
            auto x = solve_affine(stacked_t, target);
            if (!x) return std::nullopt;
            for (std::size_t c = 0; c < x->size(); ++c) dec.set(a, c, (*x)[c]);
        }
        decoders.push_back(std::move(dec));
    }
    return decoders;
}

std::optional<LinearCode> make_linear_code(const Instance& inst, const FieldMatrix& encoder) {
    auto dec = derive_decoders(inst, encoder);
    if (!dec) return std::nullopt;
    return LinearCode{inst, encoder, std::move(*dec)};
}

std::optional<std::vector<std::vector<std::int64_t>>> derive_table_decoders(const Instance& inst, std::size_t code_len,
                                                                              const std::vector<std::uint64_t>& encoder) {
    const std::uint32_t p = inst.p();
    const std::uint64_t n_msgs = space_size(p, inst.total_len(), std::numeric_limits<std::uint64_t>::max() / 2, "messages");
    const std::uint64_t n_codes = space_size(p, code_len, std::numeric_limits<std::uint64_t>::max() / 2, "code alphabet");
    if (encoder.size() != n_msgs) throw DimensionError("encoder table size does not match message space");
    std::vector<std::vector<std::int64_t>> decoders;
    SymbolVec m(inst.total_len());
    for (std::size_t i = 0; i < inst.t(); ++i) {
        const auto side = side_info_columns(inst, i);
        const std::uint64_t n_side = space_size(p, side.size(), std::numeric_limits<std::uint64_t>::max() / 2, "side info");
        std::vector<std::int64_t> table(n_codes * n_side, -1);
        SymbolVec s(side.size());
        const std::span<const Symbol> mine(m.data() + inst.offset(i), inst.msg_len(i));
        for (std::uint64_t idx = 0; idx < n_msgs; ++idx) {
            unpack_index(idx, p, m);
            for (std::size_t k = 0; k < side.size(); ++k) s[k] = m[side[k]];
            if (encoder[idx] >= n_codes) throw PreconditionError("encoder output outside code alphabet");
            auto& slot = table[encoder[idx] * n_side + pack_index(s, p)];
            const auto want = static_cast<std::int64_t>(pack_index(mine, p));
            if (slot == -1) {
                slot = want;
            } else if (slot != want) {
                return std::nullopt;
            }
        }
        decoders.push_back(std::move(table));
    }
    return decoders;
}

namespace {

// Scans message tuples in parallel chunks and returns the lexicographically
// first (tuple, receiver) for which check() reports a failing receiver.
template <class Check>
ZeroErrorResult scan_tuples(const Instance& inst, std::uint64_t n_msgs, const Caps& caps, Check check) {
    const std::uint64_t chunk = std::max<std::uint64_t>(1024, n_msgs / (std::uint64_t{caps.workers()} * 8 + 1));
    const std::uint64_t n_chunks = (n_msgs + chunk - 1) / chunk;
    std::atomic<std::uint64_t> first_bad{std::numeric_limits<std::uint64_t>::max()};
    std::mutex mu;
    std::optional<ZeroErrorFailure> best;
    std::uint64_t best_idx = std::numeric_limits<std::uint64_t>::max();
    parallel_for(caps.workers(), n_chunks, [&](std::size_t c) {
        SymbolVec m(inst.total_len());
        const std::uint64_t lo = c * chunk;
        const std::uint64_t hi = std::min(n_msgs, lo + chunk);
        for (std::uint64_t idx = lo; idx < hi; ++idx) {
            if (idx >= first_bad.load(std::memory_order_relaxed)) return;
            unpack_index(idx, inst.p(), m);
            const std::optional<std::size_t> bad = check(m);
            if (bad) {
                std::lock_guard lock(mu);
                if (idx < best_idx) {
                    best_idx = idx;
                    best = ZeroErrorFailure{m, *bad};
                }
                std::uint64_t cur = first_bad.load();
                while (idx < cur && !first_bad.compare_exchange_weak(cur, idx)) {
                }
                return;
            }
        }
    });
    if (best) return {false, best};
    return {true, std::nullopt};
}

}  // namespace

ZeroErrorResult verify_zero_error(const LinearCode& code, const Caps& caps) {
    const Instance& inst = code.instance;
    if (code.encoder.cols() != inst.total_len()) throw PreconditionError("encoder width does not match instance");
    if (code.encoder.modulus() != inst.p()) throw PreconditionError("encoder field does not match instance");
    if (code.decoders.size() != inst.t()) throw PreconditionError("one decoder per receiver required");
    std::vector<std::vector<std::size_t>> sides;
    for (std::size_t i = 0; i < inst.t(); ++i) {
        sides.push_back(side_info_columns(inst, i));
        const FieldMatrix& d = code.decoders[i];
        if (d.rows() != inst.msg_len(i) || d.cols() != code.length() + sides.back().size() || d.modulus() != inst.p()) {
            throw PreconditionError("decoder " + std::to_string(i + 1) + " has the wrong shape");
        }
    }
    const std::uint64_t n_msgs = space_size(inst.p(), inst.total_len(), caps.verification, "zero-error verification");
    return scan_tuples(inst, n_msgs, caps, [&](const SymbolVec& m) -> std::optional<std::size_t> {
        const SymbolVec c = code.encoder.apply(m);
        for (std::size_t i = 0; i < inst.t(); ++i) {
            SymbolVec obs = c;
            for (std::size_t col : sides[i]) obs.push_back(m[col]);
            const SymbolVec got = code.decoders[i].apply(obs);
            if (!std::equal(got.begin(), got.end(), m.begin() + static_cast<std::ptrdiff_t>(inst.offset(i)))) return i;
        }
        return std::nullopt;
    });
}

ZeroErrorResult verify_zero_error(const TableCode& code, const Caps& caps) {
    const Instance& inst = code.instance;
    const std::uint32_t p = inst.p();
    const std::uint64_t n_msgs = space_size(p, inst.total_len(), caps.verification, "zero-error verification");
    if (code.encoder.size() != n_msgs) throw PreconditionError("encoder table size does not match message space");
    if (code.decoders.size() != inst.t()) throw PreconditionError("one decoder per receiver required");
    const std::uint64_t n_codes = space_size(p, code.code_len, caps.verification, "code alphabet");
    std::vector<std::vector<std::size_t>> sides;
    std::vector<std::uint64_t> side_sizes;
    for (std::size_t i = 0; i < inst.t(); ++i) {
        sides.push_back(side_info_columns(inst, i));
        side_sizes.push_back(space_size(p, sides.back().size(), caps.verification, "side info"));
        if (code.decoders[i].size() != n_codes * side_sizes.back()) {
            throw PreconditionError("decoder table " + std::to_string(i + 1) + " has the wrong size");
        }
    }
    return scan_tuples(inst, n_msgs, caps, [&](const SymbolVec& m) -> std::optional<std::size_t> {
        const std::uint64_t c = code.encoder[pack_index(m, p)];
        for (std::size_t i = 0; i < inst.t(); ++i) {
            if (c >= n_codes) return i;
            std::uint64_t s = 0;
            for (std::size_t col : sides[i]) s = s * p + m[col];
            const std::int64_t got = code.decoders[i][c * side_sizes[i] + s];
            const std::span<const Symbol> mine(m.data() + inst.offset(i), inst.msg_len(i));
            if (got < 0 || static_cast<std::uint64_t>(got) != pack_index(mine, p)) return i;
        }
        return std::nullopt;
    });
}

// ---------------------------------------------------------------------------
// Fitting-matrix search

namespace {

// Row of the symbol-level fitting matrix: a 1 at `symbol`, free entries at
// the side-information columns of the symbol's owner, zeros elsewhere.
struct FittingRow {
    std::size_t symbol;
    std::vector<std::size_t> free_cols;
};

std::vector<FittingRow> fitting_rows(const Instance& inst) {
    std::vector<FittingRow> rows;
    for (std::size_t i = 0; i < inst.t(); ++i) {
        const auto side = side_info_columns(inst, i);
        for (std::size_t a = 0; a < inst.msg_len(i); ++a) rows.push_back({inst.offset(i) + a, side});
    }
    // Forced rows first so rank grows early and prunes more.
    std::stable_sort(rows.begin(), rows.end(),
                     [](const FittingRow& x, const FittingRow& y) { return x.free_cols.size() < y.free_cols.size(); });
    return rows;
}

// Incremental echelon basis; each stored row has zeros at the pivots of the
// rows inserted before it.
class PrimeBasis {
  public:
    using Vec = SymbolVec;

    PrimeBasis(std::uint32_t p, std::size_t n) : field_(p), n_(n) {}

    std::size_t rank() const { return rows_.size(); }

    Vec make_row(const FittingRow& r, std::uint64_t assignment) const {
        Vec v(n_, 0);
        v[r.symbol] = 1;
        for (std::size_t k = r.free_cols.size(); k-- > 0;) {
            v[r.free_cols[k]] = static_cast<Symbol>(assignment % field_.modulus());
            assignment /= field_.modulus();
        }
        return v;
    }

    /// Reduces v; returns true if it is independent (then it can be pushed).
    bool reduce(Vec& v) const {
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            const Symbol f = v[pivots_[k]];
            if (f == 0) continue;
            const Vec& b = rows_[k];
            for (std::size_t c = 0; c < n_; ++c) v[c] = field_.sub(v[c], field_.mul(f, b[c]));
        }
        return std::any_of(v.begin(), v.end(), [](Symbol s) { return s != 0; });
    }

    void push(Vec v) {
        std::size_t piv = 0;
        while (v[piv] == 0) ++piv;
        const Symbol inv = field_.inv(v[piv]);
        for (auto& s : v) s = field_.mul(s, inv);
        rows_.push_back(std::move(v));
        pivots_.push_back(piv);
    }

    void pop() {
        rows_.pop_back();
        pivots_.pop_back();
    }

    SymbolVec to_symbols(const Vec& v) const { return v; }

  private:
    Field field_;
    std::size_t n_;
    std::vector<Vec> rows_;
    std::vector<std::size_t> pivots_;
};

class BinaryBasis {
  public:
    using Vec = std::uint64_t;

    BinaryBasis(std::uint32_t, std::size_t n) : n_(n) {}

    std::size_t rank() const { return rows_.size(); }

    Vec make_row(const FittingRow& r, std::uint64_t assignment) const {
        Vec v = Vec{1} << r.symbol;
        for (std::size_t k = r.free_cols.size(); k-- > 0;) {
            if (assignment & 1u) v |= Vec{1} << r.free_cols[k];
            assignment >>= 1;
        }
        return v;
    }

    bool reduce(Vec& v) const {
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            if ((v >> pivots_[k]) & 1u) v ^= rows_[k];
        }
        return v != 0;
    }

    void push(Vec v) {
        rows_.push_back(v);
        pivots_.push_back(static_cast<std::size_t>(std::countr_zero(v)));
    }

    void pop() {
        rows_.pop_back();
        pivots_.pop_back();
    }

    SymbolVec to_symbols(Vec v) const {
        SymbolVec out(n_, 0);
        for (std::size_t c = 0; c < n_; ++c) out[c] = static_cast<Symbol>((v >> c) & 1u);
        return out;
    }

  private:
    std::size_t n_;
    std::vector<Vec> rows_;
    std::vector<std::size_t> pivots_;
};

template <class Basis>
class FittingSearch {
  public:
    FittingSearch(const Instance& inst, std::size_t target, const Caps& caps)
        : inst_(inst), rows_(fitting_rows(inst)), target_(target), caps_(caps) {}

    /// Full fitting matrix (rows indexed by symbol) of rank <= target, if any.
    std::optional<FieldMatrix> run() {
        const std::size_t n = inst_.total_len();
        Basis basis(inst_.p(), n);
        std::vector<typename Basis::Vec> chosen;
        // Forced prefix.
        std::size_t depth = 0;
        while (depth < rows_.size() && rows_[depth].free_cols.empty()) {
            if (!place(basis, chosen, depth, 0)) return std::nullopt;
            ++depth;
        }
        if (depth == rows_.size()) return to_matrix(basis, chosen);

        const std::uint64_t n_cand = space_size(inst_.p(), rows_[depth].free_cols.size(), caps_.search_nodes, "fitting row");
        std::atomic<std::uint64_t> best{std::numeric_limits<std::uint64_t>::max()};
        std::vector<std::optional<std::vector<typename Basis::Vec>>> found(n_cand);
        parallel_for(caps_.workers(), n_cand, [&](std::size_t cand) {
            if (cand > best.load()) return;
            Basis local = basis;
            auto picked = chosen;
            if (!place(local, picked, depth, cand)) return;
            if (dfs(local, picked, depth + 1, best, cand)) {
                found[cand] = std::move(picked);
                std::uint64_t cur = best.load();
                while (cand < cur && !best.compare_exchange_weak(cur, cand)) {
                }
            }
        });
        for (std::size_t cand = 0; cand < n_cand; ++cand) {
            if (found[cand]) return to_matrix(basis, *found[cand]);
        }
        return std::nullopt;
    }

    std::uint64_t nodes() const { return nodes_.load(); }

  private:
    bool place(Basis& basis, std::vector<typename Basis::Vec>& chosen, std::size_t depth, std::uint64_t cand) {
        if (nodes_.fetch_add(1, std::memory_order_relaxed) >= caps_.search_nodes) {
            throw CapExceeded("fitting-matrix search exceeded " + std::to_string(caps_.search_nodes) + " nodes");
        }
        typename Basis::Vec row = basis.make_row(rows_[depth], cand);
        typename Basis::Vec reduced = row;
        if (basis.reduce(reduced)) {
            if (basis.rank() + 1 > target_) return false;
            basis.push(reduced);
        }
        chosen.push_back(row);
        return true;
    }

    bool dfs(Basis& basis, std::vector<typename Basis::Vec>& chosen, std::size_t depth,
             const std::atomic<std::uint64_t>& best, std::uint64_t branch) {
        if (depth == rows_.size()) return true;
        if (branch > best.load(std::memory_order_relaxed)) return false;
        const std::uint64_t n_cand = space_size(inst_.p(), rows_[depth].free_cols.size(), caps_.search_nodes, "fitting row");
        for (std::uint64_t cand = 0; cand < n_cand; ++cand) {
            const std::size_t before = basis.rank();
            typename Basis::Vec row = basis.make_row(rows_[depth], cand);
            if (nodes_.fetch_add(1, std::memory_order_relaxed) >= caps_.search_nodes) {
                throw CapExceeded("fitting-matrix search exceeded " + std::to_string(caps_.search_nodes) + " nodes");
            }
            typename Basis::Vec reduced = row;
            const bool grows = basis.reduce(reduced);
            if (grows && before + 1 > target_) continue;
            if (grows) basis.push(reduced);
            chosen.push_back(row);
            if (dfs(basis, chosen, depth + 1, best, branch)) return true;
            chosen.pop_back();
            if (grows) basis.pop();
        }
        return false;
    }

    FieldMatrix to_matrix(const Basis& basis, const std::vector<typename Basis::Vec>& chosen) const {
        const std::size_t n = inst_.total_len();
        FieldMatrix a(n, n, inst_.p());
        for (std::size_t k = 0; k < chosen.size(); ++k) {
            const SymbolVec v = basis.to_symbols(chosen[k]);
            for (std::size_t c = 0; c < n; ++c) a.set(rows_[k].symbol, c, v[c]);
        }
        return a;
    }

    const Instance& inst_;
    std::vector<FittingRow> rows_;
    std::size_t target_;
    const Caps& caps_;
    std::atomic<std::uint64_t> nodes_{0};
};

FieldMatrix witness_from_fitting(const FieldMatrix& fitting, std::size_t len) {
    const RrefResult red = rref(fitting);
    FieldMatrix g(len, fitting.cols(), fitting.modulus());
    for (std::size_t r = 0; r < red.pivots.size(); ++r) {
        for (std::size_t c = 0; c < fitting.cols(); ++c) g.set(r, c, red.matrix.at(r, c));
    }
    return g;
}

}  // namespace

std::optional<LinearCode> find_linear_code(const Instance& inst, std::size_t len, const Caps& caps, SearchStats* stats) {
    const std::size_t n = inst.total_len();
    std::optional<FieldMatrix> fitting;
    std::uint64_t nodes = 0;
    if (n == 0) {
        fitting = FieldMatrix(0, 0, inst.p());
    } else if (inst.p() == 2 && n <= 64) {
        FittingSearch<BinaryBasis> search(inst, len, caps);
        fitting = search.run();
        nodes = search.nodes();
    } else {
        FittingSearch<PrimeBasis> search(inst, len, caps);
        fitting = search.run();
        nodes = search.nodes();
    }
    if (stats) {
        stats->nodes += nodes;
        stats->per_length.emplace_back(len, nodes);
    }
    if (!fitting) return std::nullopt;
    auto code = make_linear_code(inst, witness_from_fitting(*fitting, len));
    if (!code) throw DecodabilityLost("fitting-matrix witness is not decodable");
    return code;
}

std::optional<MinRankResult> min_rank(const Instance& inst, std::size_t max_len, const Caps& caps) {
    if (inst.t() > caps.min_rank_receivers) {
        throw CapExceeded("min_rank: t=" + std::to_string(inst.t()) + " exceeds the receiver cap of " +
                          std::to_string(caps.min_rank_receivers));
    }
    MinRankResult result;
    const std::size_t upper = std::min(max_len, inst.total_len());
    for (std::size_t l = 0; l <= upper; ++l) {
        if (auto code = find_linear_code(inst, l, caps, &result.stats)) {
            result.length = l;
            result.witness = std::move(*code);
            return result;
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Confusion-graph coloring

namespace {

std::vector<std::vector<std::uint32_t>> confusion_graph(const Instance& inst, std::uint64_t n_msgs) {
    const std::uint32_t p = inst.p();
    std::vector<std::vector<std::uint32_t>> adj(n_msgs);
    SymbolVec m(inst.total_len());
    for (std::size_t i = 0; i < inst.t(); ++i) {
        if (inst.msg_len(i) == 0) continue;
        const auto side = side_info_columns(inst, i);
        std::map<std::uint64_t, std::vector<std::pair<std::uint64_t, std::uint32_t>>> groups;
        for (std::uint64_t idx = 0; idx < n_msgs; ++idx) {
            unpack_index(idx, p, m);
            std::uint64_t key = 0;
            for (std::size_t col : side) key = key * p + m[col];
            const std::span<const Symbol> mine(m.data() + inst.offset(i), inst.msg_len(i));
            groups[key].emplace_back(pack_index(mine, p), static_cast<std::uint32_t>(idx));
        }
        for (const auto& [key, members] : groups) {
            for (std::size_t a = 0; a < members.size(); ++a) {
                for (std::size_t b = a + 1; b < members.size(); ++b) {
                    if (members[a].first != members[b].first) {
                        adj[members[a].second].push_back(members[b].second);
                        adj[members[b].second].push_back(members[a].second);
                    }
                }
            }
        }
    }
    for (auto& nb : adj) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    return adj;
}

class Colorer {
  public:
    Colorer(const std::vector<std::vector<std::uint32_t>>& adj, std::uint64_t k, std::uint64_t cap)
        : adj_(adj), k_(k), cap_(cap), color_(adj.size(), -1) {}

    bool run() { return step(0, 0); }
    std::uint64_t nodes() const { return nodes_; }
    const std::vector<std::int64_t>& colors() const { return color_; }

  private:
    // DSATUR branching: most saturated vertex first, new colors opened in order.
    bool step(std::size_t colored, std::int64_t used) {
        if (colored == adj_.size()) return true;
        if (++nodes_ > cap_) throw CapExceeded("coloring search exceeded " + std::to_string(cap_) + " nodes");
        std::size_t pick = adj_.size();
        std::size_t best_sat = 0;
        std::size_t best_deg = 0;
        std::vector<char> seen(static_cast<std::size_t>(std::min<std::uint64_t>(k_, adj_.size()) + 1));
        for (std::size_t v = 0; v < adj_.size(); ++v) {
            if (color_[v] >= 0) continue;
            std::fill(seen.begin(), seen.end(), 0);
            std::size_t sat = 0;
            for (std::uint32_t u : adj_[v]) {
                const std::int64_t c = color_[u];
                if (c >= 0 && !seen[static_cast<std::size_t>(c)]) {
                    seen[static_cast<std::size_t>(c)] = 1;
                    ++sat;
                }
            }
            if (pick == adj_.size() || sat > best_sat || (sat == best_sat && adj_[v].size() > best_deg)) {
                pick = v;
                best_sat = sat;
                best_deg = adj_[v].size();
            }
        }
        const std::int64_t limit = std::min<std::int64_t>(static_cast<std::int64_t>(k_), used + 1);
        for (std::int64_t c = 0; c < limit; ++c) {
            bool clash = false;
            for (std::uint32_t u : adj_[pick]) {
                if (color_[u] == c) {
                    clash = true;
                    break;
                }
            }
            if (clash) continue;
            color_[pick] = c;
            if (step(colored + 1, std::max(used, c + 1))) return true;
            color_[pick] = -1;
        }
        return false;
    }

    const std::vector<std::vector<std::uint32_t>>& adj_;
    std::uint64_t k_;
    std::uint64_t cap_;
    std::uint64_t nodes_ = 0;
    std::vector<std::int64_t> color_;
};

}  // namespace

std::optional<std::vector<std::uint64_t>> color_confusion_graph(const Instance& inst, std::uint64_t colors,
                                                                const Caps& caps, std::uint64_t* nodes) {
    const std::uint64_t n_msgs = space_size(inst.p(), inst.total_len(), caps.verification, "brute-force message space");
    if (n_msgs > std::numeric_limits<std::uint32_t>::max()) throw CapExceeded("message space too large for coloring");
    const auto adj = confusion_graph(inst, n_msgs);
    if (colors >= n_msgs) {
        std::vector<std::uint64_t> identity(n_msgs);
        for (std::uint64_t v = 0; v < n_msgs; ++v) identity[v] = v;
        return identity;
    }
    Colorer colorer(adj, colors, caps.search_nodes);
    const bool ok = colorer.run();
    if (nodes) *nodes += colorer.nodes();
    if (!ok) return std::nullopt;
    std::vector<std::uint64_t> out(n_msgs);
    for (std::uint64_t v = 0; v < n_msgs; ++v) out[v] = static_cast<std::uint64_t>(colorer.colors()[v]);
    return out;
}

BruteForceResult brute_force_optimal(const Instance& inst, const Caps& caps) {
    BruteForceResult result;
    for (std::size_t e = 0;; ++e) {
        const std::uint64_t k = space_size(inst.p(), e, std::numeric_limits<std::uint64_t>::max() / 2, "code alphabet");
        auto coloring = color_confusion_graph(inst, k, caps, &result.nodes);
        if (!coloring) continue;
        auto decoders = derive_table_decoders(inst, e, *coloring);
        if (!decoders) throw DecodabilityLost("coloring does not separate confusable tuples");
        result.exponent = e;
        result.witness = TableCode{inst, e, std::move(*coloring), std::move(*decoders)};
        return result;
    }
}

}  // namespace secidx
