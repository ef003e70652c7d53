#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "secidx/errors.hpp"
#include "secidx/secure.hpp"
#include "secidx/symbols.hpp"

namespace secidx {

namespace {

// Backtracking over encoder tables in message-major order. Code labels are
// interchangeable, so each new position may use at most one label beyond the
// largest label used so far.
class TableSearch {
  public:
    TableSearch(const Instance& inst, const KeyProfile& keys, std::size_t code_len, const Caps& caps)
        : inst_(inst), keys_(keys), code_len_(code_len), caps_(caps), layout_(BlockLayout::of(inst, keys)) {
        const std::uint32_t p = inst.p();
        n_kw_ = space_size(p, layout_.key_width(), caps.enumeration, "key/randomness space");
        n_msg_ = space_size(p, layout_.msg_width(), caps.enumeration, "message space");
        if (n_kw_ > caps.enumeration / n_msg_) throw CapExceeded("encoder table exceeds enumeration cap");
        n_code_ = space_size(p, code_len, caps.enumeration, "code alphabet");
        if (n_code_ > caps.enumeration / n_msg_) throw CapExceeded("secrecy counters exceed enumeration cap");

        SymbolVec kw_digits(layout_.key_width());
        SymbolVec m_digits(layout_.msg_width());
        for (std::size_t i = 0; i < inst.t(); ++i) {
            Receiver r;
            const std::size_t kpart_len = keys.l_k + keys.l_ki[i];
            std::size_t s_len = 0;
            for (std::size_t j : inst.side_info(i)) s_len += inst.msg_len(j);
            r.n_kpart = space_size(p, kpart_len, caps.enumeration, "receiver key space");
            r.n_side = space_size(p, s_len, caps.enumeration, "receiver side information");
            if (r.n_kpart * r.n_side > caps.enumeration / n_code_) throw CapExceeded("decoder table exceeds enumeration cap");
            for (std::uint64_t kw = 0; kw < n_kw_; ++kw) {
                unpack_index(kw, p, kw_digits);
                std::uint64_t idx = 0;
                for (std::size_t k = 0; k < keys.l_k; ++k) idx = idx * p + kw_digits[k];
                for (std::size_t k = 0; k < keys.l_ki[i]; ++k) idx = idx * p + kw_digits[layout_.private_offset(i) + k];
                r.kpart.push_back(idx);
            }
            const std::size_t base = layout_.key_width();
            for (std::uint64_t m = 0; m < n_msg_; ++m) {
                unpack_index(m, p, m_digits);
                std::uint64_t s = 0;
                for (std::size_t j : inst.side_info(i)) {
                    for (std::size_t k = 0; k < inst.msg_len(j); ++k) s = s * p + m_digits[layout_.msg_offset(j) + k - base];
                }
                std::uint64_t own = 0;
                for (std::size_t k = 0; k < inst.msg_len(i); ++k) own = own * p + m_digits[layout_.msg_offset(i) + k - base];
                r.side.push_back(s);
                r.own.push_back(static_cast<std::int64_t>(own));
            }
            r.value.assign(r.n_kpart * r.n_side * n_code_, -1);
            r.count.assign(r.value.size(), 0);
            receivers_.push_back(std::move(r));
        }
        hist_.assign(n_msg_ * n_code_, 0);
    }

    std::optional<EncoderTable> run(TableSearchStats* stats) {
        const std::uint64_t n = n_kw_ * n_msg_;
        std::vector<std::uint64_t> assign(n, 0);
        std::vector<std::uint64_t> next(n + 1, 0);
        std::vector<std::int64_t> max_label(n + 1, -1);
        std::uint64_t nodes = 0;
        std::int64_t pos = 0;
        bool found = n == 0;
        while (!found && pos >= 0) {
            const auto u = static_cast<std::uint64_t>(pos);
            const std::uint64_t m = u / n_kw_;
            const std::uint64_t kw = u % n_kw_;
            const std::uint64_t limit = std::min<std::uint64_t>(n_code_, static_cast<std::uint64_t>(max_label[u] + 2));
            bool advanced = false;
            for (std::uint64_t c = next[u]; c < limit; ++c) {
                if (!fits(m, kw, c)) continue;
                if (++nodes > caps_.search_nodes) {
                    if (stats) stats->nodes = nodes;
                    throw CapExceeded("table-code search exceeded " + std::to_string(caps_.search_nodes) + " nodes");
                }
                apply(m, kw, c, +1);
                assign[u] = c;
                next[u] = c + 1;
                max_label[u + 1] = std::max(max_label[u], static_cast<std::int64_t>(c));
                if (u + 1 == n) {
                    found = true;
                } else {
                    next[u + 1] = 0;
                    ++pos;
                }
                advanced = true;
                break;
            }
            if (found || advanced) continue;
            --pos;
            if (pos >= 0) {
                const auto b = static_cast<std::uint64_t>(pos);
                apply(b / n_kw_, b % n_kw_, assign[b], -1);
            }
        }
        if (stats) stats->nodes = nodes;
        if (!found) return std::nullopt;
        EncoderTable enc;
        enc.table.resize(n);
        for (std::uint64_t u = 0; u < n; ++u) enc.table[(u % n_kw_) * n_msg_ + u / n_kw_] = assign[u];
        return enc;
    }

  private:
    struct Receiver {
        std::uint64_t n_kpart = 1;
        std::uint64_t n_side = 1;
        std::vector<std::uint64_t> kpart;
        std::vector<std::uint64_t> side;
        std::vector<std::int64_t> own;
        std::vector<std::int64_t> value;
        std::vector<std::uint32_t> count;
    };

    std::uint64_t slot(const Receiver& r, std::uint64_t m, std::uint64_t kw, std::uint64_t c) const {
        return (r.kpart[kw] * r.n_side + r.side[m]) * n_code_ + c;
    }

    bool fits(std::uint64_t m, std::uint64_t kw, std::uint64_t c) const {
        if (m > 0 && hist_[m * n_code_ + c] >= hist_[c]) return false;
        for (const auto& r : receivers_) {
            const std::int64_t v = r.value[slot(r, m, kw, c)];
            if (v != -1 && v != r.own[m]) return false;
        }
        return true;
    }

    void apply(std::uint64_t m, std::uint64_t kw, std::uint64_t c, int dir) {
        hist_[m * n_code_ + c] += dir;
        for (auto& r : receivers_) {
            const std::uint64_t s = slot(r, m, kw, c);
            if (dir > 0) {
                if (r.count[s]++ == 0) r.value[s] = r.own[m];
            } else if (--r.count[s] == 0) {
                r.value[s] = -1;
            }
        }
    }

    const Instance& inst_;
    const KeyProfile& keys_;
    std::size_t code_len_;
    const Caps& caps_;
    BlockLayout layout_;
    std::uint64_t n_kw_ = 1;
    std::uint64_t n_msg_ = 1;
    std::uint64_t n_code_ = 1;
    std::vector<Receiver> receivers_;
    std::vector<std::uint32_t> hist_;
};

}  // namespace

std::optional<SecureCode> find_secure_table_code(const Instance& inst, const KeyProfile& keys, std::size_t code_len,
                                                 const Caps& caps, TableSearchStats* stats) {
    TableSearch search(inst, keys, code_len, caps);
    auto enc = search.run(stats);
    if (!enc) return std::nullopt;
    auto dec = derive_secure_table_decoders(inst, keys, code_len, *enc);
    if (!dec) throw DecodabilityLost("table search produced an undecodable encoder");
    SecureCode code{inst, keys, code_len, std::move(*enc), {}};
    for (auto& d : *dec) code.decoders.emplace_back(std::move(d));
    return code;
}

std::optional<SecureCode> find_secure_table_code_any_length(const Instance& inst, const KeyProfile& keys,
                                                            const Caps& caps, TableSearchStats* stats) {
    const BlockLayout layout = BlockLayout::of(inst, keys);
    const std::uint64_t inputs = space_size(inst.p(), layout.total(), caps.enumeration, "input space");
    std::size_t len = 0;
    for (std::uint64_t size = 1; size < inputs; size *= inst.p()) ++len;
    return find_secure_table_code(inst, keys, len, caps, stats);
}

}  // namespace secidx
