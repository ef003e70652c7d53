#include "secidx/gotp.hpp"

#include <algorithm>
#include <numeric>

#include "secidx/errors.hpp"
#include "secidx/symbols.hpp"

namespace secidx {

std::vector<std::size_t> reduced_lengths(const Instance& inst, const KeyProfile& keys) {
    keys.check_against(inst);
    std::vector<std::size_t> out(inst.t());
    for (std::size_t i = 0; i < inst.t(); ++i) {
        out[i] = inst.msg_len(i) > keys.l_ki[i] ? inst.msg_len(i) - keys.l_ki[i] : 0;
    }
    return out;
}

namespace {

std::size_t padded_prefix(const Instance& inst, const KeyProfile& keys, std::size_t i) {
    return std::min(inst.msg_len(i), keys.l_ki[i]);
}

}  // namespace

Feasibility gotp_feasible(const Instance& inst, const KeyProfile& keys, std::optional<std::size_t> max_public_len,
                          const Caps& caps) {
    keys.check_against(inst);
    if (keys.l_w != 0) throw PreconditionError("the one-time-pad construction uses no encoder randomness (l_w must be 0)");
    Feasibility f;
    f.reduced = inst.with_msg_len(reduced_lengths(inst, keys));
    auto best = min_rank(f.reduced, keys.l_k, caps);
    if (!best) {
        f.reason = "l_k < required code length: no linear code of length <= " + std::to_string(keys.l_k) +
                   " exists for reduced message lengths";
        return f;
    }
    std::size_t private_rows = 0;
    for (std::size_t i = 0; i < inst.t(); ++i) private_rows += padded_prefix(inst, keys, i);
    f.public_len = best->length + private_rows;
    f.inner = std::move(best->witness);
    if (max_public_len && f.public_len > *max_public_len) {
        f.reason = "public length " + std::to_string(f.public_len) + " exceeds l = " + std::to_string(*max_public_len);
        return f;
    }
    f.feasible = true;
    return f;
}

SecureCode construct_gotp(const Instance& inst, const KeyProfile& keys, const LinearCode& inner,
                          std::vector<std::string>* warnings) {
    keys.check_against(inst);
    if (keys.l_w != 0) throw PreconditionError("the one-time-pad construction uses no encoder randomness (l_w must be 0)");
    const auto reduced = reduced_lengths(inst, keys);
    if (inner.instance.p() != inst.p() || inner.instance.side_info() != inst.side_info() ||
        inner.instance.msg_len() != reduced) {
        throw PreconditionError("inner code must be for the instance with reduced message lengths");
    }
    if (inner.length() > keys.l_k) {
        throw PreconditionError("inner code length " + std::to_string(inner.length()) + " exceeds l_k = " +
                                std::to_string(keys.l_k));
    }
    if (!verify_zero_error(inner).pass) throw PreconditionError("inner code is not zero-error");

    for (std::size_t i = 0; i < inst.t(); ++i) {
        if (keys.l_ki[i] > inst.msg_len(i) && warnings) {
            warnings->push_back("receiver " + std::to_string(i + 1) + ": private key has " + std::to_string(keys.l_ki[i]) +
                                " symbols but the message only " + std::to_string(inst.msg_len(i)) +
                                "; the excess is unused");
        }
    }

    const BlockLayout layout = BlockLayout::of(inst, keys);
    std::size_t rows = inner.length();
    for (std::size_t i = 0; i < inst.t(); ++i) rows += padded_prefix(inst, keys, i);
    FieldMatrix pi(rows, layout.total(), inst.p());

    for (std::size_t r = 0; r < inner.length(); ++r) {
        pi.set(r, r, 1);
        for (std::size_t j = 0; j < inst.t(); ++j) {
            const std::size_t skip = padded_prefix(inst, keys, j);
            for (std::size_t a = 0; a < reduced[j]; ++a) {
                pi.set(r, layout.msg_offset(j) + skip + a, inner.encoder.at(r, inner.instance.offset(j) + a));
            }
        }
    }
    std::size_t r = inner.length();
    for (std::size_t i = 0; i < inst.t(); ++i) {
        for (std::size_t a = 0; a < padded_prefix(inst, keys, i); ++a, ++r) {
            pi.set(r, layout.private_offset(i) + a, 1);
            pi.set(r, layout.msg_offset(i) + a, 1);
        }
    }
    auto code = make_linear_secure_code(inst, CodeMatrix(std::move(pi), layout));
    if (!code) throw DecodabilityLost("constructed code is not decodable");
    return std::move(*code);
}

SecureCode pad_conventional(const LinearCode& conv, std::size_t l_k) {
    const Instance& inst = conv.instance;
    if (l_k < conv.length()) {
        throw PreconditionError("key of " + std::to_string(l_k) + " symbols is shorter than the code length " +
                                std::to_string(conv.length()));
    }
    const KeyProfile keys{l_k, std::vector<std::size_t>(inst.t(), 0), 0};
    const BlockLayout layout = BlockLayout::of(inst, keys);
    FieldMatrix pi(conv.length(), layout.total(), inst.p());
    for (std::size_t r = 0; r < conv.length(); ++r) {
        pi.set(r, r, 1);
        for (std::size_t c = 0; c < inst.total_len(); ++c) pi.set(r, layout.key_width() + c, conv.encoder.at(r, c));
    }
    auto code = make_linear_secure_code(inst, CodeMatrix(std::move(pi), layout));
    if (!code) throw PreconditionError("conventional code is not decodable");
    return std::move(*code);
}

namespace {

SecureCode expand_linear(const SecureCode& code, const std::vector<std::size_t>& extra, const Instance& inst,
                         const KeyProfile& keys) {
    const BlockLayout old = code.layout();
    const BlockLayout layout = BlockLayout::of(inst, keys);
    const std::size_t added = std::accumulate(extra.begin(), extra.end(), std::size_t{0});
    const FieldMatrix& src = code.matrix().pi;
    FieldMatrix pi(src.rows() + added, layout.total(), inst.p());
    for (std::size_t r = 0; r < src.rows(); ++r) {
        for (std::size_t k = 0; k < old.l_k; ++k) pi.set(r, k, src.at(r, k));
        for (std::size_t k = 0; k < old.l_w; ++k) pi.set(r, layout.randomness_offset() + k, src.at(r, old.randomness_offset() + k));
        for (std::size_t i = 0; i < inst.t(); ++i) {
            for (std::size_t a = 0; a < old.l_i[i]; ++a) {
                pi.set(r, layout.msg_offset(i) + extra[i] + a, src.at(r, old.msg_offset(i) + a));
            }
        }
    }
    std::size_t r = src.rows();
    for (std::size_t i = 0; i < inst.t(); ++i) {
        for (std::size_t a = 0; a < extra[i]; ++a, ++r) {
            pi.set(r, layout.private_offset(i) + a, 1);
            pi.set(r, layout.msg_offset(i) + a, 1);
        }
    }
    auto out = make_linear_secure_code(inst, CodeMatrix(std::move(pi), layout));
    if (!out) throw DecodabilityLost("expanded code is not decodable");
    return std::move(*out);
}

SecureCode expand_table(const SecureCode& code, const std::vector<std::size_t>& extra, const Instance& inst,
                        const KeyProfile& keys, const Caps& caps) {
    const std::uint32_t p = inst.p();
    const BlockLayout old = code.layout();
    const BlockLayout layout = BlockLayout::of(inst, keys);
    const std::size_t added = std::accumulate(extra.begin(), extra.end(), std::size_t{0});
    const std::uint64_t n_kw = space_size(p, layout.key_width(), caps.enumeration, "key/randomness space");
    const std::uint64_t n_msg = space_size(p, layout.msg_width(), caps.enumeration, "message space");
    if (n_kw > caps.enumeration / n_msg) throw CapExceeded("expanded encoder table exceeds enumeration cap");
    const std::uint64_t n_pad = space_size(p, added, caps.enumeration, "pad space");
    const std::uint64_t old_n_msg = space_size(p, old.msg_width(), caps.enumeration, "message space");
    const auto& table = std::get<EncoderTable>(code.encoder).table;

    EncoderTable enc;
    enc.table.resize(n_kw * n_msg);
    SymbolVec kw_d(layout.key_width());
    SymbolVec m_d(layout.msg_width());
    SymbolVec old_kw(old.key_width());
    SymbolVec old_m(old.msg_width());
    SymbolVec pad(added);
    const std::size_t base = layout.key_width();
    for (std::uint64_t kw = 0; kw < n_kw; ++kw) {
        unpack_index(kw, p, kw_d);
        for (std::size_t k = 0; k < old.l_k; ++k) old_kw[k] = kw_d[k];
        for (std::size_t k = 0; k < old.l_w; ++k) old_kw[old.randomness_offset() + k] = kw_d[layout.randomness_offset() + k];
        const std::uint64_t okw = pack_index(old_kw, p);
        for (std::uint64_t m = 0; m < n_msg; ++m) {
            unpack_index(m, p, m_d);
            std::size_t o = 0;
            std::size_t q = 0;
            for (std::size_t i = 0; i < inst.t(); ++i) {
                const std::size_t off = layout.msg_offset(i) - base;
                for (std::size_t a = 0; a < extra[i]; ++a, ++q) {
                    pad[q] = (m_d[off + a] + kw_d[layout.private_offset(i) + a]) % p;
                }
                for (std::size_t a = 0; a < old.l_i[i]; ++a) old_m[o++] = m_d[off + extra[i] + a];
            }
            enc.table[kw * n_msg + m] = table[okw * old_n_msg + pack_index(old_m, p)] * n_pad + pack_index(pad, p);
        }
    }
    const std::size_t len = code.code_len + added;
    auto dec = derive_secure_table_decoders(inst, keys, len, enc);
    if (!dec) throw DecodabilityLost("expanded code is not decodable");
    SecureCode out{inst, keys, len, std::move(enc), {}};
    for (auto& d : *dec) out.decoders.emplace_back(std::move(d));
    return out;
}

}  // namespace

SecureCode expand_with_private_keys(const SecureCode& code, const std::vector<std::size_t>& extra, const Caps& caps) {
    const Instance& inst = code.instance;
    if (extra.size() != inst.t()) throw PreconditionError("extra needs one length per receiver");
    if (code.keys.private_total() != 0) throw PreconditionError("code must not use private keys");
    std::vector<std::size_t> len = inst.msg_len();
    for (std::size_t i = 0; i < len.size(); ++i) len[i] += extra[i];
    const Instance grown = inst.with_msg_len(len);
    const KeyProfile keys{code.keys.l_k, extra, code.keys.l_w};
    if (code.is_linear()) return expand_linear(code, extra, grown, keys);
    return expand_table(code, extra, grown, keys, caps);
}

}  // namespace secidx
