#include "secidx/secure.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "secidx/conventional.hpp"
#include "secidx/errors.hpp"
#include "secidx/symbols.hpp"

namespace secidx {

namespace {

constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max() / 4;

// Observation columns of receiver i inside the full layout, in observation
// order after the l code symbols: K, then K_i, then side-information symbols.
std::vector<std::size_t> observed_columns(const Instance& inst, const BlockLayout& layout, std::size_t i) {
    std::vector<std::size_t> cols;
    for (std::size_t k = 0; k < layout.l_k; ++k) cols.push_back(k);
    for (std::size_t k = 0; k < layout.l_ki[i]; ++k) cols.push_back(layout.private_offset(i) + k);
    for (std::size_t j : inst.side_info(i)) {
        for (std::size_t k = 0; k < inst.msg_len(j); ++k) cols.push_back(layout.msg_offset(j) + k);
    }
    return cols;
}

void check_shape(const SecureCode& code) {
    const Instance& inst = code.instance;
    code.keys.check_against(inst);
    const BlockLayout layout = code.layout();
    if (code.decoders.size() != inst.t()) throw PreconditionError("one decoder per receiver required");
    if (const auto* cm = std::get_if<CodeMatrix>(&code.encoder)) {
        if (!(cm->layout == layout)) throw PreconditionError("code matrix layout does not match instance and keys");
        if (cm->length() != code.code_len) throw PreconditionError("code matrix row count differs from code length");
        if (cm->modulus() != inst.p()) throw PreconditionError("code matrix field differs from instance field");
    }
    for (std::size_t i = 0; i < inst.t(); ++i) {
        const std::size_t obs_len = code.code_len + observed_columns(inst, layout, i).size();
        if (const auto* d = std::get_if<FieldMatrix>(&code.decoders[i])) {
            if (d->rows() != inst.msg_len(i) || d->cols() != obs_len || d->modulus() != inst.p()) {
                throw PreconditionError("decoder " + std::to_string(i + 1) + " has the wrong shape");
            }
        }
    }
}

// Evaluates C for every (kw, m) pair. Linear codes split C into a key part and
// a message part that are combined digit-wise.
class Engine {
  public:
    Engine(const SecureCode& code, const Caps& caps)
        : code_(code), inst_(code.instance), layout_(code.layout()), p_(inst_.p()) {
        check_shape(code);
        n_kw_ = space_size(p_, layout_.key_width(), caps.enumeration, "key/randomness space");
        n_msg_ = space_size(p_, layout_.msg_width(), caps.enumeration, "message space");
        if (n_kw_ > caps.enumeration / n_msg_) {
            throw CapExceeded("enumeration of " + std::to_string(n_kw_) + " x " + std::to_string(n_msg_) +
                              " input tuples exceeds cap " + std::to_string(caps.enumeration));
        }
        n_code_ = space_size(p_, code_.code_len, kUnbounded, "code alphabet");
        if (const auto* cm = std::get_if<CodeMatrix>(&code.encoder)) {
            binary_ = p_ == 2 && code.code_len <= 63;
            key_part_ = precompute(*cm, 0, layout_.key_width(), n_kw_);
            msg_part_ = precompute(*cm, layout_.key_width(), layout_.msg_width(), n_msg_);
        } else {
            const auto& t = std::get<EncoderTable>(code.encoder).table;
            if (t.size() != n_kw_ * n_msg_) throw PreconditionError("encoder table size does not match input space");
            for (std::uint64_t c : t) {
                if (c >= n_code_) throw PreconditionError("encoder table entry outside code alphabet");
            }
        }
        for (std::size_t i = 0; i < inst_.t(); ++i) {
            observed_.push_back(observed_columns(inst_, layout_, i));
            if (std::holds_alternative<std::vector<std::int64_t>>(code.decoders[i])) {
                const std::uint64_t n_obs = space_size(p_, code.code_len + observed_.back().size(), kUnbounded, "observation");
                if (std::get<std::vector<std::int64_t>>(code.decoders[i]).size() != n_obs) {
                    throw PreconditionError("decoder table " + std::to_string(i + 1) + " has the wrong size");
                }
            }
        }
    }

    std::uint64_t n_kw() const { return n_kw_; }
    std::uint64_t n_msg() const { return n_msg_; }
    std::uint64_t n_code() const { return n_code_; }
    const BlockLayout& layout() const { return layout_; }

    std::uint64_t code(std::uint64_t kw, std::uint64_t m) const {
        if (const auto* t = std::get_if<EncoderTable>(&code_.encoder)) return t->table[kw * n_msg_ + m];
        if (binary_) return key_part_[kw] ^ msg_part_[m];
        const std::size_t l = code_.code_len;
        std::uint64_t idx = 0;
        for (std::size_t r = 0; r < l; ++r) {
            idx = idx * p_ + (key_part_[kw * l + r] + msg_part_[m * l + r]) % p_;
        }
        return idx;
    }

    /// Whether receiver i decodes correctly. `full` holds [kw digits | m digits].
    bool decodes(std::size_t i, const SymbolVec& full, std::uint64_t c, const std::vector<SecureDecoder>& decoders,
                 SymbolVec& scratch) const {
        const std::size_t l = code_.code_len;
        const auto& cols = observed_[i];
        scratch.resize(l + cols.size());
        unpack_index(c, p_, std::span<Symbol>(scratch.data(), l));
        for (std::size_t k = 0; k < cols.size(); ++k) scratch[l + k] = full[cols[k]];
        const std::size_t off = layout_.msg_offset(i);
        const std::size_t len = inst_.msg_len(i);
        if (const auto* d = std::get_if<FieldMatrix>(&decoders[i])) {
            for (std::size_t a = 0; a < len; ++a) {
                std::uint64_t acc = 0;
                for (std::size_t k = 0; k < scratch.size(); ++k) acc += std::uint64_t{d->at(a, k)} * scratch[k];
                if (acc % p_ != full[off + a]) return false;
            }
            return true;
        }
        const auto& table = std::get<std::vector<std::int64_t>>(decoders[i]);
        const std::int64_t got = table[pack_index(scratch, p_)];
        return got >= 0 && static_cast<std::uint64_t>(got) == pack_index(std::span<const Symbol>(full.data() + off, len), p_);
    }

    void unpack_full(std::uint64_t kw, std::uint64_t m, SymbolVec& full) const {
        full.resize(layout_.total());
        unpack_index(kw, p_, std::span<Symbol>(full.data(), layout_.key_width()));
        unpack_index(m, p_, std::span<Symbol>(full.data() + layout_.key_width(), layout_.msg_width()));
    }

  private:
    std::vector<std::uint64_t> precompute(const CodeMatrix& cm, std::size_t first, std::size_t width, std::uint64_t n) const {
        const std::size_t l = code_.code_len;
        if (binary_) {
            std::vector<std::uint64_t> colmask(width, 0);
            for (std::size_t j = 0; j < width; ++j) {
                for (std::size_t r = 0; r < l; ++r) {
                    if (cm.pi.at(r, first + j)) colmask[j] |= std::uint64_t{1} << (l - 1 - r);
                }
            }
            std::vector<std::uint64_t> part(n, 0);
            for (std::uint64_t x = 1; x < n; ++x) {
                part[x] = part[x & (x - 1)] ^ colmask[width - 1 - static_cast<std::size_t>(std::countr_zero(x))];
            }
            return part;
        }
        std::vector<std::uint64_t> part(n * l, 0);
        SymbolVec digits(width);
        for (std::uint64_t x = 0; x < n; ++x) {
            unpack_index(x, p_, digits);
            for (std::size_t r = 0; r < l; ++r) {
                std::uint64_t acc = 0;
                for (std::size_t j = 0; j < width; ++j) acc += std::uint64_t{cm.pi.at(r, first + j)} * digits[j];
                part[x * l + r] = acc % p_;
            }
        }
        return part;
    }

    const SecureCode& code_;
    const Instance& inst_;
    BlockLayout layout_;
    std::uint32_t p_;
    std::uint64_t n_kw_ = 1;
    std::uint64_t n_msg_ = 1;
    std::uint64_t n_code_ = 1;
    bool binary_ = false;
    std::vector<std::uint64_t> key_part_;
    std::vector<std::uint64_t> msg_part_;
    std::vector<std::vector<std::size_t>> observed_;
};

std::uint64_t chunk_size(std::uint64_t n, const Caps& caps) {
    return std::max<std::uint64_t>(1, n / (std::uint64_t{caps.workers()} * 8 + 1));
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction helpers

std::optional<FieldMatrix> derive_secure_decoder(const Instance& inst, const CodeMatrix& cm, std::size_t i) {
    const BlockLayout& layout = cm.layout;
    if (layout.l_i != inst.msg_len()) throw PreconditionError("layout message lengths differ from the instance");
    const auto cols = observed_columns(inst, layout, i);
    FieldMatrix units(cols.size(), layout.total(), inst.p());
    for (std::size_t k = 0; k < cols.size(); ++k) units.set(k, cols[k], 1);
    const FieldMatrix system = cm.pi.vstack(units).transpose();
    FieldMatrix dec(inst.msg_len(i), system.cols(), inst.p());
    for (std::size_t a = 0; a < inst.msg_len(i); ++a) {
        SymbolVec target(layout.total(), 0);
        target[layout.msg_offset(i) + a] = 1;
        auto x = solve_affine(system, target);
        if (!x) return std::nullopt;
        for (std::size_t k = 0; k < x->size(); ++k) dec.set(a, k, (*x)[k]);
    }
    return dec;
}

std::optional<std::vector<FieldMatrix>> derive_secure_decoders(const Instance& inst, const CodeMatrix& cm) {
    std::vector<FieldMatrix> out;
    for (std::size_t i = 0; i < inst.t(); ++i) {
        auto dec = derive_secure_decoder(inst, cm, i);
        if (!dec) return std::nullopt;
        out.push_back(std::move(*dec));
    }
    return out;
}

std::optional<SecureCode> make_linear_secure_code(const Instance& inst, const CodeMatrix& cm) {
    auto dec = derive_secure_decoders(inst, cm);
    if (!dec) return std::nullopt;
    SecureCode code{inst, cm.layout.keys(), cm.length(), cm, {}};
    for (auto& d : *dec) code.decoders.emplace_back(std::move(d));
    return code;
}

SecureCode linear_code_with_partial_decoders(const Instance& inst, const CodeMatrix& cm) {
    SecureCode code{inst, cm.layout.keys(), cm.length(), cm, {}};
    for (std::size_t i = 0; i < inst.t(); ++i) {
        if (auto dec = derive_secure_decoder(inst, cm, i)) {
            code.decoders.emplace_back(std::move(*dec));
        } else {
            const std::size_t obs = cm.length() + observed_columns(inst, cm.layout, i).size();
            code.decoders.emplace_back(std::vector<std::int64_t>(space_size(inst.p(), obs, kUnbounded, "observation"), -1));
        }
    }
    return code;
}

std::optional<std::vector<std::vector<std::int64_t>>> derive_secure_table_decoders(const Instance& inst,
                                                                                     const KeyProfile& keys,
                                                                                     std::size_t code_len,
                                                                                     const EncoderTable& enc) {
    SecureCode probe{inst, keys, code_len, enc, {}};
    const BlockLayout layout = probe.layout();
    std::vector<std::vector<std::size_t>> cols;
    std::vector<std::vector<std::int64_t>> tables;
    for (std::size_t i = 0; i < inst.t(); ++i) {
        cols.push_back(observed_columns(inst, layout, i));
        tables.emplace_back(space_size(inst.p(), code_len + cols.back().size(), kUnbounded, "observation"), -1);
        probe.decoders.emplace_back(tables.back());  // placeholder of the right size for shape checks
    }
    Engine engine(probe, Caps{kUnbounded, kUnbounded, kUnbounded, 0, 1});
    SymbolVec full;
    SymbolVec obs;
    for (std::uint64_t m = 0; m < engine.n_msg(); ++m) {
        for (std::uint64_t kw = 0; kw < engine.n_kw(); ++kw) {
            engine.unpack_full(kw, m, full);
            const std::uint64_t c = engine.code(kw, m);
            for (std::size_t i = 0; i < inst.t(); ++i) {
                obs.assign(code_len, 0);
                unpack_index(c, inst.p(), obs);
                for (std::size_t col : cols[i]) obs.push_back(full[col]);
                const std::size_t off = layout.msg_offset(i);
                const auto want =
                    static_cast<std::int64_t>(pack_index(std::span<const Symbol>(full.data() + off, inst.msg_len(i)), inst.p()));
                auto& slot = tables[i][pack_index(obs, inst.p())];
                if (slot == -1) {
                    slot = want;
                } else if (slot != want) {
                    return std::nullopt;
                }
            }
        }
    }
    return tables;
}

SecureCode to_table_code(const SecureCode& code, const Caps& caps) {
    const Engine engine(code, caps);
    EncoderTable enc;
    enc.table.resize(engine.n_kw() * engine.n_msg());
    for (std::uint64_t kw = 0; kw < engine.n_kw(); ++kw) {
        for (std::uint64_t m = 0; m < engine.n_msg(); ++m) enc.table[kw * engine.n_msg() + m] = engine.code(kw, m);
    }
    SecureCode out{code.instance, code.keys, code.code_len, std::move(enc), {}};
    for (const auto& d : code.decoders) {
        if (const auto* mat = std::get_if<FieldMatrix>(&d)) {
            const std::uint64_t n_obs = space_size(code.instance.p(), mat->cols(), caps.enumeration, "observation");
            std::vector<std::int64_t> table(n_obs);
            SymbolVec obs(mat->cols());
            for (std::uint64_t o = 0; o < n_obs; ++o) {
                unpack_index(o, code.instance.p(), obs);
                table[o] = static_cast<std::int64_t>(pack_index(mat->apply(obs), code.instance.p()));
            }
            out.decoders.emplace_back(std::move(table));
        } else {
            out.decoders.push_back(d);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Perfect secrecy

PerfectSecrecyResult verify_perfect_secrecy(const SecureCode& code, const Caps& caps) {
    const Engine engine(code, caps);
    const std::uint32_t p = code.instance.p();
    auto codes_for = [&](std::uint64_t m, std::vector<std::uint64_t>& out) {
        out.resize(engine.n_kw());
        for (std::uint64_t kw = 0; kw < engine.n_kw(); ++kw) out[kw] = engine.code(kw, m);
        std::sort(out.begin(), out.end());
    };
    std::vector<std::uint64_t> reference;
    codes_for(0, reference);

    const std::uint64_t chunk = chunk_size(engine.n_msg(), caps);
    const std::uint64_t n_chunks = (engine.n_msg() + chunk - 1) / chunk;
    std::atomic<std::uint64_t> first_bad{std::numeric_limits<std::uint64_t>::max()};
    parallel_for(caps.workers(), n_chunks, [&](std::size_t ch) {
        std::vector<std::uint64_t> mine;
        const std::uint64_t hi = std::min(engine.n_msg(), (ch + 1) * chunk);
        for (std::uint64_t m = std::max<std::uint64_t>(1, ch * chunk); m < hi; ++m) {
            if (m >= first_bad.load(std::memory_order_relaxed)) return;
            codes_for(m, mine);
            if (mine != reference) {
                std::uint64_t cur = first_bad.load();
                while (m < cur && !first_bad.compare_exchange_weak(cur, m)) {
                }
                return;
            }
        }
    });
    const std::uint64_t bad = first_bad.load();
    if (bad == std::numeric_limits<std::uint64_t>::max()) return {true, std::nullopt};

    std::vector<std::uint64_t> other;
    codes_for(bad, other);
    // Smallest code value whose multiplicity differs.
    std::map<std::uint64_t, std::int64_t> diff;
    for (std::uint64_t c : reference) ++diff[c];
    for (std::uint64_t c : other) --diff[c];
    std::uint64_t c_bad = 0;
    for (const auto& [c, d] : diff) {
        if (d != 0) {
            c_bad = c;
            break;
        }
    }
    const std::size_t n_sym = code.layout().msg_width();
    return {false, SecrecyWitness{unpack_index(0, p, n_sym), unpack_index(bad, p, n_sym), unpack_index(c_bad, p, code.code_len)}};
}

// ---------------------------------------------------------------------------
// Decoding

namespace {

struct DecodeScan {
    std::uint64_t failures = 0;
    std::optional<DecodingFailure> first;
};

DecodeScan scan_decoding(const SecureCode& code, const std::vector<SecureDecoder>& decoders, const Caps& caps,
                         bool stop_at_first) {
    const Engine engine(code, caps);
    const std::size_t t = code.instance.t();
    const std::uint64_t chunk = chunk_size(engine.n_msg(), caps);
    const std::uint64_t n_chunks = (engine.n_msg() + chunk - 1) / chunk;
    std::atomic<std::uint64_t> failures{0};
    std::atomic<std::uint64_t> first_bad{std::numeric_limits<std::uint64_t>::max()};
    std::mutex mu;
    DecodeScan scan;
    std::uint64_t best_key = std::numeric_limits<std::uint64_t>::max();
    parallel_for(caps.workers(), n_chunks, [&](std::size_t ch) {
        SymbolVec full;
        SymbolVec scratch;
        std::uint64_t local = 0;
        const std::uint64_t hi = std::min(engine.n_msg(), (ch + 1) * chunk);
        for (std::uint64_t m = ch * chunk; m < hi; ++m) {
            if (stop_at_first && m > first_bad.load(std::memory_order_relaxed)) break;
            for (std::uint64_t kw = 0; kw < engine.n_kw(); ++kw) {
                engine.unpack_full(kw, m, full);
                const std::uint64_t c = engine.code(kw, m);
                for (std::size_t i = 0; i < t; ++i) {
                    if (engine.decodes(i, full, c, decoders, scratch)) continue;
                    ++local;
                    const std::uint64_t key = m * engine.n_kw() + kw;
                    {
                        std::lock_guard lock(mu);
                        if (key < best_key) {
                            best_key = key;
                            const std::size_t kwidth = engine.layout().key_width();
                            scan.first = DecodingFailure{SymbolVec(full.begin() + static_cast<std::ptrdiff_t>(kwidth), full.end()),
                                                         SymbolVec(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(kwidth)), i};
                        }
                    }
                    std::uint64_t cur = first_bad.load();
                    while (m < cur && !first_bad.compare_exchange_weak(cur, m)) {
                    }
                    break;
                }
                if (stop_at_first && local > 0) break;
            }
        }
        failures += local;
    });
    scan.failures = failures.load();
    return scan;
}

}  // namespace

DecodingResult verify_decoding(const SecureCode& code, const Caps& caps) {
    const DecodeScan scan = scan_decoding(code, code.decoders, caps, true);
    if (!scan.first) return {true, std::nullopt};
    return {false, scan.first};
}

Rational error_probability(const SecureCode& code, const std::vector<SecureDecoder>* decoders, const Caps& caps) {
    const std::vector<SecureDecoder>& use = decoders ? *decoders : code.decoders;
    if (use.size() != code.instance.t()) throw PreconditionError("one decoder per receiver required");
    SecureCode probe = code;
    probe.decoders = use;
    const DecodeScan scan = scan_decoding(probe, use, caps, false);
    const Engine engine(probe, caps);
    return Rational(scan.failures) / Rational(BigInt(engine.n_kw()) * engine.n_msg());
}

// ---------------------------------------------------------------------------
// Joint distribution and metrics

Rational JointDist::total_mass() const {
    Rational s = 0;
    for (const auto& e : entries) s += e.mass;
    return s;
}

JointDist joint_of(const SecureCode& code, const std::vector<Rational>& prior, const Caps& caps) {
    const Engine engine(code, caps);
    if (!prior.empty() && prior.size() != engine.n_msg()) throw PreconditionError("prior must give one mass per message tuple");
    if (!prior.empty()) {
        Rational s = 0;
        for (const auto& q : prior) {
            if (q < 0) throw PreconditionError("prior masses must be nonnegative");
            s += q;
        }
        if (s != 1) throw PreconditionError("prior masses must sum to 1");
    }
    JointDist joint{code.instance.p(), engine.layout().msg_width(), code.code_len, {}};
    const Rational uniform(1, BigInt(engine.n_msg()));
    std::vector<std::uint64_t> codes(engine.n_kw());
    for (std::uint64_t m = 0; m < engine.n_msg(); ++m) {
        const Rational pm = prior.empty() ? uniform : prior[m];
        if (pm == 0) continue;
        for (std::uint64_t kw = 0; kw < engine.n_kw(); ++kw) codes[kw] = engine.code(kw, m);
        std::sort(codes.begin(), codes.end());
        for (std::size_t k = 0; k < codes.size();) {
            std::size_t run = k;
            while (run < codes.size() && codes[run] == codes[k]) ++run;
            joint.entries.push_back({m, codes[k], pm * Rational(BigInt(run - k), BigInt(engine.n_kw()))});
            k = run;
        }
    }
    return joint;
}

namespace {

struct Marginals {
    std::map<std::uint64_t, Rational> m;
    std::map<std::uint64_t, Rational> c;
};

Marginals marginals_of(const JointDist& joint) {
    Marginals out;
    for (const auto& e : joint.entries) {
        out.m[e.m] += e.mass;
        out.c[e.c] += e.mass;
    }
    return out;
}

}  // namespace

Rational total_variation(const JointDist& joint) {
    const Marginals marg = marginals_of(joint);
    Rational on_support = 0;
    Rational product_on_support = 0;
    for (const auto& e : joint.entries) {
        const Rational prod = marg.m.at(e.m) * marg.c.at(e.c);
        const Rational d = e.mass - prod;
        on_support += d < 0 ? Rational(-d) : d;
        product_on_support += prod;
    }
    // Pairs off the support contribute p(m)p(c), which sums to 1 minus the on-support part.
    Rational total_product = 0;
    for (const auto& [m, pm] : marg.m) {
        for (const auto& [c, pc] : marg.c) total_product += pm * pc;
    }
    return (on_support + total_product - product_on_support) / 2;
}

MutualInformation mutual_information(const JointDist& joint) {
    const Marginals marg = marginals_of(joint);
    constexpr double u = std::numeric_limits<double>::epsilon();
    double sum = 0.0;
    double abs_sum = 0.0;
    double term_err = 0.0;
    std::size_t n_terms = 0;
    for (const auto& e : joint.entries) {
        if (e.mass == 0) continue;
        const Rational ratio = e.mass / (marg.m.at(e.m) * marg.c.at(e.c));
        if (ratio == 1) continue;  // exact zero term
        const double pd = e.mass.convert_to<double>();
        const double lg = std::log2(ratio.convert_to<double>());
        const double term = pd * lg;
        sum += term;
        abs_sum += std::fabs(term);
        // conversion of p and ratio, log2 rounding, product rounding
        term_err += pd * (2.0 * u * std::fabs(lg) + 2.0 * u / std::log(2.0)) + u * std::fabs(term);
        ++n_terms;
    }
    const double sum_err = static_cast<double>(n_terms) * u * abs_sum;
    return {sum, 2.0 * (term_err + sum_err)};
}

double message_entropy(const JointDist& joint) {
    const Marginals marg = marginals_of(joint);
    double h = 0.0;
    for (const auto& [m, pm] : marg.m) {
        if (pm == 0) continue;
        const double pd = pm.convert_to<double>();
        h -= pd * std::log2(pd);
    }
    return h;
}

SecrecyReport secrecy_report(const SecureCode& code, const Caps& caps) {
    SecrecyReport report;
    report.perfect = verify_perfect_secrecy(code, caps);
    const JointDist joint = joint_of(code, {}, caps);
    report.tv = total_variation(joint);
    report.mi = mutual_information(joint);
    report.h_m = message_entropy(joint);
    report.perr = error_probability(code, nullptr, caps);
    report.decoding = verify_decoding(code, caps);
    return report;
}

json secrecy_report_to_json(const SecrecyReport& report) {
    json witness = nullptr;
    if (report.perfect.witness) {
        witness = json{{"m", report.perfect.witness->m},
                       {"m_prime", report.perfect.witness->m_prime},
                       {"c", report.perfect.witness->c}};
    }
    json decode_fail = nullptr;
    if (report.decoding.failure) {
        decode_fail = json{{"m", report.decoding.failure->m},
                           {"keys", report.decoding.failure->key_inputs},
                           {"receiver", report.decoding.failure->receiver + 1}};
    }
    return json{{"perfect", report.perfect.pass},
                {"witness", witness},
                {"tv", format_rational(report.tv)},
                {"mi_bits", report.mi.bits},
                {"mi_err", report.mi.error_bound},
                {"h_m_bits", report.h_m},
                {"perr", format_rational(report.perr)},
                {"decodes", report.decoding.pass},
                {"decode_failure", decode_fail}};
}

}  // namespace secidx
