#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "secidx/code_matrix.hpp"
#include "secidx/gf.hpp"
#include "secidx/limits.hpp"
#include "secidx/problem.hpp"
#include "secidx/rational.hpp"

namespace secidx {

/// Explicit encoder: table[kw * |M| + m] is the code index, where kw indexes
/// the key part [K | K_1..K_t | W] and m the message tuple [M_1..M_t].
struct EncoderTable {
    std::vector<std::uint64_t> table;
};

/// Receiver i observes [C | K | K_i | S_i symbols]. A linear decoder is an
/// l_i x |obs| matrix; a table decoder maps the observation index to the
/// index of M_i (-1 where undefined). Neither form can read K_j (j != i) or W.
using SecureDecoder = std::variant<FieldMatrix, std::vector<std::int64_t>>;
using SecureEncoder = std::variant<CodeMatrix, EncoderTable>;

/// A secure index code: encoder over (M, K, K_i, W), one decoder per receiver.
struct SecureCode {
    Instance instance;
    KeyProfile keys;
    std::size_t code_len = 0;
    SecureEncoder encoder;
    std::vector<SecureDecoder> decoders;

    bool is_linear() const noexcept { return std::holds_alternative<CodeMatrix>(encoder); }
    const CodeMatrix& matrix() const { return std::get<CodeMatrix>(encoder); }
    BlockLayout layout() const { return BlockLayout::of(instance, keys); }
    RateVector rate() const { return rate_of(instance, keys, code_len); }
};

/// Linear decoder of receiver i; nullopt when it cannot decode.
std::optional<FieldMatrix> derive_secure_decoder(const Instance& inst, const CodeMatrix& cm, std::size_t i);

/// Linear decoders from the stacked system (code rows, K, K_i and side-info
/// unit rows); nullopt when some receiver cannot decode.
std::optional<std::vector<FieldMatrix>> derive_secure_decoders(const Instance& inst, const CodeMatrix& cm);

/// Linear secure code with derived decoders; nullopt when not decodable.
/// The layout must agree with the instance's message lengths.
std::optional<SecureCode> make_linear_secure_code(const Instance& inst, const CodeMatrix& cm);

/// Linear code whose undecodable receivers get an all-failure decoder table,
/// so that decoding checks can report them.
SecureCode linear_code_with_partial_decoders(const Instance& inst, const CodeMatrix& cm);

/// Decoder tables implied by an encoder table; nullopt when some receiver
/// sees the same observation for two different values of its message.
std::optional<std::vector<std::vector<std::int64_t>>> derive_secure_table_decoders(const Instance& inst,
                                                                                     const KeyProfile& keys,
                                                                                     std::size_t code_len,
                                                                                     const EncoderTable& enc);

/// Table-encoded copy of a linear code (same decoders converted to tables).
SecureCode to_table_code(const SecureCode& code, const Caps& caps = Caps::from_env());

// ---------------------------------------------------------------------------
// Verification

struct SecrecyWitness {
    SymbolVec m;
    SymbolVec m_prime;
    SymbolVec c;
};

struct PerfectSecrecyResult {
    bool pass = true;
    std::optional<SecrecyWitness> witness;
};

/// Exact check that p(C = c | M = m) does not depend on m, with K, K_i and W
/// uniform. The witness is the lexicographically first (m, m', c) that differs.
PerfectSecrecyResult verify_perfect_secrecy(const SecureCode& code, const Caps& caps = Caps::from_env());

struct DecodingFailure {
    SymbolVec m;
    SymbolVec key_inputs;  // [K | K_1..K_t | W]
    std::size_t receiver = 0;
};

struct DecodingResult {
    bool pass = true;
    std::optional<DecodingFailure> failure;
};

/// Every decoder recovers its message on every (M, K, K_i, W) assignment.
DecodingResult verify_decoding(const SecureCode& code, const Caps& caps = Caps::from_env());

/// Exact joint law of (M, C). Entries are sorted by (m, c).
struct JointDist {
    std::uint32_t p = 2;
    std::size_t msg_symbols = 0;
    std::size_t code_symbols = 0;

    struct Entry {
        std::uint64_t m;
        std::uint64_t c;
        Rational mass;
    };
    std::vector<Entry> entries;

    Rational total_mass() const;
};

/// Joint of (M, C) with keys and W uniform. `prior` gives p(M = m) per tuple
/// index (uniform when empty).
JointDist joint_of(const SecureCode& code, const std::vector<Rational>& prior = {}, const Caps& caps = Caps::from_env());

/// (1/2) sum |p(m,c) - p(m)p(c)|, exact.
Rational total_variation(const JointDist& joint);

struct MutualInformation {
    double bits = 0.0;
    /// Absolute bound on the floating-point error of `bits`.
    double error_bound = 0.0;
};

/// I(M;C) in bits. Ratios p(m,c)/(p(m)p(c)) are formed exactly; only the
/// logarithm and the final sum are floating point.
MutualInformation mutual_information(const JointDist& joint);

/// H(M) in bits under the joint's message marginal.
double message_entropy(const JointDist& joint);

/// Probability over uniform (M, K, K_i, W) that at least one receiver
/// misdecodes. `decoders` overrides the code's own decoders when given.
Rational error_probability(const SecureCode& code, const std::vector<SecureDecoder>* decoders = nullptr,
                           const Caps& caps = Caps::from_env());

struct SecrecyReport {
    PerfectSecrecyResult perfect;
    Rational tv;
    MutualInformation mi;
    double h_m = 0.0;
    Rational perr;
    DecodingResult decoding;
};

SecrecyReport secrecy_report(const SecureCode& code, const Caps& caps = Caps::from_env());
json secrecy_report_to_json(const SecrecyReport& report);

// ---------------------------------------------------------------------------
// Exhaustive search over table codes

struct TableSearchStats {
    std::uint64_t nodes = 0;
};

/// A zero-error perfectly secure table code with |C| = p^code_len, or nullopt
/// after exhausting every encoder (up to relabeling of code symbols).
std::optional<SecureCode> find_secure_table_code(const Instance& inst, const KeyProfile& keys, std::size_t code_len,
                                                 const Caps& caps = Caps::from_env(), TableSearchStats* stats = nullptr);

/// Same search with the code alphabet large enough to hold one symbol per
/// input tuple, which covers every table code of any length up to relabeling.
std::optional<SecureCode> find_secure_table_code_any_length(const Instance& inst, const KeyProfile& keys,
                                                            const Caps& caps = Caps::from_env(),
                                                            TableSearchStats* stats = nullptr);

}  // namespace secidx
