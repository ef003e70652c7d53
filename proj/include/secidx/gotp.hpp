#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "secidx/conventional.hpp"
#include "secidx/limits.hpp"
#include "secidx/problem.hpp"
#include "secidx/secure.hpp"

namespace secidx {

/// [l_i - l_ki]_+ per receiver: what is left of each message after the
/// private-key pad covers its prefix.
std::vector<std::size_t> reduced_lengths(const Instance& inst, const KeyProfile& keys);

struct Feasibility {
    bool feasible = false;
    std::string reason;
    /// Instance with the reduced message lengths.
    Instance reduced;
    /// Shortest linear conventional code for `reduced`, when one fits in l_k.
    std::optional<LinearCode> inner;
    /// Public length the construction would use: l' + sum min(l_i, l_ki).
    std::size_t public_len = 0;
};

/// Whether the one-time-pad construction applies: the reduced instance must
/// have a linear code of length at most l_k. With `max_public_len`, the
/// resulting public length must also fit. Requires l_w = 0.
Feasibility gotp_feasible(const Instance& inst, const KeyProfile& keys,
                          std::optional<std::size_t> max_public_len = std::nullopt,
                          const Caps& caps = Caps::from_env());

/// Pads the first min(l_i, l_ki) symbols of each M_i with K_i and sends the
/// inner code of the remaining symbols padded with the first l' symbols of K.
/// Rows: inner-code rows first, then the private rows receiver by receiver.
/// Key symbols the construction does not use stay as zero columns.
/// Warnings (excess private key symbols) are appended to `warnings`.
SecureCode construct_gotp(const Instance& inst, const KeyProfile& keys, const LinearCode& inner,
                          std::vector<std::string>* warnings = nullptr);

/// Grows every message by extra[i] symbols, placed before the existing ones,
/// and sends each new symbol padded with a fresh private key symbol. The
/// input must have no private keys. Works for linear and table encoders.
SecureCode expand_with_private_keys(const SecureCode& code, const std::vector<std::size_t>& extra,
                                    const Caps& caps = Caps::from_env());

/// C = G M + K: a conventional code padded with the common key. Key symbols
/// beyond the code length stay unused. Throws PreconditionError when l_k is
/// shorter than the code.
SecureCode pad_conventional(const LinearCode& conv, std::size_t l_k);

}  // namespace secidx
