#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "secidx/conventional.hpp"
#include "secidx/limits.hpp"
#include "secidx/problem.hpp"

namespace secidx {

enum class ConeVerdict { InCone, OutOfCone, Undecided };
const char* to_string(ConeVerdict v);

/// rho_i = [r_i - r_ki]_+ / r_k, with c/0 = 0 for c = 0 and infinite
/// otherwise (nullopt encodes infinity).
std::vector<std::optional<Rational>> normalized_rates(const RateVector& r);

struct ConeResult {
    ConeVerdict verdict = ConeVerdict::Undecided;
    std::vector<std::optional<Rational>> rho;
    std::string reason;
    /// Block length and message lengths of the witness (in-cone only).
    std::size_t block_length = 0;
    std::vector<std::size_t> msg_len;
    std::optional<LinearCode> witness;
};

/// Whether rho lies in the conventional rate region, decided at desk scale.
/// Out-of-cone when rho is infinite somewhere or its sum over some receiver
/// set with acyclic side information exceeds 1 (such messages must all fit
/// in the code). In-cone when a linear code carrying rho_i * l symbols of
/// each message in l code symbols exists for l a multiple of the common
/// denominator, tried up to `max_block` (at least one multiple). Otherwise,
/// or when a search hits its cap, undecided.
ConeResult cone_membership(const Instance& inst, const RateVector& rates, std::size_t max_block = 12,
                           const Caps& caps = Caps::from_env());

}  // namespace secidx
