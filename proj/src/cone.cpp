#include "secidx/cone.hpp"

#include <numeric>

#include "secidx/errors.hpp"

namespace secidx {

const char* to_string(ConeVerdict v) {
    switch (v) {
        case ConeVerdict::InCone: return "in-cone";
        case ConeVerdict::OutOfCone: return "out-of-cone";
        case ConeVerdict::Undecided: return "undecided at cap";
    }
    return "?";
}

std::vector<std::optional<Rational>> normalized_rates(const RateVector& r) {
    std::vector<std::optional<Rational>> rho;
    for (std::size_t i = 0; i < r.msg.size(); ++i) {
        const Rational excess = r.msg[i] > r.private_keys[i] ? Rational(r.msg[i] - r.private_keys[i]) : Rational(0);
        if (r.key == 0) {
            rho.push_back(excess == 0 ? std::optional<Rational>(0) : std::nullopt);
        } else {
            rho.push_back(excess / r.key);
        }
    }
    return rho;
}

namespace {

// Side-information graph restricted to `members` (bitmask) has no cycle.
bool acyclic(const Instance& inst, std::uint64_t members) {
    std::uint64_t left = members;
    for (bool removed = true; left && removed;) {
        removed = false;
        for (std::size_t i = 0; i < inst.t(); ++i) {
            if (!(left >> i & 1)) continue;
            bool has_out = false;
            for (std::size_t j : inst.side_info(i)) has_out = has_out || (left >> j & 1);
            if (!has_out) {
                left &= ~(std::uint64_t{1} << i);
                removed = true;
            }
        }
    }
    return left == 0;
}

constexpr std::size_t kMaxSubsetReceivers = 16;

}  // namespace

ConeResult cone_membership(const Instance& inst, const RateVector& rates, std::size_t max_block, const Caps& caps) {
    if (rates.msg.size() != inst.t() || rates.private_keys.size() != inst.t()) {
        throw PreconditionError("rate vector needs 2t+1 entries for t = " + std::to_string(inst.t()));
    }
    ConeResult res;
    res.rho = normalized_rates(rates);
    for (std::size_t i = 0; i < inst.t(); ++i) {
        if (!res.rho[i]) {
            res.verdict = ConeVerdict::OutOfCone;
            res.reason = "receiver " + std::to_string(i + 1) + " needs r_i > r_ki with no common key";
            return res;
        }
    }
    if (inst.t() <= kMaxSubsetReceivers) {
        for (std::uint64_t s = 1; s < (std::uint64_t{1} << inst.t()); ++s) {
            Rational sum = 0;
            for (std::size_t i = 0; i < inst.t(); ++i) {
                if (s >> i & 1) sum += *res.rho[i];
            }
            if (sum > 1 && acyclic(inst, s)) {
                std::string set;
                for (std::size_t i = 0; i < inst.t(); ++i) {
                    if (s >> i & 1) set += (set.empty() ? "" : ",") + std::to_string(i + 1);
                }
                res.verdict = ConeVerdict::OutOfCone;
                res.reason = "normalized rates of receivers {" + set + "} (acyclic side information) sum to " +
                             format_rational(sum) + " > 1";
                return res;
            }
        }
    } else {
        for (std::size_t i = 0; i < inst.t(); ++i) {
            if (*res.rho[i] > 1) {
                res.verdict = ConeVerdict::OutOfCone;
                res.reason = "normalized rate of receiver " + std::to_string(i + 1) + " exceeds 1";
                return res;
            }
        }
    }

    BigInt denom = 1;
    for (const auto& r : res.rho) denom = boost::multiprecision::lcm(denom, boost::multiprecision::denominator(*r));
    if (denom > BigInt(64)) {
        res.reason = "common denominator " + denom.str() + " too large for witness search";
        return res;
    }
    const auto base = denom.convert_to<std::size_t>();
    try {
        for (std::size_t l = base; l == base || l <= max_block; l += base) {
            std::vector<std::size_t> len;
            for (const auto& r : res.rho) len.push_back(boost::multiprecision::numerator(Rational(*r * l)).convert_to<std::size_t>());
            if (auto code = find_linear_code(inst.with_msg_len(len), l, caps)) {
                res.verdict = ConeVerdict::InCone;
                res.block_length = l;
                res.msg_len = std::move(len);
                res.witness = std::move(code);
                res.reason = "linear witness found";
                return res;
            }
        }
        res.reason = "no linear witness up to block length " + std::to_string(std::max(base, max_block));
    } catch (const CapExceeded& e) {
        res.reason = std::string("search cap reached: ") + e.what();
    }
    return res;
}

}  // namespace secidx
