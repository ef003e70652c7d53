#pragma once

#include <cstddef>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "secidx/rational.hpp"

namespace secidx {

using json = nlohmann::json;

/// A unicast index coding problem: receiver i wants message i and knows the
/// messages listed in side_info(i). Indices are 0-based; files use 1-based.
class Instance {
  public:
    Instance() = default;
    /// Validates and normalizes (sorts, removes duplicate side-info entries).
    /// Throws ParseError on self-loops, out-of-range indices or a bad field.
    Instance(std::uint32_t p, std::vector<std::vector<std::size_t>> side_info, std::vector<std::size_t> msg_len);

    std::uint32_t p() const noexcept { return p_; }
    std::size_t t() const noexcept { return msg_len_.size(); }
    const std::vector<std::size_t>& side_info(std::size_t i) const { return side_info_.at(i); }
    const std::vector<std::vector<std::size_t>>& side_info() const noexcept { return side_info_; }
    const std::vector<std::size_t>& msg_len() const noexcept { return msg_len_; }
    std::size_t msg_len(std::size_t i) const { return msg_len_.at(i); }
    bool knows(std::size_t receiver, std::size_t message) const;

    /// Sum of message lengths in symbols.
    std::size_t total_len() const;
    /// Offset of message i inside the concatenated message vector.
    std::size_t offset(std::size_t i) const;

    /// Same side information, new message lengths.
    Instance with_msg_len(std::vector<std::size_t> msg_len) const;

    friend bool operator==(const Instance&, const Instance&) = default;

  private:
    std::uint32_t p_ = 2;
    std::vector<std::vector<std::size_t>> side_info_;
    std::vector<std::size_t> msg_len_;
};

/// Key and encoder-randomness lengths, in field symbols.
struct KeyProfile {
    std::size_t l_k = 0;
    std::vector<std::size_t> l_ki;
    std::size_t l_w = 0;

    static KeyProfile none(std::size_t t) { return {0, std::vector<std::size_t>(t, 0), 0}; }

    std::size_t private_total() const;
    /// Throws PreconditionError when l_ki does not have one entry per receiver.
    void check_against(const Instance& inst) const;

    friend bool operator==(const KeyProfile&, const KeyProfile&) = default;
};

/// (r_1..r_t, r_k, r_k1..r_kt) as exact rationals.
struct RateVector {
    std::vector<Rational> msg;
    Rational key;
    std::vector<Rational> private_keys;

    std::vector<Rational> flatten() const;
    static RateVector unflatten(const std::vector<Rational>& flat);
    RateVector scaled(const Rational& factor) const;

    friend bool operator==(const RateVector&, const RateVector&) = default;
};

/// r_i = l_i / l, r_k = l_k / l, r_ki = l_ki / l. Throws PreconditionError for l = 0.
RateVector rate_of(const Instance& inst, const KeyProfile& keys, std::size_t code_len);

Instance parse_instance(std::string_view text);
Instance instance_from_json(const json& j);
json instance_to_json(const Instance& inst);
std::string serialize_instance(const Instance& inst);

KeyProfile parse_key_profile(std::string_view text);
KeyProfile key_profile_from_json(const json& j);
json key_profile_to_json(const KeyProfile& keys);

json rate_vector_to_json(const RateVector& r);
/// Accepts a JSON array of "a/b" strings or integers.
RateVector rate_vector_from_json(const json& j);
/// Comma separated rationals, e.g. "1,1,1,0,0".
RateVector parse_rate_vector(std::string_view text);

}  // namespace secidx
