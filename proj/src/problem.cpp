#include "secidx/problem.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "secidx/errors.hpp"
#include "secidx/gf.hpp"

namespace secidx {

// ---------------------------------------------------------------------------
// Rational helpers

std::string format_rational(const Rational& q) {
    return numerator(q).str() + "/" + denominator(q).str();
}

Rational parse_rational(std::string_view text) {
    auto parse_int = [&](std::string_view s) -> BigInt {
        if (s.empty()) throw ParseError(ParseErrorKind::Malformed, "empty rational component");
        std::size_t start = (s.front() == '-' || s.front() == '+') ? 1 : 0;
        if (start == s.size() ||
            !std::all_of(s.begin() + static_cast<std::ptrdiff_t>(start), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            throw ParseError(ParseErrorKind::Malformed, "bad rational '" + std::string(text) + "'");
        }
        std::string digits(s.substr(start));
        digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
        return s.front() == '-' ? BigInt(-BigInt(digits)) : BigInt(digits);
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    const BigInt num = parse_int(text.substr(0, slash));
    const BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) throw ParseError(ParseErrorKind::Malformed, "zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
}

// ---------------------------------------------------------------------------
// Instance

Instance::Instance(std::uint32_t p, std::vector<std::vector<std::size_t>> side_info, std::vector<std::size_t> msg_len)
    : p_(p), side_info_(std::move(side_info)), msg_len_(std::move(msg_len)) {
    if (p_ >= (1u << 16) || !Field::is_prime(p_)) {
        throw ParseError(ParseErrorKind::InvalidField, "p=" + std::to_string(p_) + " is not a prime below 65536");
    }
    if (side_info_.size() != msg_len_.size()) {
        throw ParseError(ParseErrorKind::Malformed, "side_info has " + std::to_string(side_info_.size()) +
                                                        " entries but msg_len has " + std::to_string(msg_len_.size()));
    }
    const std::size_t t = msg_len_.size();
    for (std::size_t i = 0; i < t; ++i) {
        auto& s = side_info_[i];
        for (std::size_t j : s) {
            if (j >= t) {
                throw ParseError(ParseErrorKind::IndexOutOfRange, "receiver " + std::to_string(i + 1) +
                                                                      " lists message " + std::to_string(j + 1) +
                                                                      " but t=" + std::to_string(t));
            }
            if (j == i) {
                throw ParseError(ParseErrorKind::SelfLoop,
                                 "receiver " + std::to_string(i + 1) + " lists its own message as side information");
            }
        }
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
}

bool Instance::knows(std::size_t receiver, std::size_t message) const {
    const auto& s = side_info_.at(receiver);
    return std::binary_search(s.begin(), s.end(), message);
}

std::size_t Instance::total_len() const { return std::accumulate(msg_len_.begin(), msg_len_.end(), std::size_t{0}); }

std::size_t Instance::offset(std::size_t i) const {
    if (i > t()) throw DimensionError("message index out of range");
    return std::accumulate(msg_len_.begin(), msg_len_.begin() + static_cast<std::ptrdiff_t>(i), std::size_t{0});
}

Instance Instance::with_msg_len(std::vector<std::size_t> msg_len) const {
    if (msg_len.size() != t()) throw DimensionError("with_msg_len: receiver count changed");
    return Instance(p_, side_info_, std::move(msg_len));
}

// ---------------------------------------------------------------------------
// KeyProfile / RateVector

std::size_t KeyProfile::private_total() const { return std::accumulate(l_ki.begin(), l_ki.end(), std::size_t{0}); }

void KeyProfile::check_against(const Instance& inst) const {
    if (l_ki.size() != inst.t()) {
        throw PreconditionError("key profile has " + std::to_string(l_ki.size()) + " private keys for t=" +
                                std::to_string(inst.t()));
    }
}

std::vector<Rational> RateVector::flatten() const {
    std::vector<Rational> out(msg);
    out.push_back(key);
    out.insert(out.end(), private_keys.begin(), private_keys.end());
    return out;
}

RateVector RateVector::unflatten(const std::vector<Rational>& flat) {
    if (flat.size() % 2 == 0) {
        throw ParseError(ParseErrorKind::Malformed, "rate vector must have 2t+1 entries, got " + std::to_string(flat.size()));
    }
    const std::size_t t = flat.size() / 2;
    RateVector r;
    r.msg.assign(flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(t));
    r.key = flat[t];
    r.private_keys.assign(flat.begin() + static_cast<std::ptrdiff_t>(t + 1), flat.end());
    for (const auto& q : flat) {
        if (q < 0) throw ParseError(ParseErrorKind::Malformed, "rates must be nonnegative");
    }
    return r;
}

RateVector RateVector::scaled(const Rational& factor) const {
    RateVector r = *this;
    for (auto& q : r.msg) q *= factor;
    r.key *= factor;
    for (auto& q : r.private_keys) q *= factor;
    return r;
}

RateVector rate_of(const Instance& inst, const KeyProfile& keys, std::size_t code_len) {
    if (code_len == 0) throw PreconditionError("rate_of: code length must be positive");
    keys.check_against(inst);
    const Rational l(code_len);
    RateVector r;
    for (std::size_t li : inst.msg_len()) r.msg.emplace_back(Rational(li) / l);
    r.key = Rational(keys.l_k) / l;
    for (std::size_t lk : keys.l_ki) r.private_keys.emplace_back(Rational(lk) / l);
    return r;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

std::size_t get_count(const json& j, const char* key) {
    if (!j.contains(key)) throw ParseError(ParseErrorKind::Malformed, std::string("missing field '") + key + "'");
    const json& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ParseError(ParseErrorKind::Malformed, std::string("field '") + key + "' must be a nonnegative integer");
    }
    return v.get<std::size_t>();
}

std::vector<std::size_t> get_counts(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array()) {
        throw ParseError(ParseErrorKind::Malformed, std::string("field '") + key + "' must be an array");
    }
    std::vector<std::size_t> out;
    for (const json& v : j.at(key)) {
        if (!v.is_number_integer() || v.get<long long>() < 0) {
            throw ParseError(ParseErrorKind::Malformed, std::string("field '") + key + "' must hold nonnegative integers");
        }
        out.push_back(v.get<std::size_t>());
    }
    return out;
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(ParseErrorKind::Malformed, e.what());
    }
}

}  // namespace

Instance instance_from_json(const json& j) {
    if (!j.is_object()) throw ParseError(ParseErrorKind::Malformed, "instance must be a JSON object");
    if (j.contains("demands")) {
        const json& d = j.at("demands");
        bool unicast = d.is_array();
        for (std::size_t i = 0; unicast && i < d.size(); ++i) {
            unicast = d[i].is_array() && d[i].size() == 1 && d[i][0].is_number_integer() &&
                      d[i][0].get<long long>() == static_cast<long long>(i + 1);
        }
        if (!unicast) {
            throw ParseError(ParseErrorKind::Groupcast,
                             "only unicast instances are supported: receiver i must demand exactly message i");
        }
    }
    const std::size_t t = get_count(j, "t");
    if (j.contains("messages") && (!j.at("messages").is_number_integer() || j.at("messages").get<long long>() != static_cast<long long>(t))) {
        throw ParseError(ParseErrorKind::Groupcast, "message count differs from receiver count");
    }
    const std::size_t p = j.contains("p") ? get_count(j, "p") : 2;
    if (p >= (1u << 16)) throw ParseError(ParseErrorKind::InvalidField, "p too large");
    if (!j.contains("side_info") || !j.at("side_info").is_array()) {
        throw ParseError(ParseErrorKind::Malformed, "field 'side_info' must be an array of arrays");
    }
    const json& si = j.at("side_info");
    if (si.size() != t) {
        throw ParseError(ParseErrorKind::Malformed, "side_info has " + std::to_string(si.size()) + " entries, t=" + std::to_string(t));
    }
    std::vector<std::vector<std::size_t>> side(t);
    for (std::size_t i = 0; i < t; ++i) {
        if (!si[i].is_array()) throw ParseError(ParseErrorKind::Malformed, "side_info entries must be arrays");
        for (const json& v : si[i]) {
            if (!v.is_number_integer()) throw ParseError(ParseErrorKind::Malformed, "side_info indices must be integers");
            const long long one_based = v.get<long long>();
            if (one_based < 1 || one_based > static_cast<long long>(t)) {
                throw ParseError(ParseErrorKind::IndexOutOfRange, "receiver " + std::to_string(i + 1) + " lists message " +
                                                                      std::to_string(one_based) + " outside [1, " +
                                                                      std::to_string(t) + "]");
            }
            side[i].push_back(static_cast<std::size_t>(one_based - 1));
        }
    }
    std::vector<std::size_t> len = j.contains("msg_len") ? get_counts(j, "msg_len") : std::vector<std::size_t>(t, 1);
    if (len.size() != t) {
        throw ParseError(ParseErrorKind::Malformed, "msg_len has " + std::to_string(len.size()) + " entries, t=" + std::to_string(t));
    }
    return Instance(static_cast<std::uint32_t>(p), std::move(side), std::move(len));
}

Instance parse_instance(std::string_view text) { return instance_from_json(parse_json(text)); }

json instance_to_json(const Instance& inst) {
    json side = json::array();
    for (const auto& s : inst.side_info()) {
        json row = json::array();
        for (std::size_t j : s) row.push_back(j + 1);
        side.push_back(row);
    }
    return json{{"t", inst.t()}, {"p", inst.p()}, {"side_info", side}, {"msg_len", inst.msg_len()}};
}

std::string serialize_instance(const Instance& inst) { return instance_to_json(inst).dump(); }

KeyProfile key_profile_from_json(const json& j) {
    if (!j.is_object()) throw ParseError(ParseErrorKind::Malformed, "key profile must be a JSON object");
    KeyProfile k;
    k.l_k = j.contains("l_k") ? get_count(j, "l_k") : 0;
    k.l_ki = j.contains("l_ki") ? get_counts(j, "l_ki") : std::vector<std::size_t>{};
    k.l_w = j.contains("l_w") ? get_count(j, "l_w") : 0;
    return k;
}

KeyProfile parse_key_profile(std::string_view text) { return key_profile_from_json(parse_json(text)); }

json key_profile_to_json(const KeyProfile& keys) {
    return json{{"l_k", keys.l_k}, {"l_ki", keys.l_ki}, {"l_w", keys.l_w}};
}

json rate_vector_to_json(const RateVector& r) {
    json out = json::array();
    for (const auto& q : r.flatten()) out.push_back(format_rational(q));
    return out;
}

RateVector rate_vector_from_json(const json& j) {
    if (!j.is_array()) throw ParseError(ParseErrorKind::Malformed, "rate vector must be an array");
    std::vector<Rational> flat;
    for (const json& v : j) {
        if (v.is_string()) {
            flat.push_back(parse_rational(v.get<std::string>()));
        } else if (v.is_number_integer()) {
            flat.emplace_back(v.get<long long>());
        } else {
            throw ParseError(ParseErrorKind::Malformed, "rates must be \"a/b\" strings or integers");
        }
    }
    return RateVector::unflatten(flat);
}

RateVector parse_rate_vector(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\n");
    if (first != std::string_view::npos && text[first] == '[') return rate_vector_from_json(parse_json(text));
    std::vector<Rational> flat;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        std::string_view item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        flat.push_back(parse_rational(item));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return RateVector::unflatten(flat);
}

}  // namespace secidx
