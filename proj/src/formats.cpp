#include "secidx/formats.hpp"

#include "secidx/errors.hpp"

namespace secidx {

namespace {

json side_info_json(const Instance& inst) {
    json side = json::array();
    for (const auto& s : inst.side_info()) {
        json row = json::array();
        for (std::size_t j : s) row.push_back(j + 1);
        side.push_back(std::move(row));
    }
    return side;
}

Instance instance_from_blocks(const json& j, const BlockLayout& layout) {
    json inst{{"t", layout.t()}, {"p", j.at("p")}, {"side_info", j.at("side_info")}, {"msg_len", layout.l_i}};
    return instance_from_json(inst);
}

template <class Fn>
auto wrap_json_errors(const char* what, Fn&& fn) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw ParseError(ParseErrorKind::Malformed, std::string(what) + ": " + e.what());
    } catch (const DimensionError& e) {
        throw ParseError(ParseErrorKind::Malformed, std::string(what) + ": " + e.what());
    } catch (const PreconditionError& e) {
        throw ParseError(ParseErrorKind::Malformed, std::string(what) + ": " + e.what());
    }
}

}  // namespace

json parse_json_text(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(ParseErrorKind::Malformed, std::string("invalid JSON: ") + e.what());
    }
}

json linear_code_to_json(const LinearCode& code) {
    json j = instance_to_json(code.instance);
    j["l"] = code.length();
    j["rows"] = code.encoder.to_rows();
    return j;
}

LinearCode linear_code_from_json(const json& j) {
    return wrap_json_errors("conventional code", [&] {
        const Instance inst = instance_from_json(j);
        const auto rows = j.at("rows").get<std::vector<SymbolVec>>();
        for (const auto& r : rows) {
            for (Symbol s : r) {
                if (s >= inst.p()) throw ParseError(ParseErrorKind::Malformed, "entry outside the field");
            }
        }
        const FieldMatrix g = FieldMatrix::from_rows(rows, inst.total_len(), inst.p());
        auto code = make_linear_code(inst, g);
        if (!code) throw ParseError(ParseErrorKind::Malformed, "conventional code is not decodable");
        return std::move(*code);
    });
}

json table_code_to_json(const TableCode& code) {
    json j = instance_to_json(code.instance);
    j["kind"] = "table";
    j["l"] = code.code_len;
    j["encoder"] = code.encoder;
    return j;
}

json secure_code_to_json(const SecureCode& code) {
    const BlockLayout layout = code.layout();
    json j;
    if (code.is_linear()) {
        j = code_matrix_to_json(code.matrix());
        j["kind"] = "linear";
    } else {
        j = json{{"kind", "table"},
                 {"p", code.instance.p()},
                 {"blocks", {{"l_k", layout.l_k}, {"l_ki", layout.l_ki}, {"l_w", layout.l_w}, {"l_i", layout.l_i}}},
                 {"l", code.code_len},
                 {"encoder", std::get<EncoderTable>(code.encoder).table}};
        json dec = json::array();
        for (const auto& d : code.decoders) {
            if (const auto* t = std::get_if<std::vector<std::int64_t>>(&d)) {
                dec.push_back(*t);
            } else {
                dec = nullptr;
                break;
            }
        }
        if (!dec.is_null()) j["decoders"] = std::move(dec);
    }
    j["side_info"] = side_info_json(code.instance);
    if (code.code_len > 0) j["rate"] = rate_vector_to_json(code.rate());
    return j;
}

SecureCode secure_code_from_json(const json& j) {
    return wrap_json_errors("secure code", [&]() -> SecureCode {
        if (!j.is_object()) throw ParseError(ParseErrorKind::Malformed, "secure code must be a JSON object");
        const std::string kind = j.value("kind", std::string("linear"));
        if (kind == "linear") {
            const CodeMatrix cm = code_matrix_from_json(j);
            const Instance inst = instance_from_blocks(j, cm.layout);
            return linear_code_with_partial_decoders(inst, cm);
        }
        if (kind != "table") throw ParseError(ParseErrorKind::Malformed, "unknown code kind '" + kind + "'");
        const json& b = j.at("blocks");
        const BlockLayout layout{b.at("l_k").get<std::size_t>(), b.at("l_ki").get<std::vector<std::size_t>>(),
                                 b.value("l_w", std::size_t{0}), b.at("l_i").get<std::vector<std::size_t>>()};
        const Instance inst = instance_from_blocks(j, layout);
        const KeyProfile keys = layout.keys();
        keys.check_against(inst);
        const auto len = j.at("l").get<std::size_t>();
        EncoderTable enc{j.at("encoder").get<std::vector<std::uint64_t>>()};
        SecureCode code{inst, keys, len, enc, {}};
        if (j.contains("decoders")) {
            for (const auto& d : j.at("decoders")) code.decoders.emplace_back(d.get<std::vector<std::int64_t>>());
        } else {
            auto dec = derive_secure_table_decoders(inst, keys, len, enc);
            if (!dec) throw ParseError(ParseErrorKind::Malformed, "secure code is not decodable");
            for (auto& d : *dec) code.decoders.emplace_back(std::move(d));
        }
        return code;
    });
}

KeyProfile key_profile_for(const json& j, const Instance& inst) {
    KeyProfile keys = key_profile_from_json(j);
    if (!j.contains("l_ki")) keys.l_ki.assign(inst.t(), 0);
    try {
        keys.check_against(inst);
    } catch (const PreconditionError& e) {
        throw ParseError(ParseErrorKind::Malformed, std::string("key profile: ") + e.what());
    }
    return keys;
}

}  // namespace secidx
