#include "secidx/code_matrix.hpp"

#include <numeric>

#include "secidx/errors.hpp"

namespace secidx {

BlockLayout BlockLayout::of(const Instance& inst, const KeyProfile& keys) {
    keys.check_against(inst);
    return {keys.l_k, keys.l_ki, keys.l_w, inst.msg_len()};
}

std::size_t BlockLayout::key_width() const {
    return l_k + std::accumulate(l_ki.begin(), l_ki.end(), std::size_t{0}) + l_w;
}

std::size_t BlockLayout::msg_width() const { return std::accumulate(l_i.begin(), l_i.end(), std::size_t{0}); }

std::size_t BlockLayout::private_offset(std::size_t i) const {
    if (i > l_ki.size()) throw DimensionError("private key index out of range");
    return l_k + std::accumulate(l_ki.begin(), l_ki.begin() + static_cast<std::ptrdiff_t>(i), std::size_t{0});
}

std::size_t BlockLayout::randomness_offset() const { return private_offset(l_ki.size()); }

std::size_t BlockLayout::msg_offset(std::size_t i) const {
    if (i > l_i.size()) throw DimensionError("message index out of range");
    return key_width() + std::accumulate(l_i.begin(), l_i.begin() + static_cast<std::ptrdiff_t>(i), std::size_t{0});
}

BlockLayout::Location BlockLayout::locate(std::size_t col) const {
    if (col < l_k) return {BlockKind::CommonKey, 0, col};
    std::size_t off = l_k;
    for (std::size_t i = 0; i < l_ki.size(); ++i) {
        if (col < off + l_ki[i]) return {BlockKind::PrivateKey, i, col - off};
        off += l_ki[i];
    }
    if (col < off + l_w) return {BlockKind::Randomness, 0, col - off};
    off += l_w;
    for (std::size_t i = 0; i < l_i.size(); ++i) {
        if (col < off + l_i[i]) return {BlockKind::Message, i, col - off};
        off += l_i[i];
    }
    throw DimensionError("column " + std::to_string(col) + " outside layout");
}

CodeMatrix::CodeMatrix(FieldMatrix m, BlockLayout l) : pi(std::move(m)), layout(std::move(l)) {
    if (layout.l_ki.size() != layout.l_i.size()) throw DimensionError("layout needs one private key per message");
    if (pi.cols() != layout.total()) {
        throw DimensionError("code matrix has " + std::to_string(pi.cols()) + " columns, layout needs " +
                             std::to_string(layout.total()));
    }
}

json code_matrix_to_json(const CodeMatrix& cm) {
    const BlockLayout& b = cm.layout;
    return json{{"p", cm.modulus()},
                {"blocks", {{"l_k", b.l_k}, {"l_ki", b.l_ki}, {"l_w", b.l_w}, {"l_i", b.l_i}}},
                {"rows", cm.pi.to_rows()}};
}

CodeMatrix code_matrix_from_json(const json& j) {
    try {
        const auto p = j.at("p").get<std::uint32_t>();
        const json& b = j.at("blocks");
        BlockLayout layout{b.at("l_k").get<std::size_t>(), b.at("l_ki").get<std::vector<std::size_t>>(),
                           b.value("l_w", std::size_t{0}), b.at("l_i").get<std::vector<std::size_t>>()};
        const auto rows = j.at("rows").get<std::vector<SymbolVec>>();
        if (!Field::is_prime(p) || p >= (1u << 16)) throw ParseError(ParseErrorKind::InvalidField, "bad p");
        return CodeMatrix(FieldMatrix::from_rows(rows, layout.total(), p), layout);
    } catch (const json::exception& e) {
        throw ParseError(ParseErrorKind::Malformed, std::string("code matrix: ") + e.what());
    } catch (const DimensionError& e) {
        throw ParseError(ParseErrorKind::Malformed, std::string("code matrix: ") + e.what());
    } catch (const PreconditionError& e) {
        throw ParseError(ParseErrorKind::Malformed, std::string("code matrix: ") + e.what());
    }
}

}  // namespace secidx
