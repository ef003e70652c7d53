#pragma once

#include <string>
#include <string_view>

#include "secidx/conventional.hpp"
#include "secidx/problem.hpp"
#include "secidx/secure.hpp"

namespace secidx {

/// Parses JSON text, mapping syntax errors to ParseError(Malformed).
json parse_json_text(std::string_view text);

/// Instance fields plus "rows" (the encoder). Decoders are re-derived on load.
json linear_code_to_json(const LinearCode& code);
LinearCode linear_code_from_json(const json& j);

/// Instance fields plus "l" and "encoder" (code index per message tuple index).
json table_code_to_json(const TableCode& code);

/// Secure code files. Linear: the CodeMatrix fields plus "kind": "linear",
/// "side_info" and "rate". Table: "kind": "table", "p", "blocks",
/// "side_info", "l", "encoder" (indexed kw * |M| + m) and optionally
/// "decoders". Linear decoders are always re-derived on load.
json secure_code_to_json(const SecureCode& code);
SecureCode secure_code_from_json(const json& j);

/// Key profile file with missing "l_ki" read as all zeros for t receivers.
KeyProfile key_profile_for(const json& j, const Instance& inst);

}  // namespace secidx
