#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

namespace credanchor {

/// Deterministic byte encoding shared by issuers and verifiers: object keys
/// sorted by Unicode code point, no insignificant whitespace, integers in
/// shortest decimal form. Two documents that differ only in key order encode
/// to identical bytes, so independent parties hash the same content to the
/// same digest.
///
/// Floating-point numbers, nulls and binary values have no canonical form
/// here and are rejected with CanonicalError. Object keys are always strings
/// in this document model.
std::string canonicalize(const nlohmann::json& doc);

/// Strict JSON parse; throws CanonicalError on malformed input.
nlohmann::json parse_json(std::string_view text);

}  // namespace credanchor
