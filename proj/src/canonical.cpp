#include "credanchor/canonical.hpp"

#include "credanchor/errors.hpp"

namespace credanchor {

namespace {

// nlohmann::json keeps object members in an std::map keyed by the UTF-8
// string, and byte-wise comparison of UTF-8 is code-point order, so dumping
// already emits keys sorted the way the format requires. What is left to
// enforce is the value domain: strings, integers, booleans, lists, objects.
void reject_unsupported(const nlohmann::json& node, const std::string& path) {
    using value_t = nlohmann::json::value_t;
    switch (node.type()) {
        case value_t::number_float:
            throw CanonicalError("floating-point value at " + path +
                                 " has no canonical form");
        case value_t::null:
            throw CanonicalError("null value at " + path + " has no canonical form");
        case value_t::binary:
        case value_t::discarded:
            throw CanonicalError("unsupported value at " + path);
        case value_t::object:
            for (const auto& [key, child] : node.items()) {
                reject_unsupported(child, path + "." + key);
            }
            return;
        case value_t::array: {
            std::size_t i = 0;
            for (const auto& child : node) {
                reject_unsupported(child, path + "[" + std::to_string(i++) + "]");
            }
            return;
        }
        default:
            return;  // string, boolean, integer kinds
    }
}

}  // namespace

std::string canonicalize(const nlohmann::json& doc) {
    reject_unsupported(doc, "$");
    return doc.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
}

nlohmann::json parse_json(std::string_view text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw CanonicalError(std::string("JSON parse failed: ") + e.what());
    }
}

}  // namespace credanchor
