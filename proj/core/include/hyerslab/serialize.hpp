#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "hyerslab/point.hpp"

namespace hyerslab {

using Json = nlohmann::json;

/// Serializes with sorted keys and every floating-point value printed as
/// "%.17g". indent < 0 emits no whitespace at all (the digest form).
/// Non-finite numbers are written as null.
std::string canonical_dump(const Json& j, int indent = -1);

/// Lowercase hex SHA-256 of canonical_dump(j).
std::string content_digest(const Json& j);

std::string sha256_hex(const std::string& bytes);

Json to_json(const Point& x);
Point point_from_json(const Json& j);

}  // namespace hyerslab
