#pragma once

// JSON interchange: quadruple files (schema 1), pencil files, reports.

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "sysmat/pencil.hpp"

namespace sysmat::io {

using Json = nlohmann::json;

inline constexpr int kSchema = 1;

/// Flat row-major array of [re, im] pairs.
Json matrix_to_json(const ComplexMatrix& m);
/// Reads `field` of `obj` as a rows x cols matrix; errors name the field.
ComplexMatrix matrix_from_json(const Json& obj, const std::string& field, Index rows, Index cols);

/// {"schema", "d", "m", "n", "A0", "A1", ..., "D1"}
Json quadruple_to_json(const SystemQuadruple& q);
SystemQuadruple quadruple_from_json(const Json& j);

/// {"schema", "rows", "cols", "L0", "L1"}
Json pencil_to_json(const Pencil& p);
Pencil pencil_from_json(const Json& j);

/// Parses text; throws Errc::parse_error with the parser's position.
Json parse_json(std::string_view text, const std::string& source);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

SystemQuadruple parse_quadruple(const std::string& path);

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace sysmat::io
