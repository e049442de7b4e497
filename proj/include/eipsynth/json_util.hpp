#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

namespace eipsynth {

using Json = nlohmann::json;                ///< sorted keys: every canonical artifact
using OrderedJson = nlohmann::ordered_json; ///< document order: user-authored inputs

/// Parses JSON text naming `origin` in errors: ParseError on syntax, InvariantViolation on duplicate keys.
OrderedJson parse_json_strict(std::string_view text, const std::string& origin = "<input>");

/// Canonical text form: sorted keys, two-space indent, trailing newline.
std::string canonical_dump(const Json& value);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Typed member access with ParseError diagnostics.
const OrderedJson& require_member(const OrderedJson& object, const char* key, const std::string& context);
std::string require_string(const OrderedJson& object, const char* key, const std::string& context);

} // namespace eipsynth
