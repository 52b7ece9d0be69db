#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

namespace bltrend {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

/// Parses JSON emitted by a model. Accepts a surrounding markdown code fence
/// and trailing commas before `}` / `]`; anything else must be strict JSON.
/// Throws SchemaError when no object can be recovered.
json parse_lenient_json(std::string_view raw);

/// Removes commas that directly precede a closing bracket, outside strings.
std::string strip_trailing_commas(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);

/// Writes through a sibling temp file and renames, so readers never observe
/// a partially written file. Creates parent directories.
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// Shortest decimal string that round-trips to the same double.
std::string shortest_decimal(double value);

}  // namespace bltrend
