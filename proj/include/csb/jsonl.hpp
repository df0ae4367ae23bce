#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace csb {

using Json = nlohmann::json;

/// Parse a JSON-lines file. Blank lines are skipped; a malformed line raises
/// DataError with the line number.
std::vector<Json> read_jsonl(const std::filesystem::path& path);

/// Stream a JSON-lines file without materializing all rows.
void for_each_jsonl(const std::filesystem::path& path, const std::function<void(const Json&)>& fn);

/// Serialize rows one-per-line. Writes to a temp file in the same directory
/// and renames into place, so readers never observe partial content.
void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& rows);

/// Atomic whole-file write (temp + rename).
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace csb
