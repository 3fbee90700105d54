#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace finimg::files {

std::string read_text(const std::filesystem::path& path);
std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, std::string_view text);
void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

nlohmann::json read_json(const std::filesystem::path& path);

/// One JSON document per non-blank line. Errors name the line number.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

/// FNV-1a of the file bytes, hex encoded.
std::string content_hash(const std::filesystem::path& path);

}  // namespace finimg::files
