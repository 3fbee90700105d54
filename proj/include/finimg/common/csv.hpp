#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace finimg::csv {

using Row = std::vector<std::string>;

/// RFC 4180 style: comma separated, double-quoted fields may contain commas,
/// quotes ("") and newlines. CR before LF is dropped.
std::vector<Row> parse(std::string_view text);

std::vector<Row> read_file(const std::filesystem::path& path);

std::string escape(std::string_view field);
std::string format_row(const Row& row);

/// Index of each expected column in `header`; throws DataError naming the
/// first missing column.
std::vector<std::size_t> require_columns(const Row& header,
                                         const std::vector<std::string>& names,
                                         const std::string& source);

}  // namespace finimg::csv
