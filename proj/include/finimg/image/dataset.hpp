#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "finimg/image/codec.hpp"

namespace finimg::image {

struct ManifestEntry {
    std::string company_id;
    Period anchor_period;
    Variant variant = Variant::accounts;
    int label = 0;
    /// Relative to the manifest's directory.
    std::string pixel_file;
    int division = 0;
};

std::string png_name(const CompanyImage& image);
std::string raw_name(const CompanyImage& image);

void write_raw(const CompanyImage& image, const std::filesystem::path& path);
/// Throws DataError unless the file holds exactly 1,728 bytes.
std::array<std::uint8_t, kImageBytes> read_raw(const std::filesystem::path& path);

void write_manifest(const std::filesystem::path& path, std::span<const ManifestEntry> entries);
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

}  // namespace finimg::image
