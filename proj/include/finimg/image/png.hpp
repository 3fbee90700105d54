#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "finimg/image/codec.hpp"

namespace finimg::image {

struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;
};

/// 8-bit RGB, no alpha, no interlace. Same pixels give the same bytes.
std::vector<std::uint8_t> encode_png(int width, int height, std::span<const std::uint8_t> rgb);
/// Any PNG, converted to 8-bit RGB. Throws DataError on corrupt input.
RgbImage decode_png(std::span<const std::uint8_t> bytes);

void write_png(const CompanyImage& image, const std::filesystem::path& path);
RgbImage read_png(const std::filesystem::path& path);

}  // namespace finimg::image
