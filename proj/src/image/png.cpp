#include "finimg/image/png.hpp"

#include <png.h>

#include <cstring>

#include "finimg/common/error.hpp"
#include "finimg/common/files.hpp"

namespace finimg::image {

std::vector<std::uint8_t> encode_png(int width, int height, std::span<const std::uint8_t> rgb) {
    if (width <= 0 || height <= 0 ||
        rgb.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3)
        throw ContractError("png buffer does not match " + std::to_string(width) + "x" +
                            std::to_string(height) + " RGB");
    png_image img;
    std::memset(&img, 0, sizeof img);
    img.version = PNG_IMAGE_VERSION;
    img.width = static_cast<png_uint_32>(width);
    img.height = static_cast<png_uint_32>(height);
    img.format = PNG_FORMAT_RGB;

    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&img, nullptr, &size, 0, rgb.data(), 0, nullptr))
        throw DataError(std::string("png encode: ") + img.message);
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&img, out.data(), &size, 0, rgb.data(), 0, nullptr))
        throw DataError(std::string("png encode: ") + img.message);
    out.resize(size);
    return out;
}

RgbImage decode_png(std::span<const std::uint8_t> bytes) {
    png_image img;
    std::memset(&img, 0, sizeof img);
    img.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size()))
        throw DataError(std::string("png decode: ") + img.message);
    img.format = PNG_FORMAT_RGB;
    RgbImage out;
    out.width = static_cast<int>(img.width);
    out.height = static_cast<int>(img.height);
    out.rgb.resize(PNG_IMAGE_SIZE(img));
    if (!png_image_finish_read(&img, nullptr, out.rgb.data(), 0, nullptr)) {
        const std::string msg = img.message;
        png_image_free(&img);
        throw DataError("png decode: " + msg);
    }
    return out;
}

void write_png(const CompanyImage& image, const std::filesystem::path& path) {
    const auto bytes = encode_png(kImageSide, kImageSide, image.pixels);
    files::write_bytes(path, bytes);
}

RgbImage read_png(const std::filesystem::path& path) {
    const auto bytes = files::read_bytes(path);
    try {
        return decode_png(bytes);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

}  // namespace finimg::image
