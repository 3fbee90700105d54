#include "finimg/image/dataset.hpp"

#include "finimg/common/error.hpp"
#include "finimg/common/files.hpp"

namespace finimg::image {

std::string png_name(const CompanyImage& image) {
    return image.company_id + "_" + image.anchor.to_string() + "_" + std::string(to_string(image.variant)) +
           ".png";
}

std::string raw_name(const CompanyImage& image) {
    return image.company_id + "_" + image.anchor.to_string() + "_" + std::string(to_string(image.variant)) +
           ".rgb";
}

void write_raw(const CompanyImage& image, const std::filesystem::path& path) {
    files::write_bytes(path, std::vector<std::uint8_t>(image.pixels.begin(), image.pixels.end()));
}

std::array<std::uint8_t, kImageBytes> read_raw(const std::filesystem::path& path) {
    const auto bytes = files::read_bytes(path);
    if (bytes.size() != kImageBytes)
        throw DataError(path.string() + ": expected " + std::to_string(kImageBytes) + " bytes, found " +
                        std::to_string(bytes.size()));
    std::array<std::uint8_t, kImageBytes> out{};
    std::copy(bytes.begin(), bytes.end(), out.begin());
    return out;
}

void write_manifest(const std::filesystem::path& path, std::span<const ManifestEntry> entries) {
    std::string out;
    for (const auto& e : entries) {
        nlohmann::ordered_json j;
        j["company_id"] = e.company_id;
        j["anchor_period"] = e.anchor_period.to_string();
        j["variant"] = to_string(e.variant);
        j["label"] = e.label;
        j["pixel_file"] = e.pixel_file;
        j["division"] = e.division;
        out += j.dump() + "\n";
    }
    files::write_text(path, out);
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
    std::vector<ManifestEntry> out;
    std::size_t line = 0;
    for (const auto& j : files::read_jsonl(path)) {
        ++line;
        try {
            ManifestEntry e;
            e.company_id = j.at("company_id").get<std::string>();
            e.anchor_period = Period::parse(j.at("anchor_period").get<std::string>());
            e.variant = parse_variant(j.at("variant").get<std::string>());
            e.label = j.at("label").get<int>();
            if (e.label != 0 && e.label != 1) throw DataError("label must be 0 or 1");
            e.pixel_file = j.at("pixel_file").get<std::string>();
            e.division = j.value("division", 0);
            out.push_back(std::move(e));
        } catch (const nlohmann::json::exception& ex) {
            throw DataError(path.string() + " line " + std::to_string(line) + ": " + ex.what());
        } catch (const DataError& ex) {
            throw DataError(path.string() + " line " + std::to_string(line) + ": " + ex.what());
        }
    }
    return out;
}

}  // namespace finimg::image
