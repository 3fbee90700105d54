#include "finimg/common/csv.hpp"

#include <algorithm>

#include "finimg/common/error.hpp"
#include "finimg/common/files.hpp"

namespace finimg::csv {

std::vector<Row> parse(std::string_view text) {
    std::vector<Row> rows;
    Row row;
    std::string field;
    bool quoted = false;
    bool field_started = false;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
        row.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field_started && !field.empty())
                    throw ParseError("unexpected quote inside unquoted CSV field", i);
                quoted = true;
                field_started = true;
                break;
            case ',': end_field(); break;
            case '\r': break;
            case '\n': end_row(); break;
            default:
                field.push_back(c);
                field_started = true;
        }
    }
    if (quoted) throw ParseError("unterminated quoted CSV field", text.size());
    if (field_started || !row.empty()) end_row();
    return rows;
}

std::vector<Row> read_file(const std::filesystem::path& path) {
    return parse(files::read_text(path));
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string format_row(const Row& row) {
    std::string out;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out.push_back(',');
        out += escape(row[i]);
    }
    out.push_back('\n');
    return out;
}

std::vector<std::size_t> require_columns(const Row& header, const std::vector<std::string>& names,
                                         const std::string& source) {
    std::vector<std::size_t> idx;
    for (const auto& name : names) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw DataError(source + ": missing column '" + name + "'");
        idx.push_back(static_cast<std::size_t>(it - header.begin()));
    }
    return idx;
}

}  // namespace finimg::csv
