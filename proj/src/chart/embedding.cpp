#include "finimg/chart/embedding.hpp"

#include <cmath>

#include "finimg/common/error.hpp"
#include "finimg/common/files.hpp"

namespace finimg::chart {

std::string normalize_text(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c);
    }
    return out;
}

void normalize_unit(Embedding& v) {
    double norm2 = 0.0;
    for (double x : v) norm2 += x * x;
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) throw DataError("cannot normalize a zero vector");
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : v) x *= inv;
}

double cosine(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ContractError("cosine of vectors with different dimensions");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / std::sqrt(na * nb);
}

TrigramEmbedder::TrigramEmbedder(std::size_t dimension) : dimension_(dimension) {
    if (dimension_ == 0) throw ContractError("embedding dimension must be positive");
}

std::uint32_t TrigramEmbedder::trigram_hash(std::string_view trigram) {
    std::uint32_t h = 2166136261u;
    for (unsigned char c : trigram) {
        h ^= c;
        h *= 16777619u;
    }
    return h;
}

Embedding TrigramEmbedder::embed(std::string_view text) const {
    const std::string norm = normalize_text(text);
    if (norm.empty()) throw DataError("cannot embed empty text");
    const std::string padded = " " + norm + " ";
    Embedding v(dimension_, 0.0);
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i)
        v[trigram_hash(std::string_view(padded).substr(i, 3)) % dimension_] += 1.0;
    normalize_unit(v);
    return v;
}

LookupEmbedder LookupEmbedder::load_jsonl(const std::filesystem::path& path) {
    LookupEmbedder e;
    for (const auto& line : files::read_jsonl(path)) {
        try {
            e.add(line.at("description").get<std::string>(),
                  line.at("vector").get<std::vector<double>>());
        } catch (const nlohmann::json::exception& ex) {
            throw DataError(path.string() + ": " + ex.what());
        }
    }
    return e;
}

void LookupEmbedder::add(std::string_view text, Embedding vector) {
    if (vector.empty()) throw DataError("empty embedding vector");
    if (dimension_ == 0) dimension_ = vector.size();
    if (vector.size() != dimension_)
        throw DataError("embedding dimension " + std::to_string(vector.size()) +
                        " differs from " + std::to_string(dimension_));
    normalize_unit(vector);
    vectors_[normalize_text(text)] = std::move(vector);
}

Embedding LookupEmbedder::embed(std::string_view text) const {
    const std::string key = normalize_text(text);
    if (key.empty()) throw DataError("cannot embed empty text");
    auto it = vectors_.find(key);
    if (it == vectors_.end())
        throw DataError("no precomputed embedding for '" + std::string(text) + "'");
    return it->second;
}

}  // namespace finimg::chart
