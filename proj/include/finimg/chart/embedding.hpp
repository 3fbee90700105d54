#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace finimg::chart {

using Embedding = std::vector<double>;

/// Lowercases ASCII letters, collapses whitespace runs to one space and trims.
std::string normalize_text(std::string_view text);

class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::size_t dimension() const = 0;
    /// Unit-norm vector for `text`. Throws DataError on empty input.
    virtual Embedding embed(std::string_view text) const = 0;
};

/// Hashed character-trigram term frequencies, L2-normalized.
///
/// The normalized text is padded with one space on each side so word
/// boundaries produce trigrams of their own. Each trigram's three bytes are
/// hashed with 32-bit FNV-1a (offset 2166136261, prime 16777619) and counted
/// in bucket `hash % dimension`.
class TrigramEmbedder final : public Embedder {
public:
    static constexpr std::size_t kDefaultDimension = 2048;

    explicit TrigramEmbedder(std::size_t dimension = kDefaultDimension);

    std::size_t dimension() const override { return dimension_; }
    Embedding embed(std::string_view text) const override;

    static std::uint32_t trigram_hash(std::string_view trigram);

private:
    std::size_t dimension_;
};

/// Serves vectors computed elsewhere (e.g. by an external sentence encoder),
/// keyed by normalized text. Unknown text is a DataError.
class LookupEmbedder final : public Embedder {
public:
    /// JSON Lines of {description, vector}.
    static LookupEmbedder load_jsonl(const std::filesystem::path& path);

    void add(std::string_view text, Embedding vector);

    std::size_t dimension() const override { return dimension_; }
    Embedding embed(std::string_view text) const override;

private:
    std::size_t dimension_ = 0;
    std::map<std::string, Embedding> vectors_;
};

double cosine(std::span<const double> a, std::span<const double> b);

/// Scales to unit L2 norm; throws DataError for a zero vector.
void normalize_unit(Embedding& v);

}  // namespace finimg::chart
