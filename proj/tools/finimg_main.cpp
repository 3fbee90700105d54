#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <memory>

#include "finimg/chart/chart.hpp"
#include "finimg/chart/corpus.hpp"
#include "finimg/chart/embedding.hpp"
#include "finimg/chart/matcher.hpp"
#include "finimg/common/error.hpp"
#include "finimg/pipeline/stages.hpp"

using namespace finimg;
namespace fs = std::filesystem;

namespace {

chart::ReferenceIndex load_index(const chart::StandardChart& standard, const fs::path& index_path) {
    return chart::ReferenceIndex::load_jsonl(index_path, standard, std::make_shared<chart::TrigramEmbedder>());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Company ledgers to financial images to a distress classifier."};
    app.require_subcommand(0, 1);

    std::string config_path;
    std::string stage = "all";
    std::string variant;
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "Pipeline config (JSON)");
    app.add_option("--stage", stage, "synth, normalize, vectorize, imagize, train, evaluate, report or all")
        ->capture_default_str();
    auto* variant_opt = app.add_option("--variant", variant, "Image variant: accounts or ratios");
    auto* seed_opt = app.add_option("--seed", seed, "Overrides the split, training and synth seeds");

    auto* normalize = app.add_subcommand("normalize", "Map a source chart onto the standard chart");
    fs::path source, standard_path, index_path, table_out;
    double floor = 0.30;
    normalize->add_option("--chart", source, "Source chart CSV (code,level,description,parent)")->required();
    normalize->add_option("--standard", standard_path, "Standard chart JSON")->required();
    normalize->add_option("--index", index_path, "Reference descriptions JSONL")->required();
    normalize->add_option("--out", table_out, "Match table CSV to write")->required();
    normalize->add_option("--floor", floor, "Similarity below which a match is flagged")->capture_default_str();

    auto* corpus = app.add_subcommand("matcher-corpus", "Build or score the perturbation validation corpus");
    fs::path corpus_out, corpus_in;
    chart::PerturbationConfig pc;
    corpus->add_option("--standard", standard_path, "Standard chart JSON")->required();
    corpus->add_option("--index", index_path, "Reference descriptions JSONL")->required();
    corpus->add_option("--out", corpus_out, "Write the generated corpus here");
    corpus->add_option("--score", corpus_in, "Score the matcher on this corpus instead of generating one");
    corpus->add_option("--seed", pc.seed, "Corpus seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? pipeline::kSuccess : pipeline::kUsageError;
    }

    try {
        if (*normalize) {
            const auto standard = chart::StandardChart::load_json(standard_path);
            const auto index = load_index(standard, index_path);
            chart::MatchOptions options;
            options.similarity_floor = floor;
            const auto matches = chart::normalize_chart(chart::read_chart_csv(source), index, options);
            chart::write_match_table(table_out, matches);
            const auto low = std::count_if(matches.begin(), matches.end(), [](const auto& m) { return m.low_confidence; });
            std::cout << matches.size() << " accounts mapped, " << low << " low confidence\n";
            return pipeline::kSuccess;
        }
        if (*corpus) {
            const auto standard = chart::StandardChart::load_json(standard_path);
            const auto index = load_index(standard, index_path);
            if (!corpus_in.empty()) {
                const auto queries = chart::read_corpus_jsonl(corpus_in);
                std::cout << "accuracy " << chart::validate_matcher(queries, index) << " on " << queries.size()
                          << " queries\n";
                return pipeline::kSuccess;
            }
            if (corpus_out.empty()) {
                std::cerr << "matcher-corpus: give --out or --score\n";
                return pipeline::kUsageError;
            }
            const auto queries = chart::make_perturbation_corpus(standard, index, pc);
            chart::write_corpus_jsonl(corpus_out, queries);
            std::cout << queries.size() << " queries written to " << corpus_out.string() << "\n";
            return pipeline::kSuccess;
        }

        if (config_path.empty()) {
            std::cerr << "--config is required\n" << app.help();
            return pipeline::kUsageError;
        }
        std::optional<pipeline::Stage> only;
        if (stage != "all") {
            try {
                only = pipeline::parse_stage(stage);
            } catch (const ContractError& e) {
                std::cerr << e.what() << "\n";
                return pipeline::kUsageError;
            }
        }
        pipeline::PipelineConfig config;
        try {
            config = pipeline::load_config(config_path);
            if (*variant_opt) config.variant = image::parse_variant(variant);
        } catch (const DataError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return pipeline::kUsageError;
        }
        if (*seed_opt) pipeline::override_seed(config, seed);

        if (only)
            pipeline::run_stage(*only, config, std::cout);
        else
            pipeline::run_all(config, std::cout);
        return pipeline::kSuccess;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return pipeline::kDataError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return pipeline::kInternalError;
    }
}
