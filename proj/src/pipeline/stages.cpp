#include "finimg/pipeline/stages.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>

#include "finimg/chart/chart.hpp"
#include "finimg/chart/embedding.hpp"
#include "finimg/chart/matcher.hpp"
#include "finimg/cnn/train.hpp"
#include "finimg/common/error.hpp"
#include "finimg/common/files.hpp"
#include "finimg/eval/metrics.hpp"
#include "finimg/eval/split.hpp"
#include "finimg/image/code_tables.hpp"
#include "finimg/image/dataset.hpp"
#include "finimg/image/png.hpp"
#include "finimg/ledger/monthly_vector.hpp"

namespace finimg::pipeline {

namespace fs = std::filesystem;

std::string to_string(Stage s) {
    switch (s) {
        case Stage::synth: return "synth";
        case Stage::normalize: return "normalize";
        case Stage::vectorize: return "vectorize";
        case Stage::imagize: return "imagize";
        case Stage::train: return "train";
        case Stage::evaluate: return "evaluate";
        case Stage::report: return "report";
    }
    return "?";
}

Stage parse_stage(std::string_view name) {
    for (Stage s : kAllStages)
        if (to_string(s) == name) return s;
    throw ContractError("unknown stage '" + std::string(name) + "'");
}

fs::path stage_dir(const PipelineConfig& c, Stage s) {
    const fs::path dir = c.out() / to_string(s);
    switch (s) {
        case Stage::imagize:
        case Stage::train:
        case Stage::evaluate:
        case Stage::report: return dir / std::string(image::to_string(c.variant));
        default: return dir;
    }
}

namespace {

const char* kEntriesFile = "entries_std.csv";

const fs::path& require(const fs::path& path, const std::string& what) {
    if (!fs::is_regular_file(path)) throw DataError("missing " + what + ": " + path.string());
    return path;
}

fs::path stage_output(const PipelineConfig& c, Stage producer, const std::string& name) {
    return require(stage_dir(c, producer) / name,
                   name + " (run the " + to_string(producer) + " stage first)");
}

fs::path ledger_input(const PipelineConfig& c, const std::optional<fs::path>& configured, const std::string& name) {
    if (configured) return require(c.resolve(*configured), name);
    return stage_output(c, Stage::synth, name);
}

std::vector<std::string> files_under(const fs::path& root) {
    std::vector<std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) out.push_back(fs::relative(e.path(), root).generic_string());
    std::sort(out.begin(), out.end());
    return out;
}

// Builds a stage's outputs in a scratch directory that replaces the stage
// directory only on commit.
class StageOutput {
public:
    StageOutput(const PipelineConfig& c, Stage s) : stage_(s), hash_(config_hash(c)), final_(stage_dir(c, s)) {
        tmp_ = final_.parent_path() / (".tmp-" + final_.filename().string());
        fs::remove_all(tmp_);
        fs::create_directories(tmp_);
    }
    StageOutput(const StageOutput&) = delete;
    StageOutput& operator=(const StageOutput&) = delete;
    ~StageOutput() {
        std::error_code ec;
        if (!committed_) fs::remove_all(tmp_, ec);
    }

    const fs::path& dir() const { return tmp_; }
    fs::path operator/(const std::string& name) const { return tmp_ / name; }

    void commit() {
        nlohmann::ordered_json stamp;
        stamp["stage"] = to_string(stage_);
        stamp["config_hash"] = hash_;
        nlohmann::ordered_json hashes = nlohmann::ordered_json::object();
        for (const auto& name : files_under(tmp_)) hashes[name] = files::content_hash(tmp_ / name);
        stamp["files"] = hashes;
        files::write_text(tmp_ / "stamp.json", stamp.dump(2) + "\n");
        fs::remove_all(final_);
        fs::rename(tmp_, final_);
        committed_ = true;
    }

private:
    Stage stage_;
    std::string hash_;
    fs::path final_;
    fs::path tmp_;
    bool committed_ = false;
};

const chart::StandardChart& standard_chart(const PipelineConfig& c) {
    static std::map<fs::path, chart::StandardChart> cache;
    const fs::path path = require(c.resolve(c.standard_chart), "standard chart");
    auto it = cache.find(path);
    if (it == cache.end()) it = cache.emplace(path, chart::StandardChart::load_json(path)).first;
    return it->second;
}

void run_synth(const PipelineConfig& c, std::ostream& log) {
    if (!c.synth) throw DataError("the synth stage needs a 'synth' section in the config");
    StageOutput out(c, Stage::synth);
    synth::generate_dataset(*c.synth, out.dir());
    out.commit();
    log << "synth: " << c.synth->n_companies << " companies\n";
}

void run_normalize(const PipelineConfig& c, std::ostream& log) {
    const auto source = chart::read_chart_csv(ledger_input(c, c.source_chart, "source_chart.csv"));
    const auto& standard = standard_chart(c);
    const auto index = chart::ReferenceIndex::load_jsonl(require(c.resolve(c.reference_index), "reference index"),
                                                         standard, std::make_shared<chart::TrigramEmbedder>());
    chart::MatchOptions options;
    options.similarity_floor = c.similarity_floor;
    const auto matches = chart::normalize_chart(source, index, options);
    const auto raw = ledger::read_entries(ledger_input(c, c.entries, "entries.csv"));

    StageOutput out(c, Stage::normalize);
    chart::write_match_table(out / "match_table.csv", matches);
    const ledger::AccountMapping mapping(matches);
    std::vector<ledger::RawEntry> mapped;
    mapped.reserve(raw.size());
    char code[16];
    for (const auto& e : raw) {
        const auto std_entry = mapping.apply(e, standard);
        std::snprintf(code, sizeof code, "%05d", std_entry.account.value);
        mapped.push_back({e.company_id, e.date, code, e.debit, e.credit});
    }
    ledger::write_entries_csv(out / kEntriesFile, mapped);
    out.commit();
    const auto low = std::count_if(matches.begin(), matches.end(), [](const auto& m) { return m.low_confidence; });
    log << "normalize: " << matches.size() << " accounts mapped (" << low << " low confidence), " << mapped.size()
        << " entries\n";
}

void run_vectorize(const PipelineConfig& c, std::ostream& log) {
    const auto& standard = standard_chart(c);
    const auto raw = ledger::read_entries(stage_output(c, Stage::normalize, kEntriesFile));
    const auto companies = synth::read_companies_jsonl(ledger_input(c, c.companies, "companies.jsonl"));
    const auto ratios = ledger::load_ratio_definitions(require(c.resolve(c.ratio_definitions), "ratio definitions"),
                                                       standard);
    const auto inflation = image::InflationTable::load_csv(require(c.resolve(c.inflation), "inflation table"));

    const ledger::AccountMapping passthrough;
    std::vector<ledger::AccountingEntry> entries;
    entries.reserve(raw.size());
    for (const auto& e : raw) entries.push_back(passthrough.apply(e, standard));
    const auto balances = ledger::aggregate_monthly(entries, standard);

    std::map<std::string, const synth::CompanyMeta*> meta;
    for (const auto& m : companies) meta[m.company_id] = &m;

    std::vector<ledger::MonthlyVector> vectors;
    std::size_t invalid = 0;
    for (const auto& [id, series] : balances) {
        auto it = meta.find(id);
        if (it == meta.end()) throw DataError("company " + id + " has entries but no metadata record");
        const auto& m = *it->second;
        for (std::size_t i = 0; i < series.size(); ++i) {
            const auto rates = inflation.at_cycled(series[i].period);
            const ledger::VectorMetadata md{m.division, m.group, m.region_code, m.country_code, rates.month,
                                            rates.twelve_month};
            vectors.push_back(ledger::build_monthly_vector(std::span(series).first(i + 1), md, ratios));
            if (!vectors.back().valid) ++invalid;
        }
    }
    StageOutput out(c, Stage::vectorize);
    ledger::write_vectors_jsonl(out / "vectors.jsonl", vectors);
    out.commit();
    log << "vectorize: " << balances.size() << " companies, " << vectors.size() << " monthly vectors (" << invalid
        << " invalid months)\n";
}

std::map<std::string, int> read_labels(const fs::path& path) {
    std::map<std::string, int> out;
    for (const auto& j : files::read_jsonl(path)) {
        try {
            const int label = j.at("label").get<int>();
            if (label != 0 && label != 1) throw DataError(path.string() + ": labels must be 0 or 1");
            out[j.at("company_id").get<std::string>()] = label;
        } catch (const nlohmann::json::exception& e) {
            throw DataError(path.string() + ": " + e.what());
        }
    }
    return out;
}

// The latest month that closes a complete window.
std::optional<std::vector<ledger::MonthlyVector>> latest_window(std::span<const ledger::MonthlyVector> months) {
    for (std::size_t i = months.size(); i-- > 0;) {
        try {
            return ledger::select_window(months, months[i].period);
        } catch (const ledger::InsufficientHistory&) {
        }
    }
    return std::nullopt;
}

void run_imagize(const PipelineConfig& c, std::ostream& log) {
    const auto vectors = ledger::read_vectors_jsonl(stage_output(c, Stage::vectorize, "vectors.jsonl"));
    const auto labels = read_labels(ledger_input(c, c.labels, "labels.jsonl"));

    StageOutput out(c, Stage::imagize);
    fs::create_directories(out / "images");
    fs::create_directories(out / "raw");
    std::vector<image::ManifestEntry> manifest;
    std::size_t skipped = 0;
    for (std::size_t begin = 0; begin < vectors.size();) {
        std::size_t end = begin;
        while (end < vectors.size() && vectors[end].company_id == vectors[begin].company_id) ++end;
        const std::span<const ledger::MonthlyVector> months(vectors.data() + begin, end - begin);
        const std::string& id = vectors[begin].company_id;
        begin = end;
        auto label = labels.find(id);
        if (label == labels.end()) throw DataError("company " + id + " has no label");
        const auto window = latest_window(months);
        if (!window) {
            ++skipped;
            continue;
        }
        const auto img = image::compose_image(*window, c.variant, label->second);
        const std::string raw = "raw/" + image::raw_name(img);
        image::write_png(img, out / ("images/" + image::png_name(img)));
        image::write_raw(img, out / raw);
        manifest.push_back({id, img.anchor, c.variant, img.label, raw, window->back().division});
    }
    image::write_manifest(out / "manifest.jsonl", manifest);
    out.commit();
    log << "imagize: " << manifest.size() << " " << image::to_string(c.variant) << " images (" << skipped
        << " companies without a complete window)\n";
}

struct ImageSet {
    cnn::Dataset data;
    std::vector<image::ManifestEntry> entries;
};

ImageSet load_images(const PipelineConfig& c) {
    std::vector<fs::path> manifests{stage_output(c, Stage::imagize, "manifest.jsonl")};
    for (const auto& m : c.extra_manifests) manifests.push_back(require(c.resolve(m), "image manifest"));
    ImageSet set;
    for (const auto& path : manifests) {
        for (const auto& e : image::read_manifest(path)) {
            if (e.variant != c.variant)
                throw DataError(path.string() + ": " + e.company_id + " is a " +
                                std::string(image::to_string(e.variant)) + " image, expected " +
                                std::string(image::to_string(c.variant)));
            if (!c.divisions.empty() && std::find(c.divisions.begin(), c.divisions.end(), e.division) == c.divisions.end())
                continue;
            const auto pixels = image::read_raw(require(path.parent_path() / e.pixel_file, "image"));
            set.data.add(pixels, e.label);
            set.entries.push_back(e);
        }
    }
    if (set.data.size() < 10) throw DataError("need at least 10 images to split, found " + std::to_string(set.data.size()));
    return set;
}

nlohmann::ordered_json split_to_json(const eval::SplitPlan& s) {
    nlohmann::ordered_json j;
    j["seed"] = s.seed;
    j["train"] = s.train;
    j["val"] = s.val;
    j["test"] = s.test;
    return j;
}

eval::SplitPlan split_from_json(const nlohmann::json& j) {
    eval::SplitPlan s;
    try {
        s.seed = j.at("seed").get<std::uint64_t>();
        s.train = j.at("train").get<std::vector<std::size_t>>();
        s.val = j.at("val").get<std::vector<std::size_t>>();
        s.test = j.at("test").get<std::vector<std::size_t>>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("split.json: ") + e.what());
    }
    return s;
}

void run_train(const PipelineConfig& c, std::ostream& log) {
    const auto set = load_images(c);
    const auto split = eval::split_dataset(set.data.size(), c.split_seed);
    auto model = cnn::Model::standard(c.train);
    const auto report = cnn::fit(model, set.data.subset(split.train), set.data.subset(split.val));

    StageOutput out(c, Stage::train);
    model.save(out / "model.json");
    files::write_text(out / "split.json", split_to_json(split).dump() + "\n");
    files::write_text(out / "train_report.json", cnn::to_json(report).dump(2) + "\n");
    out.commit();
    log << "train: " << split.train.size() << " train / " << split.val.size() << " val images, stopped after epoch "
        << report.stopped_epoch << ", best epoch " << report.best_epoch << " (val loss " << report.best_val_loss
        << ")\n";
}

void run_evaluate(const PipelineConfig& c, std::ostream& log) {
    auto model = cnn::Model::load(stage_output(c, Stage::train, "model.json"));
    const auto split = split_from_json(files::read_json(stage_output(c, Stage::train, "split.json")));
    const auto set = load_images(c);
    if (split.train.size() + split.val.size() + split.test.size() != set.data.size())
        throw DataError("the image set changed since training; rerun the train stage");
    for (auto i : split.test)
        if (i >= set.data.size()) throw DataError("split.json refers to image " + std::to_string(i));

    const auto test = set.data.subset(split.test);
    const auto probs = cnn::predict_proba(model, test);
    const auto predicted = cnn::predict_labels(probs);
    const auto m = eval::compute_metrics(eval::confusion(predicted, test.labels), cnn::bce_loss(probs, test.labels));

    StageOutput out(c, Stage::evaluate);
    files::write_text(out / "metrics.json", eval::metrics_report(m, split).dump(2) + "\n");
    std::string lines;
    for (std::size_t k = 0; k < split.test.size(); ++k) {
        const auto& e = set.entries[split.test[k]];
        nlohmann::ordered_json j;
        j["company_id"] = e.company_id;
        j["anchor_period"] = e.anchor_period.to_string();
        j["label"] = e.label;
        j["probability"] = probs[k];
        j["predicted"] = predicted[k];
        lines += j.dump() + "\n";
    }
    files::write_text(out / "predictions.jsonl", lines);
    out.commit();
    log << "evaluate: test accuracy " << m.accuracy << ", loss " << m.loss << "\n";
}

std::string summary(const nlohmann::json& m) {
    const auto& k = m.at("confusion");
    char buf[1024];
    std::snprintf(buf, sizeof buf,
                  "test images: %llu (train %llu, val %llu)\n"
                  "loss       %.4f\n"
                  "accuracy   %.4f\n"
                  "precision  %.4f\n"
                  "recall     %.4f\n"
                  "f1         %.4f\n"
                  "\n"
                  "              predicted 1  predicted 0\n"
                  "actual 1     %11llu  %11llu\n"
                  "actual 0     %11llu  %11llu\n",
                  m.at("split_sizes").at("test").get<unsigned long long>(),
                  m.at("split_sizes").at("train").get<unsigned long long>(),
                  m.at("split_sizes").at("val").get<unsigned long long>(), m.at("loss").get<double>(),
                  m.at("accuracy").get<double>(), m.at("precision").get<double>(), m.at("recall").get<double>(),
                  m.at("f1").get<double>(), k.at("tp").get<unsigned long long>(),
                  k.at("fn").get<unsigned long long>(), k.at("fp").get<unsigned long long>(),
                  k.at("tn").get<unsigned long long>());
    std::string text = buf;
    for (const auto& [flag, set] : m.at("flags").items())
        if (set.get<bool>()) text += flag.substr(0, flag.find('_')) + " is undefined and reported as 0\n";
    return text;
}

void run_report(const PipelineConfig& c, std::ostream& log) {
    const fs::path metrics = stage_output(c, Stage::evaluate, "metrics.json");
    const auto m = files::read_json(metrics);
    std::string text;
    try {
        text = summary(m);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(metrics.string() + ": " + e.what());
    }
    StageOutput out(c, Stage::report);
    fs::copy_file(metrics, out / "metrics.json");
    files::write_text(out / "summary.txt", text);
    out.commit();
    log << text;
}

}  // namespace

void run_stage(Stage s, const PipelineConfig& c, std::ostream& log) {
    switch (s) {
        case Stage::synth: return run_synth(c, log);
        case Stage::normalize: return run_normalize(c, log);
        case Stage::vectorize: return run_vectorize(c, log);
        case Stage::imagize: return run_imagize(c, log);
        case Stage::train: return run_train(c, log);
        case Stage::evaluate: return run_evaluate(c, log);
        case Stage::report: return run_report(c, log);
    }
}

void run_all(const PipelineConfig& c, std::ostream& log) {
    for (Stage s : kAllStages) {
        if (s == Stage::synth && !c.synth) continue;
        run_stage(s, c, log);
    }
}

}  // namespace finimg::pipeline
