#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "finimg/pipeline/config.hpp"

namespace finimg::pipeline {

enum class Stage { synth, normalize, vectorize, imagize, train, evaluate, report };

inline constexpr std::array<Stage, 7> kAllStages{Stage::synth,   Stage::normalize, Stage::vectorize, Stage::imagize,
                                                 Stage::train,   Stage::evaluate,  Stage::report};

std::string to_string(Stage s);
/// Throws ContractError for an unknown name.
Stage parse_stage(std::string_view name);

/// Directory a stage writes, e.g. out/imagize/accounts.
std::filesystem::path stage_dir(const PipelineConfig& c, Stage s);

/// Runs one stage. Outputs are built in a scratch directory and moved into
/// place on success, so a failed stage leaves no partial outputs. Each stage
/// directory receives stamp.json holding the config hash and the hashes of
/// the files written. Progress and the report summary go to `log`.
/// Throws DataError for missing or invalid inputs.
void run_stage(Stage s, const PipelineConfig& c, std::ostream& log);

/// Stages in order; synth only when the config has a synth section.
void run_all(const PipelineConfig& c, std::ostream& log);

enum ExitCode { kSuccess = 0, kUsageError = 1, kDataError = 2, kInternalError = 3 };

}  // namespace finimg::pipeline
