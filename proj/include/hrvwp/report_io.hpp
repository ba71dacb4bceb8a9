#pragma once

// Report serialization. JSON uses shortest round-trip decimal form, CSV uses
// 12 significant digits. run.json is the lossless form of a RunReport.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hrvwp/pipeline.hpp"

namespace hrvwp {

using Json = nlohmann::ordered_json;

Json config_to_json(const PipelineConfig& config);
PipelineConfig config_from_json(const Json& j);

Json report_to_json(const RunReport& report);
RunReport report_from_json(const Json& j);

Json anova_to_json(const AnovaResult& anova);
AnovaResult anova_from_json(const Json& j);

std::string features_csv(const std::vector<FeatureVector>& features);
std::vector<FeatureVector> parse_features_csv(const std::string& text);

/// Header "Source,SS,df,MS,F,p" then Columns, Rows, Interaction, Error, Total.
std::string anova_csv(const AnovaTable& table);
AnovaTable parse_anova_csv(const std::string& text);

/// Columns band,node,offset,coefficient,component.
std::string bands_csv(const RecordingResult& recording);

std::string recordings_csv(const std::vector<RecordingResult>& recordings);

/// Writes features.*, recordings.*, anova_<name>.* for each computed table,
/// bands_<subject>.csv per successful recording and run.json. Returns the
/// written paths. Throws IoError with the offending path.
std::vector<std::filesystem::path> emit_report(const RunReport& report, OutputFormat format,
                                               const std::filesystem::path& dir);

RunReport read_report(const std::filesystem::path& run_json);

/// Safe for use in a file name.
std::string sanitize_file_stem(const std::string& s);

}  // namespace hrvwp
