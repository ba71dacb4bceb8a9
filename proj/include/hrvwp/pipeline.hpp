#pragma once

// Batch orchestration: manifest -> per-recording analysis -> balanced
// group x feature ANOVAs -> report files.

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hrvwp/features.hpp"
#include "hrvwp/ingest.hpp"
#include "hrvwp/packet_tree.hpp"
#include "hrvwp/stats.hpp"
#include "hrvwp/threshold.hpp"

namespace hrvwp {

enum class MadSource {
  Band,        ///< h from the band's own coefficients
  FirstLevel,  ///< h from the level-1 detail node
};

enum class OutputFormat { Csv, Json };

std::string_view to_string(MadSource m);
MadSource parse_mad_source(std::string_view text);
std::string_view to_string(OutputFormat f);
OutputFormat parse_output_format(std::string_view text);

struct PipelineConfig {
  double rate_hz = 4.0;
  int wavelet_order = 4;
  int depth = 6;
  FrequencyRange lf_band = kDefaultLfBand;
  FrequencyRange hf_band = kDefaultHfBand;
  MadSource mad_source = MadSource::Band;
  bool detrend = false;
  bool standardize_anova = false;
  OutputFormat output_format = OutputFormat::Csv;
  std::filesystem::path output_dir = ".";

  /// Throws ValidationError for out-of-range parameters or bands that no
  /// leaf fits into.
  void validate() const;
};

struct ManifestEntry {
  std::string path;
  std::string subject_id;
  Group group = Group::Unlabeled;
};

/// UTF-8 CSV with header "path,subject_id,group".
std::vector<ManifestEntry> parse_manifest(std::string_view text);

/// Relative paths in the manifest are resolved against its directory.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest);

struct RecordingResult {
  std::string path;
  std::string subject_id;
  Group group = Group::Unlabeled;
  std::string error;  ///< empty on success
  std::size_t samples_used = 0;
  std::optional<FeatureVector> features;
  std::optional<BandSplit> lf;
  std::optional<BandSplit> hf;

  bool ok() const { return error.empty(); }

  friend bool operator==(const RecordingResult&, const RecordingResult&) = default;
};

struct AnovaResult {
  std::string name;                   ///< "std_mean" or "energy"
  std::vector<std::string> features;  ///< column factor levels
  std::vector<Group> groups;          ///< row factor levels
  std::size_t replicates = 0;
  std::optional<AnovaTable> table;
  std::string skipped_reason;  ///< set when table is absent

  friend bool operator==(const AnovaResult&, const AnovaResult&) = default;
};

struct RunReport {
  std::string tool_version;
  PipelineConfig config;
  std::vector<RecordingResult> recordings;  ///< sorted by subject_id, then path
  std::vector<AnovaResult> anova;

  /// Every recording succeeded and every ANOVA produced a table.
  bool all_ok() const;
};

/// Runs resampling, packet decomposition, thresholding and feature
/// extraction on one tachogram. Errors are recorded, not thrown.
RecordingResult analyze_tachogram(std::span<const TachogramPoint> points, std::string subject_id, Group group,
                                  const PipelineConfig& config);

RecordingResult analyze_series(const RRSeries& series, const PipelineConfig& config);

/// Recordings are processed concurrently; the report does not depend on
/// manifest order or completion order.
RunReport run_pipeline(std::span<const ManifestEntry> manifest, const PipelineConfig& config);

/// Throws ValidationError for an empty manifest.
RunReport run_pipeline(const std::filesystem::path& manifest, const PipelineConfig& config);

/// Group x feature ANOVA over successful, labeled recordings. Skips (with a
/// reason) unless at least two groups share the same subject count >= 2.
AnovaResult run_group_anova(std::span<const RecordingResult> recordings, std::string name,
                            std::span<const std::string> feature_names, bool standardize);

inline constexpr std::array<std::string_view, 4> kStdMeanFeatures{"STDLF", "MEANLF", "STDHF", "MEANHF"};
inline constexpr std::array<std::string_view, 3> kEnergyFeatures{"E_LF", "E_HF", "R_E"};

double feature_value(const FeatureVector& f, std::string_view name);

}  // namespace hrvwp
