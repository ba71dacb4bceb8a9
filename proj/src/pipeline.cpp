#include "hrvwp/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "hrvwp/errors.hpp"

namespace hrvwp {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return ss.str();
}

}  // namespace

std::string_view to_string(MadSource m) { return m == MadSource::Band ? "band" : "first-level"; }

MadSource parse_mad_source(std::string_view text) {
  const auto s = lower(trim(text));
  if (s == "band") return MadSource::Band;
  if (s == "first-level") return MadSource::FirstLevel;
  throw ValidationError("unknown MAD source '" + std::string(text) + "' (expected band or first-level)");
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

OutputFormat parse_output_format(std::string_view text) {
  const auto s = lower(trim(text));
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw ValidationError("unknown output format '" + std::string(text) + "' (expected csv or json)");
}

void PipelineConfig::validate() const {
  if (!(rate_hz > 0.0) || !std::isfinite(rate_hz)) throw ValidationError("rate must be positive");
  if (wavelet_order < kMinDaubechiesOrder || wavelet_order > kMaxDaubechiesOrder) {
    throw ValidationError("wavelet order must be in [1, 10]");
  }
  if (depth < 1 || depth > 16) throw ValidationError("depth must be in [1, 16]");
  band_nodes(lf_band, depth, rate_hz);
  band_nodes(hf_band, depth, rate_hz);
}

std::vector<ManifestEntry> parse_manifest(std::string_view text) {
  std::vector<ManifestEntry> entries;
  bool header_seen = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    ++line_no;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_csv_line(line);
    if (!header_seen) {
      if (fields.size() != 3 || lower(fields[0]) != "path" || lower(fields[1]) != "subject_id" ||
          lower(fields[2]) != "group") {
        throw ParseError(line_no, "manifest header must be 'path,subject_id,group'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 3) throw ParseError(line_no, "expected 3 fields, got " + std::to_string(fields.size()));
    if (fields[0].empty()) throw ParseError(line_no, "empty path");
    ManifestEntry e;
    e.path = fields[0];
    e.subject_id = fields[1].empty() ? std::filesystem::path(fields[0]).stem().string() : fields[1];
    try {
      e.group = parse_group(fields[2]);
    } catch (const ValidationError& err) {
      throw ParseError(line_no, err.what());
    }
    entries.push_back(std::move(e));
  }
  if (!header_seen) throw ParseError(1, "manifest is empty");
  return entries;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest) {
  auto entries = parse_manifest(read_text_file(manifest));
  const auto base = manifest.parent_path();
  for (auto& e : entries) {
    const std::filesystem::path p(e.path);
    if (p.is_relative()) e.path = (base / p).lexically_normal().string();
  }
  return entries;
}

bool RunReport::all_ok() const {
  const bool recordings_ok =
      std::all_of(recordings.begin(), recordings.end(), [](const RecordingResult& r) { return r.ok(); });
  const bool stats_ok = std::all_of(anova.begin(), anova.end(), [](const AnovaResult& a) { return a.table.has_value(); });
  return recordings_ok && stats_ok;
}

RecordingResult analyze_tachogram(std::span<const TachogramPoint> points, std::string subject_id, Group group,
                                  const PipelineConfig& config) {
  RecordingResult r;
  r.subject_id = std::move(subject_id);
  r.group = group;
  try {
    config.validate();
    UniformSignal signal = resample_cubic_spline(points, config.rate_hz);
    if (config.detrend) signal = remove_mean(std::move(signal));
    signal = truncate_to_dyadic(std::move(signal), config.depth);
    r.samples_used = signal.samples.size();

    const QuadFilterBank bank = daubechies_filters(config.wavelet_order);
    const WpTree tree = wpt_decompose(signal, config.depth, bank);

    auto split_band = [&](Band band, FrequencyRange range) {
      const auto leaves = band_nodes(range, config.depth, config.rate_hz);
      const BandCoefficients coeffs = gather_band(tree, band, leaves);
      const Threshold t = config.mad_source == MadSource::Band ? compute_threshold(coeffs.values)
                                                               : compute_threshold(coeffs.values, tree.node(1, 1));
      return split_coefficients(coeffs, t);
    };
    r.lf = split_band(Band::LF, config.lf_band);
    r.hf = split_band(Band::HF, config.hf_band);
    r.features = extract_features(*r.lf, *r.hf, r.subject_id, r.group);
  } catch (const std::exception& e) {
    r.error = e.what();
    r.features.reset();
  }
  return r;
}

RecordingResult analyze_series(const RRSeries& series, const PipelineConfig& config) {
  try {
    const auto points = rr_to_tachogram(series);
    return analyze_tachogram(points, series.subject_id, series.group, config);
  } catch (const std::exception& e) {
    RecordingResult r;
    r.subject_id = series.subject_id;
    r.group = series.group;
    r.error = e.what();
    return r;
  }
}

double feature_value(const FeatureVector& f, std::string_view name) {
  if (name == "STDLF") return f.std_lf;
  if (name == "MEANLF") return f.mean_lf;
  if (name == "STDHF") return f.std_hf;
  if (name == "MEANHF") return f.mean_hf;
  if (name == "E_LF") return f.e_lf;
  if (name == "E_HF") return f.e_hf;
  if (name == "R_E") return f.r_e;
  throw ValidationError("unknown feature '" + std::string(name) + "'");
}

AnovaResult run_group_anova(std::span<const RecordingResult> recordings, std::string name,
                            std::span<const std::string> feature_names, bool standardize) {
  AnovaResult out;
  out.name = std::move(name);
  out.features.assign(feature_names.begin(), feature_names.end());

  std::map<Group, std::vector<const FeatureVector*>> by_group;
  for (const auto& r : recordings) {
    if (r.ok() && r.features && r.group != Group::Unlabeled) by_group[r.group].push_back(&*r.features);
  }
  for (auto& [g, members] : by_group) {
    std::sort(members.begin(), members.end(),
              [](const FeatureVector* a, const FeatureVector* b) { return a->subject_id < b->subject_id; });
    out.groups.push_back(g);
  }

  if (out.features.size() < 2) {
    out.skipped_reason = "need at least 2 features";
    return out;
  }
  if (by_group.size() < 2) {
    out.skipped_reason = "insufficient design: need at least 2 labeled groups with completed recordings, have " +
                         std::to_string(by_group.size());
    return out;
  }
  const std::size_t reps = by_group.begin()->second.size();
  for (const auto& [g, members] : by_group) {
    if (members.size() != reps) {
      out.skipped_reason = "unbalanced design: group sizes differ";
      return out;
    }
  }
  if (reps < 2) {
    out.skipped_reason = "insufficient design: need at least 2 subjects per group";
    return out;
  }
  out.replicates = reps;

  std::vector<std::vector<std::vector<double>>> cells;
  for (const auto& [g, members] : by_group) {
    auto& row = cells.emplace_back();
    for (const auto& feature : out.features) {
      auto& cell = row.emplace_back();
      for (const FeatureVector* f : members) cell.push_back(feature_value(*f, feature));
    }
  }
  if (standardize) {
    for (std::size_t c = 0; c < out.features.size(); ++c) {
      std::vector<double> column;
      for (const auto& row : cells) column.insert(column.end(), row[c].begin(), row[c].end());
      const double m = mean(column);
      const double s = population_std(column);
      for (auto& row : cells) {
        for (double& v : row[c]) v = s > 0.0 ? (v - m) / s : v - m;
      }
    }
  }
  try {
    out.table = anova_two_way(FactorialData::from_cells(cells));
  } catch (const Error& e) {
    out.skipped_reason = e.what();
  }
  return out;
}

RunReport run_pipeline(std::span<const ManifestEntry> manifest, const PipelineConfig& config) {
  if (manifest.empty()) throw ValidationError("manifest lists no recordings");
  config.validate();

  RunReport report;
  report.tool_version = HRVWP_VERSION;
  report.config = config;
  report.recordings.resize(manifest.size());

  const auto count = static_cast<long long>(manifest.size());
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    const ManifestEntry& entry = manifest[static_cast<std::size_t>(i)];
    RecordingResult r;
    try {
      const std::string text = read_text_file(entry.path);
      RRSeries series = parse_rr_file(text, detect_rr_format(text));
      series.subject_id = entry.subject_id;
      series.group = entry.group;
      r = analyze_series(series, config);
    } catch (const std::exception& e) {
      r.subject_id = entry.subject_id;
      r.group = entry.group;
      r.error = e.what();
    }
    r.path = entry.path;
    report.recordings[static_cast<std::size_t>(i)] = std::move(r);
  }

  std::sort(report.recordings.begin(), report.recordings.end(), [](const RecordingResult& a, const RecordingResult& b) {
    return std::tie(a.subject_id, a.path) < std::tie(b.subject_id, b.path);
  });

  const std::vector<std::string> std_mean(kStdMeanFeatures.begin(), kStdMeanFeatures.end());
  const std::vector<std::string> energy(kEnergyFeatures.begin(), kEnergyFeatures.end());
  report.anova.push_back(run_group_anova(report.recordings, "std_mean", std_mean, config.standardize_anova));
  report.anova.push_back(run_group_anova(report.recordings, "energy", energy, config.standardize_anova));
  return report;
}

RunReport run_pipeline(const std::filesystem::path& manifest, const PipelineConfig& config) {
  const auto entries = read_manifest(manifest);
  return run_pipeline(std::span<const ManifestEntry>(entries), config);
}

}  // namespace hrvwp
