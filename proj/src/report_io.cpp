#include "hrvwp/report_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>

#include "hrvwp/errors.hpp"

namespace hrvwp {

namespace {

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_simple(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

double parse_double(const std::string& s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line_no, "not a number: '" + s + "'");
  }
}

Band parse_band(const std::string& s) {
  if (s == "LF") return Band::LF;
  if (s == "HF") return Band::HF;
  throw ValidationError("unknown band '" + s + "'");
}

AnovaSource parse_source(const std::string& s) {
  for (auto src : {AnovaSource::Columns, AnovaSource::Rows, AnovaSource::Interaction, AnovaSource::Error,
                   AnovaSource::Total}) {
    if (to_string(src) == s) return src;
  }
  throw ValidationError("unknown ANOVA source '" + s + "'");
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> optional_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

Json sources_to_json(const std::vector<CoeffSource>& sources) {
  Json arr = Json::array();
  for (const auto& s : sources) arr.push_back({s.node, s.offset});
  return arr;
}

std::vector<CoeffSource> sources_from_json(const Json& j) {
  std::vector<CoeffSource> out;
  for (const auto& s : j) out.push_back({s.at(0).get<std::size_t>(), s.at(1).get<std::size_t>()});
  return out;
}

Json split_to_json(const BandSplit& s, bool with_coefficients) {
  Json j;
  j["band"] = std::string(to_string(s.band));
  j["lambda"] = s.lambda;
  j["h"] = s.h;
  j["n"] = s.n;
  j["background_count"] = s.background.size();
  j["significant_count"] = s.significant.size();
  j["background_energy"] = band_energy(s.background);
  j["significant_energy"] = band_energy(s.significant);
  if (with_coefficients) {
    j["background"] = s.background;
    j["significant"] = s.significant;
    j["background_source"] = sources_to_json(s.background_source);
    j["significant_source"] = sources_to_json(s.significant_source);
  }
  return j;
}

BandSplit split_from_json(const Json& j) {
  BandSplit s;
  s.band = parse_band(j.at("band").get<std::string>());
  s.lambda = j.at("lambda").get<double>();
  s.h = j.at("h").get<double>();
  s.n = j.at("n").get<std::size_t>();
  s.background = j.at("background").get<std::vector<double>>();
  s.significant = j.at("significant").get<std::vector<double>>();
  s.background_source = sources_from_json(j.at("background_source"));
  s.significant_source = sources_from_json(j.at("significant_source"));
  return s;
}

Json features_to_json(const FeatureVector& f) {
  Json j;
  j["subject_id"] = f.subject_id;
  j["group"] = std::string(to_string(f.group));
  j["STDLF"] = f.std_lf;
  j["MEANLF"] = f.mean_lf;
  j["STDHF"] = f.std_hf;
  j["MEANHF"] = f.mean_hf;
  j["E_LF"] = f.e_lf;
  j["E_HF"] = f.e_hf;
  j["R_E"] = f.r_e;
  return j;
}

FeatureVector features_from_json(const Json& j) {
  FeatureVector f;
  f.subject_id = j.at("subject_id").get<std::string>();
  f.group = parse_group(j.at("group").get<std::string>());
  f.std_lf = j.at("STDLF").get<double>();
  f.mean_lf = j.at("MEANLF").get<double>();
  f.std_hf = j.at("STDHF").get<double>();
  f.mean_hf = j.at("MEANHF").get<double>();
  f.e_lf = j.at("E_LF").get<double>();
  f.e_hf = j.at("E_HF").get<double>();
  f.r_e = j.at("R_E").get<double>();
  return f;
}

Json table_to_json(const AnovaTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json j;
    j["source"] = std::string(to_string(r.source));
    j["SS"] = r.ss;
    j["df"] = r.df;
    j["MS"] = optional_number(r.ms);
    j["F"] = optional_number(r.f);
    j["p"] = optional_number(r.p);
    rows.push_back(std::move(j));
  }
  return rows;
}

AnovaTable table_from_json(const Json& j) {
  AnovaTable t;
  if (j.size() != t.rows.size()) throw ValidationError("ANOVA table must have 5 rows");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = j.at(i);
    t.rows[i] = {parse_source(r.at("source").get<std::string>()), r.at("SS").get<double>(), r.at("df").get<int>(),
                 optional_from(r.at("MS")), optional_from(r.at("F")), optional_from(r.at("p"))};
  }
  return t;
}

Json recording_to_json(const RecordingResult& r, bool with_coefficients) {
  Json j;
  j["subject_id"] = r.subject_id;
  j["group"] = std::string(to_string(r.group));
  j["path"] = r.path;
  j["status"] = r.ok() ? "ok" : "failed";
  j["error"] = r.error;
  j["samples_used"] = r.samples_used;
  j["features"] = r.features ? features_to_json(*r.features) : Json(nullptr);
  j["lf"] = r.lf ? split_to_json(*r.lf, with_coefficients) : Json(nullptr);
  j["hf"] = r.hf ? split_to_json(*r.hf, with_coefficients) : Json(nullptr);
  return j;
}

RecordingResult recording_from_json(const Json& j) {
  RecordingResult r;
  r.subject_id = j.at("subject_id").get<std::string>();
  r.group = parse_group(j.at("group").get<std::string>());
  r.path = j.at("path").get<std::string>();
  r.error = j.at("error").get<std::string>();
  r.samples_used = j.at("samples_used").get<std::size_t>();
  if (!j.at("features").is_null()) r.features = features_from_json(j.at("features"));
  if (!j.at("lf").is_null()) r.lf = split_from_json(j.at("lf"));
  if (!j.at("hf").is_null()) r.hf = split_from_json(j.at("hf"));
  return r;
}

void write_file(const std::filesystem::path& path, const std::string& content,
                std::vector<std::filesystem::path>& written) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  out.close();
  if (!out) throw IoError("error writing '" + path.string() + "'");
  written.push_back(path);
}

}  // namespace

Json config_to_json(const PipelineConfig& c) {
  Json j;
  j["rate_hz"] = c.rate_hz;
  j["wavelet"] = "db" + std::to_string(c.wavelet_order);
  j["wavelet_order"] = c.wavelet_order;
  j["depth"] = c.depth;
  j["boundary"] = "periodic";
  j["lf_band_hz"] = {c.lf_band.lo_hz, c.lf_band.hi_hz};
  j["hf_band_hz"] = {c.hf_band.lo_hz, c.hf_band.hi_hz};
  try {
    j["lf_nodes"] = band_nodes(c.lf_band, c.depth, c.rate_hz);
    j["hf_nodes"] = band_nodes(c.hf_band, c.depth, c.rate_hz);
  } catch (const ValidationError&) {
    j["lf_nodes"] = Json::array();
    j["hf_nodes"] = Json::array();
  }
  j["tie_policy"] = "background";
  j["mad_source"] = std::string(to_string(c.mad_source));
  j["std_divisor"] = "n";
  j["detrend"] = c.detrend;
  j["standardize_anova"] = c.standardize_anova;
  return j;
}

PipelineConfig config_from_json(const Json& j) {
  PipelineConfig c;
  c.rate_hz = j.at("rate_hz").get<double>();
  c.wavelet_order = j.at("wavelet_order").get<int>();
  c.depth = j.at("depth").get<int>();
  c.lf_band = {j.at("lf_band_hz").at(0).get<double>(), j.at("lf_band_hz").at(1).get<double>()};
  c.hf_band = {j.at("hf_band_hz").at(0).get<double>(), j.at("hf_band_hz").at(1).get<double>()};
  c.mad_source = parse_mad_source(j.at("mad_source").get<std::string>());
  c.detrend = j.at("detrend").get<bool>();
  c.standardize_anova = j.at("standardize_anova").get<bool>();
  return c;
}

Json anova_to_json(const AnovaResult& a) {
  Json j;
  j["name"] = a.name;
  j["features"] = a.features;
  Json groups = Json::array();
  for (Group g : a.groups) groups.push_back(std::string(to_string(g)));
  j["groups"] = groups;
  j["replicates"] = a.replicates;
  j["table"] = a.table ? table_to_json(*a.table) : Json(nullptr);
  j["skipped_reason"] = a.skipped_reason;
  return j;
}

AnovaResult anova_from_json(const Json& j) {
  AnovaResult a;
  a.name = j.at("name").get<std::string>();
  a.features = j.at("features").get<std::vector<std::string>>();
  for (const auto& g : j.at("groups")) a.groups.push_back(parse_group(g.get<std::string>()));
  a.replicates = j.at("replicates").get<std::size_t>();
  if (!j.at("table").is_null()) a.table = table_from_json(j.at("table"));
  a.skipped_reason = j.at("skipped_reason").get<std::string>();
  return a;
}

Json report_to_json(const RunReport& report) {
  Json j;
  j["tool_version"] = report.tool_version;
  j["config"] = config_to_json(report.config);
  Json recs = Json::array();
  for (const auto& r : report.recordings) recs.push_back(recording_to_json(r, true));
  j["recordings"] = std::move(recs);
  Json anova = Json::array();
  for (const auto& a : report.anova) anova.push_back(anova_to_json(a));
  j["anova"] = std::move(anova);
  return j;
}

RunReport report_from_json(const Json& j) {
  RunReport report;
  report.tool_version = j.at("tool_version").get<std::string>();
  report.config = config_from_json(j.at("config"));
  for (const auto& r : j.at("recordings")) report.recordings.push_back(recording_from_json(r));
  for (const auto& a : j.at("anova")) report.anova.push_back(anova_from_json(a));
  return report;
}

std::string features_csv(const std::vector<FeatureVector>& features) {
  std::string out = "subject_id,group,STDLF,MEANLF,STDHF,MEANHF,E_LF,E_HF,R_E\n";
  for (const auto& f : features) {
    out += csv_escape(f.subject_id) + "," + std::string(to_string(f.group));
    for (double v : {f.std_lf, f.mean_lf, f.std_hf, f.mean_hf, f.e_lf, f.e_hf, f.r_e}) out += "," + fmt12(v);
    out += "\n";
  }
  return out;
}

std::vector<FeatureVector> parse_features_csv(const std::string& text) {
  const auto lines = data_lines(text);
  if (lines.empty() || lines.front() != "subject_id,group,STDLF,MEANLF,STDHF,MEANHF,E_LF,E_HF,R_E") {
    throw ParseError(1, "unexpected features header");
  }
  std::vector<FeatureVector> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_simple(lines[i]);
    if (fields.size() != 9) throw ParseError(i + 1, "expected 9 fields");
    FeatureVector f;
    f.subject_id = fields[0];
    f.group = parse_group(fields[1]);
    f.std_lf = parse_double(fields[2], i + 1);
    f.mean_lf = parse_double(fields[3], i + 1);
    f.std_hf = parse_double(fields[4], i + 1);
    f.mean_hf = parse_double(fields[5], i + 1);
    f.e_lf = parse_double(fields[6], i + 1);
    f.e_hf = parse_double(fields[7], i + 1);
    f.r_e = parse_double(fields[8], i + 1);
    out.push_back(std::move(f));
  }
  return out;
}

std::string anova_csv(const AnovaTable& table) {
  std::string out = "Source,SS,df,MS,F,p\n";
  for (const auto& r : table.rows) {
    out += std::string(to_string(r.source)) + "," + fmt12(r.ss) + "," + std::to_string(r.df);
    for (const auto& v : {r.ms, r.f, r.p}) out += "," + (v ? fmt12(*v) : std::string());
    out += "\n";
  }
  return out;
}

AnovaTable parse_anova_csv(const std::string& text) {
  const auto lines = data_lines(text);
  if (lines.size() != 6 || lines.front() != "Source,SS,df,MS,F,p") {
    throw ParseError(1, "ANOVA CSV must have the header and exactly 5 rows");
  }
  AnovaTable t;
  for (std::size_t i = 0; i < 5; ++i) {
    const auto fields = split_simple(lines[i + 1]);
    if (fields.size() != 6) throw ParseError(i + 2, "expected 6 fields");
    auto opt = [&](const std::string& s) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      return parse_double(s, i + 2);
    };
    t.rows[i] = {parse_source(fields[0]), parse_double(fields[1], i + 2), std::stoi(fields[2]), opt(fields[3]),
                 opt(fields[4]), opt(fields[5])};
    if (t.rows[i].source != static_cast<AnovaSource>(i)) throw ParseError(i + 2, "ANOVA rows out of order");
  }
  return t;
}

std::string bands_csv(const RecordingResult& recording) {
  std::string out = "band,node,offset,coefficient,component\n";
  for (const auto* split : {recording.lf ? &*recording.lf : nullptr, recording.hf ? &*recording.hf : nullptr}) {
    if (!split) continue;
    struct Row {
      CoeffSource src;
      double value;
      const char* component;
    };
    std::vector<Row> rows;
    for (std::size_t i = 0; i < split->background.size(); ++i)
      rows.push_back({split->background_source[i], split->background[i], "background"});
    for (std::size_t i = 0; i < split->significant.size(); ++i)
      rows.push_back({split->significant_source[i], split->significant[i], "significant"});
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
      return std::tie(a.src.node, a.src.offset) < std::tie(b.src.node, b.src.offset);
    });
    const std::string band(to_string(split->band));
    for (const auto& r : rows) {
      out += band + "," + std::to_string(r.src.node) + "," + std::to_string(r.src.offset) + "," + fmt12(r.value) +
             "," + r.component + "\n";
    }
  }
  return out;
}

std::string recordings_csv(const std::vector<RecordingResult>& recordings) {
  std::string out = "subject_id,group,path,status,error,samples_used";
  for (const char* b : {"lf", "hf"}) {
    for (const char* col : {"lambda", "h", "n", "background_count", "significant_count", "background_energy",
                            "significant_energy"}) {
      out += std::string(",") + b + "_" + col;
    }
  }
  out += "\n";
  for (const auto& r : recordings) {
    out += csv_escape(r.subject_id) + "," + std::string(to_string(r.group)) + "," + csv_escape(r.path) + "," +
           (r.ok() ? "ok" : "failed") + "," + csv_escape(r.error) + "," + std::to_string(r.samples_used);
    for (const auto& split : {r.lf, r.hf}) {
      if (split) {
        out += "," + fmt12(split->lambda) + "," + fmt12(split->h) + "," + std::to_string(split->n) + "," +
               std::to_string(split->background.size()) + "," + std::to_string(split->significant.size()) + "," +
               fmt12(band_energy(split->background)) + "," + fmt12(band_energy(split->significant));
      } else {
        out += ",,,,,,,";
      }
    }
    out += "\n";
  }
  return out;
}

std::string sanitize_file_stem(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    if (!ok) c = '_';
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

std::vector<std::filesystem::path> emit_report(const RunReport& report, OutputFormat format,
                                               const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());

  std::vector<std::filesystem::path> written;
  std::vector<FeatureVector> features;
  for (const auto& r : report.recordings) {
    if (r.features) features.push_back(*r.features);
  }

  if (format == OutputFormat::Csv) {
    write_file(dir / "features.csv", features_csv(features), written);
    write_file(dir / "recordings.csv", recordings_csv(report.recordings), written);
    for (const auto& a : report.anova) {
      if (a.table) write_file(dir / ("anova_" + a.name + ".csv"), anova_csv(*a.table), written);
    }
  } else {
    Json fj = Json::array();
    for (const auto& f : features) fj.push_back(features_to_json(f));
    write_file(dir / "features.json", fj.dump(2) + "\n", written);
    Json rj = Json::array();
    for (const auto& r : report.recordings) rj.push_back(recording_to_json(r, false));
    write_file(dir / "recordings.json", rj.dump(2) + "\n", written);
    for (const auto& a : report.anova) {
      if (a.table) write_file(dir / ("anova_" + a.name + ".json"), anova_to_json(a).dump(2) + "\n", written);
    }
  }
  for (const auto& r : report.recordings) {
    if (r.lf || r.hf) write_file(dir / ("bands_" + sanitize_file_stem(r.subject_id) + ".csv"), bands_csv(r), written);
  }
  write_file(dir / "run.json", report_to_json(report).dump(2) + "\n", written);
  return written;
}

RunReport read_report(const std::filesystem::path& run_json) {
  std::ifstream in(run_json);
  if (!in) throw IoError("cannot open '" + run_json.string() + "'");
  try {
    return report_from_json(Json::parse(in));
  } catch (const Json::exception& e) {
    throw ParseError(1, std::string("malformed report: ") + e.what());
  }
}

}  // namespace hrvwp
