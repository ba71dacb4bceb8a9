#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "hrvwp/errors.hpp"
#include "hrvwp/pipeline.hpp"
#include "hrvwp/report_io.hpp"
#include "test_support.hpp"

using namespace hrvwp;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("hrvwp_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_rr(const fs::path& path, const RRSeries& s, bool two_column = false) {
  std::ofstream out(path);
  out << "# synthetic\n";
  double t = 0.0;
  for (double rr : s.intervals_ms) {
    t += rr / 1000.0;
    if (two_column) out << t << " ";
    out << rr << "\n";
  }
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 3 groups x `per_group` subjects, files written under dir.
std::vector<ManifestEntry> make_cohort(const fs::path& dir, std::size_t per_group) {
  std::vector<ManifestEntry> m;
  const Group groups[] = {Group::Control, Group::VT, Group::VF};
  std::uint64_t seed = 1;
  for (Group g : groups) {
    for (std::size_t i = 0; i < per_group; ++i, ++seed) {
      const std::string id = std::string(to_string(g)) + "_" + std::to_string(i);
      const double hf = g == Group::Control ? 25.0 : g == Group::VT ? 12.0 : 6.0;
      write_rr(dir / (id + ".txt"), testing::synthetic_rr(1000, seed, 780.0, 30.0, hf), seed % 2 == 0);
      m.push_back({(dir / (id + ".txt")).string(), id, g});
    }
  }
  return m;
}

}  // namespace

TEST_CASE("manifest parsing") {
  const auto m = parse_manifest("path,subject_id,group\n# comment\na.txt, s1 ,Control\nb.txt,s2,vt\n\nc.txt,,\n");
  REQUIRE(m.size() == 3);
  CHECK(m[0].path == "a.txt");
  CHECK(m[0].subject_id == "s1");
  CHECK(m[0].group == Group::Control);
  CHECK(m[1].group == Group::VT);
  CHECK(m[2].subject_id == "c");
  CHECK(m[2].group == Group::Unlabeled);
  CHECK_THROWS_AS(parse_manifest("file,id,label\n"), ParseError);
  CHECK_THROWS_AS(parse_manifest("path,subject_id,group\na.txt,s1\n"), ParseError);
  CHECK_THROWS_AS(parse_manifest("path,subject_id,group\na.txt,s1,afib\n"), ParseError);
  CHECK_THROWS_AS(parse_manifest(""), ParseError);
  CHECK(parse_manifest("path,subject_id,group\n").empty());
}

TEST_CASE("config validation and defaults") {
  PipelineConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(config_to_json(c).dump() ==
        R"({"rate_hz":4.0,"wavelet":"db4","wavelet_order":4,"depth":6,"boundary":"periodic",)"
        R"("lf_band_hz":[0.03125,0.15625],"hf_band_hz":[0.15625,0.40625],"lf_nodes":[1,2,3,4],)"
        R"("hf_nodes":[5,6,7,8,9,10,11,12],"tie_policy":"background","mad_source":"band","std_divisor":"n",)"
        R"("detrend":false,"standardize_anova":false})");
  c.depth = 1;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = PipelineConfig{};
  c.wavelet_order = 0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = PipelineConfig{};
  c.rate_hz = -4;
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("analyze_series on a synthetic recording") {
  auto s = testing::synthetic_rr(1024, 3);
  s.subject_id = "x";
  s.group = Group::VT;
  const PipelineConfig cfg;
  const auto r = analyze_series(s, cfg);
  REQUIRE(r.ok());
  REQUIRE(r.features);
  CHECK(r.samples_used % 64 == 0);
  CHECK(r.lf->n == 4 * r.samples_used / 64);
  CHECK(r.hf->n == 8 * r.samples_used / 64);
  CHECK(r.features->e_lf > 0.0);
  CHECK(r.features->r_e * r.features->e_hf == doctest::Approx(r.features->e_lf).epsilon(1e-12));
  for (const auto& src : r.lf->background_source) CHECK((src.node >= 1 && src.node <= 4));
  for (const auto& src : r.hf->significant_source) CHECK((src.node >= 5 && src.node <= 12));

  SUBCASE("first-level MAD source changes h but not n") {
    PipelineConfig fl;
    fl.mad_source = MadSource::FirstLevel;
    const auto q = analyze_series(s, fl);
    REQUIRE(q.ok());
    CHECK(q.lf->n == r.lf->n);
    CHECK(q.lf->h == q.hf->h);
    CHECK(q.lf->h != r.lf->h);
  }
  SUBCASE("detrend leaves band coefficients nearly unchanged") {
    PipelineConfig dt;
    dt.detrend = true;
    const auto q = analyze_series(s, dt);
    REQUIRE(q.ok());
    CHECK(q.features->e_hf == doctest::Approx(r.features->e_hf).epsilon(1e-6));
  }
  SUBCASE("too short for the depth") {
    auto shorty = testing::synthetic_rr(10, 3);
    const auto q = analyze_series(shorty, cfg);
    CHECK_FALSE(q.ok());
    CHECK_FALSE(q.features);
  }
}

TEST_CASE("single recording: features but no ANOVA") {
  const auto dir = fresh_dir("single");
  const auto cohort = make_cohort(dir, 1);
  const std::vector<ManifestEntry> one{cohort.front()};
  const auto report = run_pipeline(std::span<const ManifestEntry>(one), PipelineConfig{});
  REQUIRE(report.recordings.size() == 1);
  CHECK(report.recordings[0].ok());
  REQUIRE(report.anova.size() == 2);
  for (const auto& a : report.anova) {
    CHECK_FALSE(a.table);
    CHECK(a.skipped_reason.find("insufficient") != std::string::npos);
  }
  CHECK_FALSE(report.all_ok());
  fs::remove_all(dir);
}

TEST_CASE("3 groups x 3 subjects gives the 3/2/6/24/35 layout") {
  const auto dir = fresh_dir("cohort");
  const auto manifest = make_cohort(dir, 3);
  const auto report = run_pipeline(std::span<const ManifestEntry>(manifest), PipelineConfig{});
  CHECK(report.all_ok());
  const auto& a = report.anova[0];
  REQUIRE(a.table);
  CHECK(a.name == "std_mean");
  CHECK(a.replicates == 3);
  CHECK(a.groups == std::vector<Group>{Group::Control, Group::VT, Group::VF});
  const auto& t = *a.table;
  CHECK(t[AnovaSource::Columns].df == 3);
  CHECK(t[AnovaSource::Rows].df == 2);
  CHECK(t[AnovaSource::Interaction].df == 6);
  CHECK(t[AnovaSource::Error].df == 24);
  CHECK(t[AnovaSource::Total].df == 35);
  const auto& e = *report.anova[1].table;
  CHECK(e[AnovaSource::Columns].df == 2);
  CHECK(e[AnovaSource::Total].df == 26);

  SUBCASE("manifest order does not matter") {
    auto shuffled = manifest;
    std::mt19937 rng(5);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto again = run_pipeline(std::span<const ManifestEntry>(shuffled), PipelineConfig{});
    CHECK(report_to_json(again).dump() == report_to_json(report).dump());
  }
  SUBCASE("standardized ANOVA keeps df, changes SS") {
    PipelineConfig cfg;
    cfg.standardize_anova = true;
    const auto z = run_pipeline(std::span<const ManifestEntry>(manifest), cfg);
    REQUIRE(z.anova[0].table);
    CHECK((*z.anova[0].table)[AnovaSource::Total].ss == doctest::Approx(36.0).epsilon(1e-9));
  }
  SUBCASE("unbalanced groups are skipped") {
    auto fewer = manifest;
    fewer.pop_back();
    const auto u = run_pipeline(std::span<const ManifestEntry>(fewer), PipelineConfig{});
    CHECK_FALSE(u.anova[0].table);
    CHECK(u.anova[0].skipped_reason.find("unbalanced") != std::string::npos);
  }
  fs::remove_all(dir);
}

TEST_CASE("a missing file fails only its own row") {
  const auto dir = fresh_dir("missing");
  auto manifest = make_cohort(dir, 2);
  manifest.push_back({(dir / "nope.txt").string(), "ghost", Group::VF});
  const auto report = run_pipeline(std::span<const ManifestEntry>(manifest), PipelineConfig{});
  REQUIRE(report.recordings.size() == 7);
  std::size_t failed = 0;
  for (const auto& r : report.recordings) {
    if (!r.ok()) {
      ++failed;
      CHECK(r.subject_id == "ghost");
      CHECK(r.error.find("nope.txt") != std::string::npos);
    }
  }
  CHECK(failed == 1);
  CHECK_FALSE(report.all_ok());
  CHECK(report.anova[0].table);  // the completed recordings still form a balanced design
  fs::remove_all(dir);
}

TEST_CASE("manifest file with relative paths") {
  const auto dir = fresh_dir("relative");
  const auto cohort = make_cohort(dir, 2);
  {
    std::ofstream m(dir / "manifest.csv");
    m << "path,subject_id,group\n";
    for (const auto& e : cohort) m << fs::path(e.path).filename().string() << "," << e.subject_id << "," << to_string(e.group) << "\n";
  }
  const auto report = run_pipeline(dir / "manifest.csv", PipelineConfig{});
  CHECK(report.all_ok());
  {
    std::ofstream m(dir / "empty.csv");
    m << "path,subject_id,group\n";
  }
  CHECK_THROWS_AS(run_pipeline(dir / "empty.csv", PipelineConfig{}), ValidationError);
  CHECK_THROWS_AS(run_pipeline(dir / "absent.csv", PipelineConfig{}), IoError);
  fs::remove_all(dir);
}

TEST_CASE("emit_report writes every file and run.json round-trips") {
  const auto dir = fresh_dir("emit");
  const auto manifest = make_cohort(dir, 3);
  const auto report = run_pipeline(std::span<const ManifestEntry>(manifest), PipelineConfig{});

  for (OutputFormat fmt : {OutputFormat::Csv, OutputFormat::Json}) {
    const auto out = dir / ("out_" + std::string(to_string(fmt)));
    const auto files = emit_report(report, fmt, out);
    const std::string ext = fmt == OutputFormat::Csv ? ".csv" : ".json";
    CHECK(fs::exists(out / ("features" + ext)));
    CHECK(fs::exists(out / ("recordings" + ext)));
    CHECK(fs::exists(out / ("anova_std_mean" + ext)));
    CHECK(fs::exists(out / ("anova_energy" + ext)));
    CHECK(fs::exists(out / "bands_control_0.csv"));
    CHECK(fs::exists(out / "run.json"));
    CHECK(files.size() == 4 + 9 + 1);

    const auto back = read_report(out / "run.json");
    CHECK(back.recordings == report.recordings);
    CHECK(back.anova == report.anova);
    CHECK(back.tool_version == report.tool_version);
    CHECK(config_to_json(back.config) == config_to_json(report.config));
  }

  const auto csv_dir = dir / "out_csv";
  const auto anova_text = slurp(csv_dir / "anova_std_mean.csv");
  std::istringstream lines(anova_text);
  std::string line;
  std::vector<std::string> first_cols;
  while (std::getline(lines, line)) first_cols.push_back(line.substr(0, line.find(',')));
  CHECK(first_cols == std::vector<std::string>{"Source", "Columns", "Rows", "Interaction", "Error", "Total"});
  const auto parsed = parse_anova_csv(anova_text);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(parsed.rows[i].df == report.anova[0].table->rows[i].df);
    CHECK(parsed.rows[i].ss == doctest::Approx(report.anova[0].table->rows[i].ss).epsilon(1e-11));
  }

  const auto features = parse_features_csv(slurp(csv_dir / "features.csv"));
  REQUIRE(features.size() == 9);
  CHECK(features[0].subject_id == report.recordings[0].subject_id);
  CHECK(features[0].e_lf == doctest::Approx(report.recordings[0].features->e_lf).epsilon(1e-11));

  const auto bands = slurp(csv_dir / "bands_control_0.csv");
  CHECK(bands.rfind("band,node,offset,coefficient,component\n", 0) == 0);
  const auto& rec = *std::find_if(report.recordings.begin(), report.recordings.end(),
                                  [](const RecordingResult& r) { return r.subject_id == "control_0"; });
  const auto rows = static_cast<std::size_t>(std::count(bands.begin(), bands.end(), '\n')) - 1;
  CHECK(rows == rec.lf->n + rec.hf->n);
  CHECK(bands.find(",significant\n") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("empty feature list writes a header-only file") {
  CHECK(features_csv({}) == "subject_id,group,STDLF,MEANLF,STDHF,MEANHF,E_LF,E_HF,R_E\n");
  CHECK(parse_features_csv(features_csv({})).empty());
}

TEST_CASE("emit_report surfaces I/O errors with the path") {
  const auto dir = fresh_dir("io");
  { std::ofstream(dir / "blocker") << "x"; }
  RunReport empty;
  try {
    emit_report(empty, OutputFormat::Csv, dir / "blocker" / "sub");
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("blocker") != std::string::npos);
  }
  fs::remove_all(dir);
}

TEST_CASE("file stems are sanitized") {
  CHECK(sanitize_file_stem("a/b c") == "a_b_c");
  CHECK(sanitize_file_stem("..") == "_..");
  CHECK(sanitize_file_stem("rec-01.v2") == "rec-01.v2");
}
