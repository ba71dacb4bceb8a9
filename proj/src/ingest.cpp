#include "hrvwp/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>

#include "hrvwp/errors.hpp"

namespace hrvwp {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (std::isspace(static_cast<unsigned char>(line[i])) || line[i] == ',')) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != ',') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

double parse_number(std::string_view token, std::size_t line_no) {
  double value = 0.0;
  const char* end = token.data() + token.size();
  // from_chars rejects a leading '+', which some exporters emit.
  const char* begin = token.data();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw ParseError(line_no, "not a number: '" + std::string(token) + "'");
  }
  return value;
}

// Calls fn(line_no, fields) for every data line.
template <typename Fn>
void for_each_data_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    const auto line = trim(raw);
    if (!line.empty() && line.front() != '#') {
      if (!fn(line_no, split_fields(line))) return;
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

}  // namespace

std::string_view to_string(Group g) {
  switch (g) {
    case Group::Control: return "control";
    case Group::VT: return "vt";
    case Group::VF: return "vf";
    case Group::Unlabeled: return "unlabeled";
  }
  return "unlabeled";
}

Group parse_group(std::string_view text) {
  const auto s = lower(trim(text));
  if (s == "control") return Group::Control;
  if (s == "vt") return Group::VT;
  if (s == "vf") return Group::VF;
  if (s == "unlabeled" || s.empty()) return Group::Unlabeled;
  throw ValidationError("unknown group '" + std::string(text) + "'");
}

void validate(const RRSeries& series) {
  if (series.intervals_ms.size() < 2) {
    throw ValidationError("RR series needs at least 2 intervals, got " +
                          std::to_string(series.intervals_ms.size()));
  }
  for (std::size_t i = 0; i < series.intervals_ms.size(); ++i) {
    const double v = series.intervals_ms[i];
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError("RR interval " + std::to_string(i + 1) + " is not positive");
    }
  }
}

RRSeries parse_rr_file(std::string_view text, RrFormat format) {
  const std::size_t expected = format == RrFormat::OneColumnMs ? 1 : 2;
  RRSeries series;
  for_each_data_line(text, [&](std::size_t line_no, const std::vector<std::string_view>& fields) {
    if (fields.size() != expected) {
      throw ParseError(line_no, "expected " + std::to_string(expected) + " field(s), got " +
                                    std::to_string(fields.size()));
    }
    // Both columns must be numeric even though only the RR value is kept.
    double rr = 0.0;
    for (const auto& f : fields) rr = parse_number(f, line_no);
    series.intervals_ms.push_back(rr);
    return true;
  });
  validate(series);
  return series;
}

RrFormat detect_rr_format(std::string_view text) {
  std::size_t count = 0;
  for_each_data_line(text, [&](std::size_t, const std::vector<std::string_view>& fields) {
    count = fields.size();
    return false;
  });
  return count == 2 ? RrFormat::TwoColumnTimeMs : RrFormat::OneColumnMs;
}

std::vector<TachogramPoint> rr_to_tachogram(const RRSeries& series) {
  validate(series);
  std::vector<TachogramPoint> points;
  points.reserve(series.intervals_ms.size());
  double elapsed_ms = 0.0;
  for (double rr : series.intervals_ms) {
    elapsed_ms += rr;
    points.push_back({elapsed_ms / 1000.0, rr});
  }
  return points;
}

NaturalCubicSpline::NaturalCubicSpline(std::span<const double> knots_t, std::span<const double> knots_v)
    : t_(knots_t.begin(), knots_t.end()), a_(knots_v.begin(), knots_v.end()) {
  if (t_.size() != a_.size()) throw ValidationError("spline knot time/value length mismatch");
  if (t_.size() < 2) throw ValidationError("spline needs at least 2 knots");
  for (std::size_t i = 1; i < t_.size(); ++i) {
    if (!(t_[i] > t_[i - 1])) {
      throw ValidationError("spline knot times must be strictly increasing (index " +
                            std::to_string(i) + ")");
    }
  }

  const std::size_t n = t_.size() - 1;  // segments
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = t_[i + 1] - t_[i];

  // Tridiagonal solve for c = S''/2 with c_0 = c_n = 0.
  std::vector<double> mu(n + 1, 0.0), z(n + 1, 0.0);
  c_.assign(n + 1, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double alpha = 3.0 / h[i] * (a_[i + 1] - a_[i]) - 3.0 / h[i - 1] * (a_[i] - a_[i - 1]);
    const double l = 2.0 * (t_[i + 1] - t_[i - 1]) - h[i - 1] * mu[i - 1];
    mu[i] = h[i] / l;
    z[i] = (alpha - h[i - 1] * z[i - 1]) / l;
  }
  b_.assign(n, 0.0);
  d_.assign(n, 0.0);
  for (std::size_t j = n; j-- > 0;) {
    c_[j] = z[j] - mu[j] * c_[j + 1];
    b_[j] = (a_[j + 1] - a_[j]) / h[j] - h[j] * (c_[j + 1] + 2.0 * c_[j]) / 3.0;
    d_[j] = (c_[j + 1] - c_[j]) / (3.0 * h[j]);
  }
}

double NaturalCubicSpline::operator()(double t) const {
  if (t >= t_.back()) return a_.back();
  if (t <= t_.front()) return a_.front();
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const auto seg = static_cast<std::size_t>(it - t_.begin()) - 1;
  const double dt = t - t_[seg];
  return a_[seg] + dt * (b_[seg] + dt * (c_[seg] + dt * d_[seg]));
}

UniformSignal resample_cubic_spline(std::span<const TachogramPoint> points, double rate_hz) {
  if (!(rate_hz > 0.0) || !std::isfinite(rate_hz)) throw ValidationError("sampling rate must be positive");
  if (points.size() < 2) throw ValidationError("resampling needs at least 2 points");

  std::vector<double> t(points.size()), v(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    t[i] = points[i].time_s;
    v[i] = points[i].value_ms;
  }
  const NaturalCubicSpline spline(t, v);

  const double span = t.back() - t.front();
  // The relative slack keeps a knot that lands on the grid from being lost to rounding.
  const auto count = static_cast<std::size_t>(std::floor(span * rate_hz * (1.0 + 1e-12))) + 1;
  if (count < 2) throw ValidationError("sampling rate too low: fewer than 2 samples fit in the series span");

  UniformSignal out;
  out.rate_hz = rate_hz;
  out.t0_s = t.front();
  out.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double ti = std::min(t.front() + static_cast<double>(i) / rate_hz, t.back());
    out.samples[i] = spline(ti);
  }
  return out;
}

UniformSignal truncate_to_dyadic(UniformSignal signal, int depth) {
  if (depth < 0 || depth > 30) throw ValidationError("decomposition depth out of range");
  const std::size_t block = std::size_t{1} << depth;
  const std::size_t keep = (signal.samples.size() / block) * block;
  if (keep == 0) {
    throw ValidationError("signal has " + std::to_string(signal.samples.size()) +
                          " samples; depth " + std::to_string(depth) + " needs at least " +
                          std::to_string(block));
  }
  signal.samples.resize(keep);
  return signal;
}

UniformSignal remove_mean(UniformSignal signal) {
  if (signal.samples.empty()) return signal;
  const double mean = std::accumulate(signal.samples.begin(), signal.samples.end(), 0.0) /
                      static_cast<double>(signal.samples.size());
  for (double& s : signal.samples) s -= mean;
  return signal;
}

}  // namespace hrvwp
