#pragma once

// RR-interval ingestion: text parsing, tachogram construction and uniform
// resampling with a natural cubic spline.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hrvwp {

enum class Group { Control, VT, VF, Unlabeled };

std::string_view to_string(Group g);
/// Case-insensitive; accepts "control", "vt", "vf", "unlabeled" (or empty).
Group parse_group(std::string_view text);

enum class RrFormat {
  OneColumnMs,      ///< one RR interval in milliseconds per line
  TwoColumnTimeMs,  ///< "<time_s> <rr_ms>" per line; the time column is ignored
};

struct RRSeries {
  std::vector<double> intervals_ms;
  std::string subject_id;
  Group group = Group::Unlabeled;
};

/// Throws ValidationError unless every interval is positive and finite and
/// there are at least two of them.
void validate(const RRSeries& series);

/// Blank lines and lines whose first non-space character is '#' are skipped.
/// Fields may be separated by whitespace or commas.
RRSeries parse_rr_file(std::string_view text, RrFormat format);

/// Picks the format from the field count of the first data line.
RrFormat detect_rr_format(std::string_view text);

struct TachogramPoint {
  double time_s;
  double value_ms;
};

/// Beat k sits at the cumulative sum of intervals 1..k (seconds) and carries
/// interval k as its value.
std::vector<TachogramPoint> rr_to_tachogram(const RRSeries& series);

struct UniformSignal {
  std::vector<double> samples;
  double rate_hz = 0.0;
  double t0_s = 0.0;
};

/// Natural cubic spline through `points`, sampled at t0, t0 + 1/rate, ... up
/// to the last knot. The spline is never extrapolated.
UniformSignal resample_cubic_spline(std::span<const TachogramPoint> points, double rate_hz);

/// Drops the tail so the length is the largest multiple of 2^depth.
/// Throws ValidationError if fewer than 2^depth samples are available.
UniformSignal truncate_to_dyadic(UniformSignal signal, int depth);

UniformSignal remove_mean(UniformSignal signal);

/// Natural cubic spline stored as per-segment polynomial coefficients.
class NaturalCubicSpline {
 public:
  NaturalCubicSpline(std::span<const double> knots_t, std::span<const double> knots_v);

  double operator()(double t) const;

  double front() const { return t_.front(); }
  double back() const { return t_.back(); }

 private:
  std::vector<double> t_;
  std::vector<double> a_, b_, c_, d_;
};

}  // namespace hrvwp
