#pragma once

// Adaptive local threshold and the background/significant split of a band's
// packet coefficients.

#include <cstddef>
#include <span>
#include <vector>

#include "hrvwp/packet_tree.hpp"

namespace hrvwp {

/// Normal-distribution upper quartile; MAD / 0.6745 estimates sigma.
inline constexpr double kMadToSigma = 0.6745;

/// Where a band coefficient came from: frequency-ordered leaf index and
/// position inside that leaf.
struct CoeffSource {
  std::size_t node = 0;
  std::size_t offset = 0;

  friend bool operator==(const CoeffSource&, const CoeffSource&) = default;
};

/// A band's leaf coefficients concatenated in increasing frequency order.
struct BandCoefficients {
  Band band = Band::LF;
  std::vector<double> values;
  std::vector<CoeffSource> sources;  ///< empty, or one entry per value
};

BandCoefficients gather_band(const WpTree& tree, Band band, std::span<const std::size_t> leaves);

/// Median; even lengths average the two middle order statistics.
double median(std::span<const double> values);

/// Median absolute deviation from the median.
double mad(std::span<const double> values);

/// MAD / 0.6745.
double noise_scale(std::span<const double> coeffs);

struct Threshold {
  double lambda = 0.0;
  double h = 0.0;
  std::size_t n = 0;
};

/// lambda = noise_scale(coeffs) * sqrt(2 ln n), n = coeffs.size().
Threshold compute_threshold(std::span<const double> coeffs);

/// As above, but h is estimated from `scale_source` (e.g. the finest detail
/// node) while n stays the band length.
Threshold compute_threshold(std::span<const double> coeffs, std::span<const double> scale_source);

struct BandSplit {
  Band band = Band::LF;
  double lambda = 0.0;
  double h = 0.0;
  std::size_t n = 0;
  std::vector<double> background;  ///< |c| <= lambda
  std::vector<double> significant;  ///< |c| > lambda
  std::vector<CoeffSource> background_source;
  std::vector<CoeffSource> significant_source;

  friend bool operator==(const BandSplit&, const BandSplit&) = default;
};

/// Partitions by magnitude; ties go to background. Values are kept as-is
/// (no shrinkage). Missing sources default to (node 0, offset i).
BandSplit split_coefficients(const BandCoefficients& coeffs, const Threshold& threshold);

}  // namespace hrvwp
