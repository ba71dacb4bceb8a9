#include "hrvwp/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hrvwp/errors.hpp"

namespace hrvwp {

BandCoefficients gather_band(const WpTree& tree, Band band, std::span<const std::size_t> leaves) {
  BandCoefficients out;
  out.band = band;
  for (std::size_t leaf : leaves) {
    const auto coeffs = tree.leaf(leaf);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      out.values.push_back(coeffs[i]);
      out.sources.push_back({leaf, i});
    }
  }
  return out;
}

double median(std::span<const double> values) {
  if (values.empty()) throw ValidationError("median of an empty vector");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double mad(std::span<const double> values) {
  if (values.empty()) throw ValidationError("MAD of an empty vector");
  const double m = median(values);
  std::vector<double> dev(values.size());
  std::transform(values.begin(), values.end(), dev.begin(), [m](double x) { return std::abs(x - m); });
  return median(dev);
}

double noise_scale(std::span<const double> coeffs) { return mad(coeffs) / kMadToSigma; }

Threshold compute_threshold(std::span<const double> coeffs) { return compute_threshold(coeffs, coeffs); }

Threshold compute_threshold(std::span<const double> coeffs, std::span<const double> scale_source) {
  if (coeffs.empty()) throw ValidationError("threshold of an empty band");
  Threshold t;
  t.n = coeffs.size();
  t.h = noise_scale(scale_source);
  t.lambda = t.h * std::sqrt(2.0 * std::log(static_cast<double>(t.n)));
  return t;
}

BandSplit split_coefficients(const BandCoefficients& coeffs, const Threshold& threshold) {
  if (!(threshold.lambda >= 0.0) || !std::isfinite(threshold.lambda)) {
    throw ValidationError("threshold must be a non-negative finite number");
  }
  if (!coeffs.sources.empty() && coeffs.sources.size() != coeffs.values.size()) {
    throw ValidationError("band has " + std::to_string(coeffs.values.size()) + " values but " +
                          std::to_string(coeffs.sources.size()) + " sources");
  }
  BandSplit split;
  split.band = coeffs.band;
  split.lambda = threshold.lambda;
  split.h = threshold.h;
  split.n = coeffs.values.size();
  for (std::size_t i = 0; i < coeffs.values.size(); ++i) {
    const double c = coeffs.values[i];
    const CoeffSource src = coeffs.sources.empty() ? CoeffSource{0, i} : coeffs.sources[i];
    if (std::abs(c) <= threshold.lambda) {
      split.background.push_back(c);
      split.background_source.push_back(src);
    } else {
      split.significant.push_back(c);
      split.significant_source.push_back(src);
    }
  }
  return split;
}

}  // namespace hrvwp
