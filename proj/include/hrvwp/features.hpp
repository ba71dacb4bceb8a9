#pragma once

#include <span>
#include <string>

#include "hrvwp/ingest.hpp"
#include "hrvwp/threshold.hpp"

namespace hrvwp {

/// Per-recording features of the background-variability components.
/// Standard deviations use the population divisor n.
struct FeatureVector {
  std::string subject_id;
  Group group = Group::Unlabeled;
  double std_lf = 0.0;
  double mean_lf = 0.0;
  double std_hf = 0.0;
  double mean_hf = 0.0;
  double e_lf = 0.0;
  double e_hf = 0.0;
  double r_e = 0.0;  ///< e_lf / e_hf

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Sum of squares; 0 for an empty vector.
double band_energy(std::span<const double> coeffs);

double mean(std::span<const double> values);

/// Population standard deviation (divisor n), two-pass.
double population_std(std::span<const double> values);

/// Throws FeatureError if either background vector is empty or E_HF is 0.
FeatureVector extract_features(const BandSplit& lf, const BandSplit& hf, std::string subject_id, Group group);

}  // namespace hrvwp
