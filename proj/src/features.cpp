#include "hrvwp/features.hpp"

#include <cmath>
#include <utility>

#include "hrvwp/errors.hpp"

namespace hrvwp {

double band_energy(std::span<const double> coeffs) {
  double e = 0.0;
  for (double c : coeffs) e += c * c;
  return e;
}

double mean(std::span<const double> values) {
  if (values.empty()) throw ValidationError("mean of an empty vector");
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double population_std(std::span<const double> values) {
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

FeatureVector extract_features(const BandSplit& lf, const BandSplit& hf, std::string subject_id, Group group) {
  if (lf.background.empty()) throw FeatureError("LF background component is empty");
  if (hf.background.empty()) throw FeatureError("HF background component is empty");

  FeatureVector f;
  f.subject_id = std::move(subject_id);
  f.group = group;
  f.mean_lf = mean(lf.background);
  f.std_lf = population_std(lf.background);
  f.mean_hf = mean(hf.background);
  f.std_hf = population_std(hf.background);
  f.e_lf = band_energy(lf.background);
  f.e_hf = band_energy(hf.background);
  if (!(f.e_hf > 0.0)) throw FeatureError("HF background energy is zero; E_LF/E_HF undefined");
  f.r_e = f.e_lf / f.e_hf;
  return f;
}

}  // namespace hrvwp
