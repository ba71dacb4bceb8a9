#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>

#include "hrvwp/errors.hpp"
#include "hrvwp/wavelet.hpp"

namespace hrvwp {

namespace {

using cld = std::complex<long double>;

long double binomial(int n, int k) {
  long double r = 1.0L;
  for (int i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  return r;
}

cld eval_poly(const std::vector<long double>& ascending, cld x) {
  cld acc = 0.0L;
  for (auto it = ascending.rbegin(); it != ascending.rend(); ++it) acc = acc * x + *it;
  return acc;
}

cld eval_derivative(const std::vector<long double>& ascending, cld x) {
  cld acc = 0.0L;
  for (std::size_t k = ascending.size(); k-- > 1;) acc = acc * x + static_cast<long double>(k) * ascending[k];
  return acc;
}

// Durand-Kerner iteration followed by a Newton polish on the original polynomial.
std::vector<cld> polynomial_roots(const std::vector<long double>& ascending) {
  const std::size_t degree = ascending.size() - 1;
  if (degree == 0) return {};
  std::vector<long double> monic(ascending);
  for (auto& c : monic) c /= ascending.back();

  std::vector<cld> roots(degree);
  const cld seed(0.4L, 0.9L);
  roots[0] = 1.0L;
  for (std::size_t i = 1; i < degree; ++i) roots[i] = roots[i - 1] * seed;

  for (int iter = 0; iter < 2000; ++iter) {
    long double max_step = 0.0L;
    for (std::size_t i = 0; i < degree; ++i) {
      cld denom = 1.0L;
      for (std::size_t j = 0; j < degree; ++j) {
        if (j != i) denom *= roots[i] - roots[j];
      }
      const cld step = eval_poly(monic, roots[i]) / denom;
      roots[i] -= step;
      max_step = std::max(max_step, std::abs(step));
    }
    if (max_step < 1e-18L) break;
  }
  for (auto& r : roots) {
    for (int iter = 0; iter < 8; ++iter) {
      const cld d = eval_derivative(ascending, r);
      if (std::abs(d) == 0.0L) break;
      r -= eval_poly(ascending, r) / d;
    }
  }
  return roots;
}

std::vector<cld> multiply(const std::vector<cld>& a, const std::vector<cld>& b) {
  std::vector<cld> out(a.size() + b.size() - 1, cld(0.0L));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

}  // namespace

QuadFilterBank daubechies_filters(int order) {
  if (order < kMinDaubechiesOrder || order > kMaxDaubechiesOrder) {
    throw ValidationError("Daubechies order must be in [" + std::to_string(kMinDaubechiesOrder) + ", " +
                          std::to_string(kMaxDaubechiesOrder) + "], got " + std::to_string(order));
  }

  // |H(w)|^2 = cos^{2p}(w/2) P(sin^2(w/2)), P(y) = sum_k C(p-1+k, k) y^k.
  std::vector<long double> p_coeffs(static_cast<std::size_t>(order));
  for (int k = 0; k < order; ++k) p_coeffs[static_cast<std::size_t>(k)] = binomial(order - 1 + k, k);

  // Each root y of P maps to a reciprocal pair z, 1/z through y = (2 - z - 1/z)/4;
  // keeping the root inside the unit circle gives the minimum-phase factor.
  std::vector<cld> poly{cld(1.0L)};
  for (const cld& y : polynomial_roots(p_coeffs)) {
    const cld w = 1.0L - 2.0L * y;
    const cld s = std::sqrt(w * w - 1.0L);
    const cld big = std::abs(w + s) >= std::abs(w - s) ? w + s : w - s;
    const cld inside = 1.0L / big;
    poly = multiply(poly, {-inside, cld(1.0L)});
  }
  for (int k = 0; k < order; ++k) poly = multiply(poly, {cld(1.0L), cld(1.0L)});

  std::vector<long double> taps(poly.size());
  std::transform(poly.begin(), poly.end(), taps.begin(), [](const cld& c) { return c.real(); });
  const long double sum = std::accumulate(taps.begin(), taps.end(), 0.0L);
  const long double scale = std::sqrt(2.0L) / sum;

  QuadFilterBank bank;
  bank.order = order;
  const std::size_t len = taps.size();
  bank.dec_lo.resize(len);
  bank.dec_hi.resize(len);
  for (std::size_t k = 0; k < len; ++k) bank.dec_lo[k] = static_cast<double>(taps[k] * scale);
  for (std::size_t k = 0; k < len; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    bank.dec_hi[k] = sign * bank.dec_lo[len - 1 - k];
  }
  bank.rec_lo.assign(bank.dec_lo.rbegin(), bank.dec_lo.rend());
  bank.rec_hi.assign(bank.dec_hi.rbegin(), bank.dec_hi.rend());
  return bank;
}

}  // namespace hrvwp
