#include "hrvwp/wavelet.hpp"

#include <string>

#include "hrvwp/errors.hpp"

namespace hrvwp {

namespace kernels {

void analyze(const double* x, std::size_t n, const QuadFilterBank& bank, double* approx, double* detail) {
  const std::size_t len = bank.length();
  const double* lo = bank.dec_lo.data();
  const double* hi = bank.dec_hi.data();
  for (std::size_t out = 0; out < n / 2; ++out) {
    double a = 0.0;
    double d = 0.0;
    std::size_t idx = (2 * out) % n;
    for (std::size_t k = 0; k < len; ++k) {
      a += lo[k] * x[idx];
      d += hi[k] * x[idx];
      if (++idx == n) idx = 0;
    }
    approx[out] = a;
    detail[out] = d;
  }
}

void synthesize(const double* approx, const double* detail, std::size_t n, const QuadFilterBank& bank,
                double* out) {
  const std::size_t len = bank.length();
  const double* lo = bank.rec_lo.data();
  const double* hi = bank.rec_hi.data();
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
  // Transpose of analyze(): coefficient m spreads over x[(2m + k) mod n],
  // weighted by the analysis tap k, i.e. rec tap len-1-k.
  for (std::size_t m = 0; m < n / 2; ++m) {
    const double a = approx[m];
    const double d = detail[m];
    std::size_t idx = (2 * m) % n;
    for (std::size_t k = 0; k < len; ++k) {
      out[idx] += lo[len - 1 - k] * a + hi[len - 1 - k] * d;
      if (++idx == n) idx = 0;
    }
  }
}

}  // namespace kernels

Subbands analysis_step(std::span<const double> signal, const QuadFilterBank& bank) {
  if (signal.size() < 2 || signal.size() % 2 != 0) {
    throw ValidationError("analysis step needs an even signal length >= 2, got " +
                          std::to_string(signal.size()));
  }
  if (bank.length() == 0) throw ValidationError("empty filter bank");
  Subbands out;
  out.approx.resize(signal.size() / 2);
  out.detail.resize(signal.size() / 2);
  kernels::analyze(signal.data(), signal.size(), bank, out.approx.data(), out.detail.data());
  return out;
}

std::vector<double> synthesis_step(std::span<const double> approx, std::span<const double> detail,
                                   const QuadFilterBank& bank) {
  if (approx.size() != detail.size()) {
    throw ValidationError("synthesis step: approx has " + std::to_string(approx.size()) +
                          " coefficients, detail has " + std::to_string(detail.size()));
  }
  if (approx.empty()) throw ValidationError("synthesis step: empty subbands");
  if (bank.length() == 0) throw ValidationError("empty filter bank");
  std::vector<double> out(approx.size() * 2);
  kernels::synthesize(approx.data(), detail.data(), out.size(), bank, out.data());
  return out;
}

}  // namespace hrvwp
