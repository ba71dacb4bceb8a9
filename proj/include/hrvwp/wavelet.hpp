#pragma once

// Orthonormal Daubechies filter banks and the periodized one-level
// analysis/synthesis steps the packet tree is built from.

#include <cstddef>
#include <span>
#include <vector>

namespace hrvwp {

/// Two-channel orthonormal filter bank.
///
/// Analysis is a correlation followed by downsampling:
///   approx[n] = sum_k dec_lo[k] * x[(2n + k) mod N]
///   detail[n] = sum_k dec_hi[k] * x[(2n + k) mod N]
/// with dec_hi[k] = (-1)^k * dec_lo[len - 1 - k]. The synthesis filters are
/// the time reverses of the analysis filters, so synthesis is the transpose
/// (and, by orthonormality, the inverse) of analysis.
struct QuadFilterBank {
  std::vector<double> dec_lo;
  std::vector<double> dec_hi;
  std::vector<double> rec_lo;
  std::vector<double> rec_hi;
  int order = 0;

  std::size_t length() const { return dec_lo.size(); }
};

inline constexpr int kMinDaubechiesOrder = 1;
inline constexpr int kMaxDaubechiesOrder = 10;

/// Daubechies filters with `order` vanishing moments (2*order taps), built by
/// spectral factorization. Order 1 is Haar; order 4 is "db4".
QuadFilterBank daubechies_filters(int order);

struct Subbands {
  std::vector<double> approx;
  std::vector<double> detail;
};

/// One periodized analysis level. The signal length must be even and >= 2;
/// filters longer than the signal wrap around more than once.
Subbands analysis_step(std::span<const double> signal, const QuadFilterBank& bank);

/// Inverse of analysis_step. Both inputs must have the same length.
std::vector<double> synthesis_step(std::span<const double> approx, std::span<const double> detail,
                                   const QuadFilterBank& bank);

// Raw-pointer kernels shared by the step functions and the packet tree.
// `n` is the input length for analysis and the output length for synthesis.
namespace kernels {
void analyze(const double* x, std::size_t n, const QuadFilterBank& bank, double* approx, double* detail);
void synthesize(const double* approx, const double* detail, std::size_t n, const QuadFilterBank& bank,
                double* out);
}  // namespace kernels

}  // namespace hrvwp
