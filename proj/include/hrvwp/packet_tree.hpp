#pragma once

// Full wavelet packet tree with frequency-ordered node addressing.
//
// Internally each level is one contiguous buffer of N coefficients holding
// the 2^m nodes in filter-bank ("natural") order: the children of natural
// node n are 2n (low-pass) and 2n+1 (high-pass). Because the high-pass
// branch mirrors the spectrum on downsampling, natural order is not
// frequency-monotone. Frequency slot f lives at natural index gray(f) =
// f ^ (f >> 1); every public accessor takes frequency-ordered indices.

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "hrvwp/ingest.hpp"
#include "hrvwp/wavelet.hpp"

namespace hrvwp {

constexpr std::size_t gray_code(std::size_t f) { return f ^ (f >> 1); }

constexpr std::size_t inverse_gray_code(std::size_t g) {
  std::size_t f = g;
  for (std::size_t shift = 1; shift < sizeof(std::size_t) * 8; shift <<= 1) f ^= f >> shift;
  return f;
}

class WpTree {
 public:
  WpTree(std::vector<std::vector<double>> levels, double rate_hz, QuadFilterBank bank);

  std::size_t signal_length() const { return levels_.front().size(); }
  int depth() const { return static_cast<int>(levels_.size()) - 1; }
  double rate_hz() const { return rate_hz_; }
  const QuadFilterBank& bank() const { return bank_; }

  std::size_t node_count(int level) const { return std::size_t{1} << level; }
  std::size_t node_length(int level) const { return signal_length() >> level; }
  std::size_t leaf_count() const { return node_count(depth()); }

  /// Coefficients of node (level, index), index frequency-ordered.
  std::span<const double> node(int level, std::size_t index) const;
  std::span<const double> leaf(std::size_t index) const { return node(depth(), index); }

  /// Coefficients of the node at filter-bank position `natural`.
  std::span<const double> node_natural(int level, std::size_t natural) const;

  /// All coefficients of a level, nodes in natural order.
  std::span<const double> level_buffer(int level) const;

 private:
  void check_node(int level, std::size_t index) const;

  std::vector<std::vector<double>> levels_;
  double rate_hz_;
  QuadFilterBank bank_;
};

/// Splits every node into its two children down to `depth`. Nodes within a
/// level are processed in parallel when OpenMP is enabled. The signal length
/// must be a positive multiple of 2^depth.
WpTree wpt_decompose(const UniformSignal& signal, int depth, const QuadFilterBank& bank);

/// Time-domain component carried by the selected leaves (frequency-ordered
/// indices); every other leaf is zeroed before synthesis. Duplicates are
/// ignored. Selecting every leaf returns the original signal.
std::vector<double> wpt_reconstruct_nodes(const WpTree& tree, std::span<const std::size_t> leaves);

/// Serial reference implementations. Same arithmetic per node as the
/// parallel versions, so results are bit-identical; kept for tests and the
/// benchmark.
namespace reference {
WpTree wpt_decompose(const UniformSignal& signal, int depth, const QuadFilterBank& bank);
std::vector<double> wpt_reconstruct_nodes(const WpTree& tree, std::span<const std::size_t> leaves);
}  // namespace reference

struct FrequencyRange {
  double lo_hz;
  double hi_hz;
};

/// [index * F_s / 2^(level+1), (index+1) * F_s / 2^(level+1)].
FrequencyRange node_frequency_range(int level, std::size_t index, double rate_hz);

enum class Band { LF, HF };

std::string_view to_string(Band b);

/// Default band edges, chosen so that depth 6 at 4 Hz selects the nodes
/// LF = (6,1)..(6,4) and HF = (6,5)..(6,12).
inline constexpr FrequencyRange kDefaultLfBand{0.03125, 0.15625};
inline constexpr FrequencyRange kDefaultHfBand{0.15625, 0.40625};

/// Leaves at `level` whose whole frequency range lies inside `band`, in
/// increasing frequency order. Throws ValidationError if none fit.
std::vector<std::size_t> band_nodes(FrequencyRange band, int level, double rate_hz);
std::vector<std::size_t> band_nodes(Band band, int level, double rate_hz);

}  // namespace hrvwp
