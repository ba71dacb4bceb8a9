#include "hrvwp/packet_tree.hpp"

#include <string>

#include "hrvwp/errors.hpp"

namespace hrvwp {

namespace {

// Below this many samples per level, thread start-up costs more than the level.
constexpr std::size_t kParallelMinLength = 4096;

void check_decompose_args(const UniformSignal& signal, int depth, const QuadFilterBank& bank) {
  if (depth < 0 || depth > 30) throw ValidationError("decomposition depth out of range");
  if (bank.length() == 0) throw ValidationError("empty filter bank");
  const std::size_t block = std::size_t{1} << depth;
  const std::size_t n = signal.samples.size();
  if (n == 0 || n % block != 0) {
    throw ValidationError("signal length " + std::to_string(n) + " is not a positive multiple of 2^" +
                          std::to_string(depth));
  }
  if (!(signal.rate_hz > 0.0)) throw ValidationError("sampling rate must be positive");
}

std::vector<double> leaf_level_with_mask(const WpTree& tree, std::span<const std::size_t> leaves) {
  const int depth = tree.depth();
  const std::size_t count = tree.leaf_count();
  const std::size_t len = tree.node_length(depth);
  std::vector<char> keep(count, 0);
  for (std::size_t f : leaves) {
    if (f >= count) {
      throw ValidationError("leaf index " + std::to_string(f) + " out of range [0, " + std::to_string(count) +
                            ")");
    }
    keep[gray_code(f)] = 1;
  }
  const auto src = tree.level_buffer(depth);
  std::vector<double> buf(src.size(), 0.0);
  for (std::size_t natural = 0; natural < count; ++natural) {
    if (!keep[natural]) continue;
    for (std::size_t i = 0; i < len; ++i) buf[natural * len + i] = src[natural * len + i];
  }
  return buf;
}

template <bool Parallel>
WpTree decompose_impl(const UniformSignal& signal, int depth, const QuadFilterBank& bank) {
  check_decompose_args(signal, depth, bank);
  const std::size_t n = signal.samples.size();
  std::vector<std::vector<double>> levels(static_cast<std::size_t>(depth) + 1);
  levels[0] = signal.samples;
  for (int m = 0; m < depth; ++m) {
    const auto nodes = static_cast<long long>(std::size_t{1} << m);
    const std::size_t len = n >> m;
    const double* src = levels[static_cast<std::size_t>(m)].data();
    auto& next = levels[static_cast<std::size_t>(m) + 1];
    next.assign(n, 0.0);
    double* dst = next.data();
    // Parent slot [p*len, (p+1)*len) becomes children 2p and 2p+1, each len/2 long.
    if constexpr (Parallel) {
#pragma omp parallel for schedule(static) if (nodes > 1 && n >= kParallelMinLength)
      for (long long p = 0; p < nodes; ++p) {
        const auto off = static_cast<std::size_t>(p) * len;
        kernels::analyze(src + off, len, bank, dst + off, dst + off + len / 2);
      }
    } else {
      for (long long p = 0; p < nodes; ++p) {
        const auto off = static_cast<std::size_t>(p) * len;
        kernels::analyze(src + off, len, bank, dst + off, dst + off + len / 2);
      }
    }
  }
  return WpTree(std::move(levels), signal.rate_hz, bank);
}

template <bool Parallel>
std::vector<double> reconstruct_impl(const WpTree& tree, std::span<const std::size_t> leaves) {
  std::vector<double> child = leaf_level_with_mask(tree, leaves);
  const std::size_t n = tree.signal_length();
  std::vector<double> parent(n, 0.0);
  const QuadFilterBank& bank = tree.bank();
  for (int m = tree.depth(); m > 0; --m) {
    const auto nodes = static_cast<long long>(tree.node_count(m - 1));
    const std::size_t len = n >> (m - 1);
    const double* src = child.data();
    double* dst = parent.data();
    if constexpr (Parallel) {
#pragma omp parallel for schedule(static) if (nodes > 1 && n >= kParallelMinLength)
      for (long long p = 0; p < nodes; ++p) {
        const auto off = static_cast<std::size_t>(p) * len;
        kernels::synthesize(src + off, src + off + len / 2, len, bank, dst + off);
      }
    } else {
      for (long long p = 0; p < nodes; ++p) {
        const auto off = static_cast<std::size_t>(p) * len;
        kernels::synthesize(src + off, src + off + len / 2, len, bank, dst + off);
      }
    }
    child.swap(parent);
  }
  return child;
}

}  // namespace

WpTree::WpTree(std::vector<std::vector<double>> levels, double rate_hz, QuadFilterBank bank)
    : levels_(std::move(levels)), rate_hz_(rate_hz), bank_(std::move(bank)) {
  if (levels_.empty() || levels_.front().empty()) throw ValidationError("packet tree needs a signal");
  for (const auto& lvl : levels_) {
    if (lvl.size() != levels_.front().size()) throw ValidationError("packet tree levels differ in length");
  }
  if (signal_length() % (std::size_t{1} << depth()) != 0) {
    throw ValidationError("packet tree signal length is not a multiple of 2^depth");
  }
}

void WpTree::check_node(int level, std::size_t index) const {
  if (level < 0 || level > depth()) {
    throw ValidationError("level " + std::to_string(level) + " outside [0, " + std::to_string(depth()) + "]");
  }
  if (index >= node_count(level)) {
    throw ValidationError("node index " + std::to_string(index) + " out of range at level " +
                          std::to_string(level));
  }
}

std::span<const double> WpTree::node(int level, std::size_t index) const {
  check_node(level, index);
  return node_natural(level, gray_code(index));
}

std::span<const double> WpTree::node_natural(int level, std::size_t natural) const {
  check_node(level, natural);
  const std::size_t len = node_length(level);
  return std::span<const double>(levels_[static_cast<std::size_t>(level)]).subspan(natural * len, len);
}

std::span<const double> WpTree::level_buffer(int level) const {
  check_node(level, 0);
  return levels_[static_cast<std::size_t>(level)];
}

WpTree wpt_decompose(const UniformSignal& signal, int depth, const QuadFilterBank& bank) {
  return decompose_impl<true>(signal, depth, bank);
}

std::vector<double> wpt_reconstruct_nodes(const WpTree& tree, std::span<const std::size_t> leaves) {
  return reconstruct_impl<true>(tree, leaves);
}

namespace reference {

WpTree wpt_decompose(const UniformSignal& signal, int depth, const QuadFilterBank& bank) {
  return decompose_impl<false>(signal, depth, bank);
}

std::vector<double> wpt_reconstruct_nodes(const WpTree& tree, std::span<const std::size_t> leaves) {
  return reconstruct_impl<false>(tree, leaves);
}

}  // namespace reference

FrequencyRange node_frequency_range(int level, std::size_t index, double rate_hz) {
  if (level < 0 || level > 30) throw ValidationError("level out of range");
  if (index >= (std::size_t{1} << level)) {
    throw ValidationError("node index " + std::to_string(index) + " out of range at level " +
                          std::to_string(level));
  }
  if (!(rate_hz > 0.0)) throw ValidationError("sampling rate must be positive");
  const double width = rate_hz / static_cast<double>(std::size_t{2} << level);
  return {static_cast<double>(index) * width, static_cast<double>(index + 1) * width};
}

std::string_view to_string(Band b) { return b == Band::LF ? "LF" : "HF"; }

std::vector<std::size_t> band_nodes(FrequencyRange band, int level, double rate_hz) {
  if (!(band.hi_hz > band.lo_hz) || band.lo_hz < 0.0) {
    throw ValidationError("band edges must satisfy 0 <= lo < hi");
  }
  const double eps = 1e-12 * rate_hz;
  std::vector<std::size_t> out;
  const std::size_t count = std::size_t{1} << level;
  for (std::size_t j = 0; j < count; ++j) {
    const auto r = node_frequency_range(level, j, rate_hz);
    if (r.lo_hz >= band.lo_hz - eps && r.hi_hz <= band.hi_hz + eps) out.push_back(j);
  }
  if (out.empty()) {
    throw ValidationError("no level-" + std::to_string(level) + " node fits inside " +
                          std::to_string(band.lo_hz) + "-" + std::to_string(band.hi_hz) + " Hz");
  }
  return out;
}

std::vector<std::size_t> band_nodes(Band band, int level, double rate_hz) {
  return band_nodes(band == Band::LF ? kDefaultLfBand : kDefaultHfBand, level, rate_hz);
}

}  // namespace hrvwp
