#pragma once

// Test-only reference computations for the stats module. Nothing here calls
// into the library's ANOVA or incomplete-beta code.

#include <cmath>
#include <functional>
#include <vector>

#include "hrvwp/stats.hpp"

namespace hrvwp::oracles {

/// SS from residual sums of squares of nested least-squares fits: grand mean,
/// row means, column means, additive (row + column - grand), cell means.
inline SumsOfSquares fitted_means_ss(const FactorialData& d) {
  const std::size_t R = d.rows(), C = d.cols(), K = d.reps();
  auto mean_where = [&](const std::function<bool(std::size_t, std::size_t)>& keep) {
    long double s = 0.0L;
    std::size_t n = 0;
    for (std::size_t r = 0; r < R; ++r)
      for (std::size_t c = 0; c < C; ++c)
        if (keep(r, c))
          for (std::size_t k = 0; k < K; ++k) {
            s += d.at(r, c, k);
            ++n;
          }
    return static_cast<double>(s / n);
  };
  const double grand = mean_where([](std::size_t, std::size_t) { return true; });
  std::vector<double> rm(R), cm(C), cell(R * C);
  for (std::size_t r = 0; r < R; ++r) rm[r] = mean_where([r](std::size_t rr, std::size_t) { return rr == r; });
  for (std::size_t c = 0; c < C; ++c) cm[c] = mean_where([c](std::size_t, std::size_t cc) { return cc == c; });
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t c = 0; c < C; ++c)
      cell[r * C + c] = mean_where([r, c](std::size_t rr, std::size_t cc) { return rr == r && cc == c; });

  auto rss = [&](const std::function<double(std::size_t, std::size_t)>& fitted) {
    long double s = 0.0L;
    for (std::size_t r = 0; r < R; ++r)
      for (std::size_t c = 0; c < C; ++c)
        for (std::size_t k = 0; k < K; ++k) {
          const long double e = d.at(r, c, k) - fitted(r, c);
          s += e * e;
        }
    return static_cast<double>(s);
  };
  const double rss_grand = rss([&](std::size_t, std::size_t) { return grand; });
  const double rss_rows = rss([&](std::size_t r, std::size_t) { return rm[r]; });
  const double rss_cols = rss([&](std::size_t, std::size_t c) { return cm[c]; });
  const double rss_add = rss([&](std::size_t r, std::size_t c) { return rm[r] + cm[c] - grand; });
  const double rss_cell = rss([&](std::size_t r, std::size_t c) { return cell[r * C + c]; });

  SumsOfSquares ss;
  ss.total = rss_grand;
  ss.rows = rss_grand - rss_rows;
  ss.columns = rss_grand - rss_cols;
  ss.interaction = rss_add - rss_cell;
  ss.error = rss_cell;
  return ss;
}

/// Composite Simpson on the beta-density form of the F tail, after the
/// substitution t = u^2 that makes both integrands polynomial-smooth for
/// integer degrees of freedom.
inline double f_tail_quadrature(double f, int df1, int df2) {
  const double a = df2 / 2.0, b = df1 / 2.0;
  const double x = df2 / (df2 + df1 * f);
  const double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  auto simpson = [](const std::function<double(double)>& g, double hi) {
    const int n = 20000;
    const double h = hi / n;
    double s = g(0.0) + g(hi);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * g(i * h);
    return s * h / 3.0;
  };
  // I_x(a, b) = (2/B) * int_0^sqrt(x) u^(2a-1) (1-u^2)^(b-1) du.
  auto lower = [&](double p, double q, double upper_x) {
    return 2.0 * std::exp(-log_beta) *
           simpson([p, q](double u) { return std::pow(u, 2 * p - 1) * std::pow(1 - u * u, q - 1); },
                   std::sqrt(upper_x));
  };
  if (x <= 0.5) return lower(a, b, x);
  return 1.0 - lower(b, a, 1.0 - x);
}

}  // namespace hrvwp::oracles
