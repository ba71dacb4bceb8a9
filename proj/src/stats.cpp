#include "hrvwp/stats.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hrvwp/errors.hpp"

namespace hrvwp {

FactorialData::FactorialData(std::size_t rows, std::size_t cols, std::size_t reps, std::vector<double> values)
    : rows_(rows), cols_(cols), reps_(reps), values_(std::move(values)) {
  if (rows_ == 0 || cols_ == 0 || reps_ == 0) throw ValidationError("factorial design has an empty dimension");
  if (values_.size() != rows_ * cols_ * reps_) {
    throw ValidationError("factorial design expects " + std::to_string(rows_ * cols_ * reps_) +
                          " values, got " + std::to_string(values_.size()));
  }
}

FactorialData FactorialData::from_cells(const std::vector<std::vector<std::vector<double>>>& cells) {
  if (cells.empty() || cells.front().empty() || cells.front().front().empty()) {
    throw ValidationError("factorial design has an empty dimension");
  }
  const std::size_t cols = cells.front().size();
  const std::size_t reps = cells.front().front().size();
  std::vector<double> values;
  values.reserve(cells.size() * cols * reps);
  for (std::size_t r = 0; r < cells.size(); ++r) {
    if (cells[r].size() != cols) throw ValidationError("unbalanced design: row " + std::to_string(r) + " is ragged");
    for (std::size_t c = 0; c < cols; ++c) {
      if (cells[r][c].size() != reps) {
        throw ValidationError("unbalanced design: cell (" + std::to_string(r) + ", " + std::to_string(c) + ") has " +
                              std::to_string(cells[r][c].size()) + " replicates, expected " + std::to_string(reps));
      }
      values.insert(values.end(), cells[r][c].begin(), cells[r][c].end());
    }
  }
  return FactorialData(cells.size(), cols, reps, std::move(values));
}

SumsOfSquares sums_of_squares(const FactorialData& data) {
  const std::size_t R = data.rows(), C = data.cols(), K = data.reps();
  if (K < 2) throw ValidationError("two-way ANOVA with interaction needs at least 2 replicates per cell");

  std::vector<double> cell_mean(R * C, 0.0), row_mean(R, 0.0), col_mean(C, 0.0);
  double grand = 0.0;
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t c = 0; c < C; ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < K; ++k) s += data.at(r, c, k);
      cell_mean[r * C + c] = s / static_cast<double>(K);
      row_mean[r] += s;
      col_mean[c] += s;
      grand += s;
    }
  }
  for (auto& m : row_mean) m /= static_cast<double>(C * K);
  for (auto& m : col_mean) m /= static_cast<double>(R * K);
  grand /= static_cast<double>(R * C * K);

  SumsOfSquares ss;
  for (std::size_t r = 0; r < R; ++r) ss.rows += (row_mean[r] - grand) * (row_mean[r] - grand);
  ss.rows *= static_cast<double>(C * K);
  for (std::size_t c = 0; c < C; ++c) ss.columns += (col_mean[c] - grand) * (col_mean[c] - grand);
  ss.columns *= static_cast<double>(R * K);
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t c = 0; c < C; ++c) {
      const double cm = cell_mean[r * C + c];
      const double inter = cm - row_mean[r] - col_mean[c] + grand;
      ss.interaction += static_cast<double>(K) * inter * inter;
      for (std::size_t k = 0; k < K; ++k) {
        const double y = data.at(r, c, k);
        ss.error += (y - cm) * (y - cm);
        ss.total += (y - grand) * (y - grand);
      }
    }
  }
  return ss;
}

std::string_view to_string(AnovaSource s) {
  switch (s) {
    case AnovaSource::Columns: return "Columns";
    case AnovaSource::Rows: return "Rows";
    case AnovaSource::Interaction: return "Interaction";
    case AnovaSource::Error: return "Error";
    case AnovaSource::Total: return "Total";
  }
  return "Total";
}

AnovaTable anova_table_from_sums(const SumsOfSquares& ss, std::size_t rows, std::size_t cols, std::size_t reps) {
  if (rows < 2 || cols < 2) throw ValidationError("two-way ANOVA needs at least 2 rows and 2 columns");
  if (reps < 2) throw ValidationError("two-way ANOVA with interaction needs at least 2 replicates per cell");
  const int R = static_cast<int>(rows), C = static_cast<int>(cols), K = static_cast<int>(reps);

  AnovaTable t;
  auto& col = t[AnovaSource::Columns];
  auto& row = t[AnovaSource::Rows];
  auto& inter = t[AnovaSource::Interaction];
  auto& err = t[AnovaSource::Error];
  auto& tot = t[AnovaSource::Total];
  col = {AnovaSource::Columns, ss.columns, C - 1, {}, {}, {}};
  row = {AnovaSource::Rows, ss.rows, R - 1, {}, {}, {}};
  inter = {AnovaSource::Interaction, ss.interaction, (R - 1) * (C - 1), {}, {}, {}};
  err = {AnovaSource::Error, ss.error, R * C * (K - 1), {}, {}, {}};
  tot = {AnovaSource::Total, ss.total, R * C * K - 1, {}, {}, {}};

  const double ms_error = ss.error / err.df;
  err.ms = ms_error;
  if (!(ms_error > 0.0)) throw DegenerateDataError("error mean square is zero; F ratios are undefined");
  for (AnovaRow* effect : {&col, &row, &inter}) {
    effect->ms = effect->ss / effect->df;
    effect->f = *effect->ms / ms_error;
    effect->p = f_tail_probability(*effect->f, effect->df, err.df);
  }
  return t;
}

AnovaTable anova_two_way(const FactorialData& data) {
  const SumsOfSquares ss = sums_of_squares(data);
  double scale = 0.0;
  for (double v : data.values()) scale += v * v;
  // Within-cell spread at rounding level counts as none.
  if (ss.error <= 1e-20 * scale) throw DegenerateDataError("within-cell variance is zero; F ratios are undefined");
  return anova_table_from_sums(ss, data.rows(), data.cols(), data.reps());
}

namespace {

// Modified Lentz evaluation of the incomplete-beta continued fraction.
double beta_continued_fraction(double x, double a, double b) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return h;
  }
  throw Error("incomplete beta continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw ValidationError("incomplete beta needs a > 0 and b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("incomplete beta needs 0 <= x <= 1");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(x, a, b) / a;
  return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

double f_tail_probability(double f, int df1, int df2) {
  if (df1 < 1 || df2 < 1) throw ValidationError("F distribution needs df1 >= 1 and df2 >= 1");
  if (!(f >= 0.0)) throw ValidationError("F statistic must be non-negative");
  if (std::isinf(f)) return 0.0;
  const double d1 = df1, d2 = df2;
  const double x = d2 / (d2 + d1 * f);
  return regularized_incomplete_beta(x, d2 / 2.0, d1 / 2.0);
}

}  // namespace hrvwp
